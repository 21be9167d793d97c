#ifndef SBMC_ENERGY_HPP
#define SBMC_ENERGY_HPP

#include <vector>

#include "sbmc/estimators.hpp"
#include "sbmc/sampler.hpp"

namespace sbmc {

struct LadderTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnergyLadderNode {
    double lambda = 0.0;
    double mean_action = 0.0;
    double stderror = 0.0;
    double tau_int = 0.0;
};

struct EnergyResult {
    double value = 0.0;      // Richardson extrapolation over the T ladder
    double stderror = 0.0;
    double systematic = 0.0;  // |E(T) - E(T/2)|
    double e_at_T = 0.0;
    double e_at_half_T = 0.0;
    std::vector<EnergyLadderNode> integrand;  // at the full T
    double curvature = 0.0;   // |simpson - trapezoid| / |integral|
};

struct EnergyOptions {
    int nodes = 7;            // >= 5, odd for composite Simpson
    long burnin_sweeps = 500;
    long measure_sweeps = 6000;
    bool richardson = true;   // also run at T/2 and extrapolate
    double curvature_tol = 0.05;
};

// E = -eps - (1/(2T)) \int_0^{alpha^2/2} <A>_lambda dlambda, the coupling
// integral evaluated node by node with dedicated chains.
EnergyResult energy(const McmcConfig& base, const KernelSet& ks,
                    const EnergyOptions& opt = {});

}  // namespace sbmc

#endif

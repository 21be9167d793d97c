#ifndef SBMC_ESTIMATORS_HPP
#define SBMC_ESTIMATORS_HPP

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sbmc/kernels.hpp"
#include "sbmc/sampler.hpp"
#include "sbmc/statistics.hpp"

namespace sbmc {

struct FitWindowBad : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EstimatorResult {
    std::string name;
    std::string formula_id;
    double value = 0.0;
    double stderror = 0.0;
    double tau_int = 0.0;
    double systematic = 0.0;  // deterministic truncation-tail bound
    std::size_t n_samples = 0;
    std::string note;
};

// which spin factor multiplies the observable
enum class Xi { One, Sigma };

namespace est {

// <Y_0> with per-sample global-flip symmetrization; identically zero.
EstimatorResult spin_mean_symmetrized(const SampleSet& s);

struct CorrelationPoint {
    double lag = 0.0;
    stats::Summary stat;
};
// time-translation averaged <Y_0 Y_t> on the probe grid
std::vector<CorrelationPoint> spin_correlation(const SampleSet& s,
                                               int max_lag = -1);

struct GapFit {
    double gap = 0.0;
    double gap_err = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
};
// log-linear fit of the correlation over [t_lo, t_hi]; throws FitWindowBad on
// non-positive or non-monotone correlations inside the window
GapFit gap_fit(const std::vector<CorrelationPoint>& corr, double t_lo,
               double t_hi);

// <xi e^{i beta phi(f)}> = e^{-beta^2 ||f||^2/4} <xi cos(beta K)> (real part;
// the imaginary part vanishes by flip symmetry)
EstimatorResult char_fn(const SampleSet& s, const KernelSet& ks,
                        const std::string& f, double beta, Xi xi = Xi::One);

// <xi phi(f)^n> via the Hermite recurrence in K
EstimatorResult field_moment(const SampleSet& s, const KernelSet& ks,
                             const std::string& f, int n, Xi xi = Xi::One);

// <F(phi(f))> = <G(K)>, G = Gaussian smoothing of F with variance ||f||^2/2,
// computed by convolution on a grid covering the K range
EstimatorResult field_function(const SampleSet& s, const KernelSet& ks,
                               const std::string& f,
                               const std::function<double(double)>& F);

struct Fluctuations {
    EstimatorResult sigma_phi;  // <sigma phi(f)> = <Y_0 K>
    EstimatorResult F_alpha;    // <K^2> + ||f||^2/2
    EstimatorResult G_alpha;    // <(Y_0 K)^2> - <Y_0 K>^2 + ||f||^2/2
};
Fluctuations fluctuations(const SampleSet& s, const KernelSet& ks,
                          const std::string& f);

// ||e^{(beta/2) phi(f)^2} state||^2 for beta < 1/||f||^2
EstimatorResult gaussian_moment(const SampleSet& s, const KernelSet& ks,
                                const std::string& f, double beta);

// fractional moment <|phi(f)|^s> via the subordinator integral
EstimatorResult fractional_moment(const SampleSet& s, const KernelSet& ks,
                                  const std::string& f, double order_s);

// closed form of the alpha = 0 value of the same integral
double fractional_moment_free(double norm_f_sq, double order_s);

struct ExpMomentPair {
    EstimatorResult plain;  // <e^{beta phi}> = e^{beta^2||f||^2/4}<cosh beta K>
    EstimatorResult sigma;  // <sigma e^{beta phi}> via <Y_0 sinh beta K>
};
ExpMomentPair exp_moment(const SampleSet& s, const KernelSet& ks,
                         const std::string& f, double beta);

// <e^{-alpha^2 (1 - e^{-beta}) W_inf>> for complex beta
struct ComplexResult {
    EstimatorResult real_part;
    EstimatorResult imag_part;
};
ComplexResult boson_generating(const SampleSet& s, const KernelSet& ks,
                               std::complex<double> beta);

struct ParityPair {
    EstimatorResult number;      // <(-1)^N> = <e^{-2 alpha^2 W_inf}>
    EstimatorResult spin;        // <Y_0 e^{-2 alpha^2 W_inf}>
    double lower_bound = 0.0;    // e^{-alpha^2 ||h/w||^2}
};
ParityPair parity_pair(const SampleSet& s, const KernelSet& ks);

// <N^m> = sum_r S(m,r) alpha^{2r} <W_inf^r>
EstimatorResult n_moment(const SampleSet& s, const KernelSet& ks, int m);

struct ResolventRow {
    double omega = 0.0;
    double R = 0.0;     // \int_0^inf e^{-w r} <Y_0 Y_r> dr
    double G_hat = 0.0; // (alpha/2) R(w) sqrt(rho(w))
};
struct ResolventReport {
    EstimatorResult boson_number;     // alpha^2 \int t C(t) w_amp(t) dt
    EstimatorResult sigma_phi_bound;  // (alpha^2/2) \int C(t) (M1 - k1(t)) dt
    double upper_bound = 0.0;         // (alpha^2/2) ||h/w||^2
    double fitted_gap = 0.0;
    bool chain_holds = false;  // number <= sigma_phi_bound <= upper within 3 sigma
    std::vector<ResolventRow> table;
};
ResolventReport resolvent(const SampleSet& s, const KernelSet& ks,
                          const std::vector<double>& omega_grid,
                          const GapFit& fit);

}  // namespace est

}  // namespace sbmc

#endif

#ifndef SBMC_ORACLE_ED_HPP
#define SBMC_ORACLE_ED_HPP

#include <map>
#include <string>
#include <vector>

#include "sbmc/lanczos.hpp"

namespace sbmc {

// Truncated two-level-plus-modes Hamiltonian in the rotated form
//   H = -eps sigma_x + sum_m w_m a_m^+ a_m + alpha sigma_z sum_m (g_m/sqrt2)(a_m + a_m^+)
// on C^2 (x) prod_m C^{n_max+1}.  sigma_z = +1 on spin index 0.
struct TruncatedModel {
    struct Mode {
        double g;
        double omega;
    };
    double eps = 1.0;
    double alpha = 0.0;
    std::vector<Mode> modes;
    int n_max = 30;

    std::size_t dim() const;
    void validate() const;  // dimension budget 2 (n_max+1)^M <= 2^15
};

struct GroundStateResult {
    double energy = 0.0;
    // excitation energies seen by the sigma_z * ground-state channel: the
    // weight-dominant one is what a log-linear correlation fit measures in
    // any practical window; the sector-lowest one wins only asymptotically
    double gap = 0.0;         // dominant-weight excitation
    double gap_sector = 0.0;  // lowest excitation with non-negligible weight
    double gap_weight = 0.0;  // spectral weight of the dominant excitation
    std::vector<double> state;
    double residual = 0.0;
    int iterations = 0;
};

// matrix-free H v
MatVec hamiltonian_matvec(const TruncatedModel& model);

GroundStateResult ground_state(const TruncatedModel& model);

// spectral decomposition of the sigma_z * ground-state correlation channel:
// <sg| e^{-t(H-E0)} |sg> = sum_j weight_j e^{-t(node_j - E0)}
SpectralQuadrature sigma_z_channel(const TruncatedModel& model,
                                   const std::vector<double>& state);

// Second-order perturbative reference E = -eps - alpha^2/2 sum g^2/(2 eps + w).
double perturbative_energy(const TruncatedModel& model);

// Ground-state observable table.  f is given by per-mode coefficients; the
// defaults f = h (g_m) and f = h/omega (g_m / w_m) are built on request.
struct EdObservables {
    double N = 0.0, N2 = 0.0, N3 = 0.0, N4 = 0.0;
    double boson_parity = 0.0;       // <(-1)^N>
    double spin_boson_parity = 0.0;  // conserved parity sector value, exactly -1
    double spin_times_boson_parity = 0.0;  // <sigma_z (-1)^N>, zero by symmetry
    std::map<std::string, double> extra;
};

EdObservables observables(const TruncatedModel& model,
                          const std::vector<double>& state);

// <e^{beta N}> for real beta (diagonal in the Fock basis)
double exp_number_moment(const TruncatedModel& model,
                         const std::vector<double>& state, double beta);

class FieldOperator {
  public:
    FieldOperator(const TruncatedModel& model, std::vector<double> f_coef);

    // <state| F(phi(f)) |state> by Gauss quadrature w.r.t. the spectral
    // measure of phi(f) seeded with the state
    double expectation(const std::vector<double>& state,
                       const std::function<double(double)>& F,
                       int order = 200) const;

    // <state| sigma_z F(phi(f)) |state> via polarization
    double sigma_expectation(const std::vector<double>& state,
                             const std::function<double(double)>& F,
                             int order = 200) const;

    // plain moments <phi^n> by repeated mat-vec (exact in the truncation)
    double moment(const std::vector<double>& state, int n) const;

    double norm_f_sq() const { return norm_f_sq_; }
    const MatVec& matvec() const { return mv_; }

  private:
    std::size_t dim_;
    MatVec mv_;
    double norm_f_sq_;
};

// E0 at increasing cutoffs until |E0(n) - E0(n-4)| < tol; returns the ladder.
std::vector<double> cutoff_ladder(TruncatedModel model, int n_lo, int n_hi,
                                  int step = 4);

}  // namespace sbmc

#endif

#ifndef SBMC_ORACLE_PATHSUM_HPP
#define SBMC_ORACLE_PATHSUM_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sbmc {

struct TooManySlots : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Slotted caricature of the jump measure: at most one jump per slot, jumps at
// slot centers, initial sign v.  State index = v_bit * 2^m + occupancy bits.
// Per-slot flip weight p = P(odd number of rate-eps flips in a slot)
//   = (1 - e^{-2 eps dt}) / 2,
// so the target is pi(v,b) ~ (p/(1-p))^{n(b)} exp(lambda A_d(v,b)) with the
// trapezoid double-sum action on the slot-boundary spins.
class DiscretizedSystem {
  public:
    DiscretizedSystem(double T, double eps, double lambda, int slots,
                      std::function<double(double)> w_amp);

    int slots() const { return m_; }
    std::size_t states() const { return std::size_t{2} << m_; }
    double slot_width() const { return dt_; }
    double jump_weight() const { return rho_; }  // p/(1-p)
    double T() const { return T_; }

    double action(std::size_t state) const { return action_[state]; }
    double log_weight(std::size_t state) const;
    double weight(std::size_t state) const;

    int jump_count(std::size_t state) const;
    int initial_sign(std::size_t state) const;
    // spin at slot boundary j = 0..m (cadlag path value at t_j = -T + j dt)
    int boundary_spin(std::size_t state, int j) const;
    double boundary_time(int j) const { return -T_ + dt_ * j; }

    // trapezoid quadrant sum over boundary nodes with t<0 and t>0
    double quadrant(std::size_t state) const;

    struct Marginals {
        std::vector<double> spin_up;     // P(y_j = +1), j = 0..m
        std::vector<double> njump_dist;  // P(n), n = 0..m
        std::vector<double> pair_corr;   // E[y_0 y_j], j = 0..m
        double mean_jumps = 0.0;
        double mean_action = 0.0;
        double log_z = 0.0;
    };
    // exact enumeration over all 2 * 2^m states
    Marginals exact_marginals() const;

    // E[f(state)] under the exact distribution
    double expectation(const std::function<double(std::size_t)>& f) const;

    // free-theory closed form E[y_0 y_j] = (1-2p)^{|j|} for lambda = 0
    double free_pair_corr(int j) const;

  private:
    double T_, eps_, lambda_, dt_, p_, rho_;
    int m_;
    std::vector<double> action_;
    std::vector<double> wmat_;  // w_amp(t_j - t_l) including trapezoid weights
};

}  // namespace sbmc

#endif

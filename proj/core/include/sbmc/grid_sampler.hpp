#ifndef SBMC_GRID_SAMPLER_HPP
#define SBMC_GRID_SAMPLER_HPP

#include <array>
#include <vector>

#include "sbmc/oracle_pathsum.hpp"
#include "sbmc/rng.hpp"

namespace sbmc {

// The production move set restricted to the slotted state space of a
// DiscretizedSystem, where stationarity is checkable exactly: the full
// transition matrix is small enough to verify pi P = pi to float precision.
class GridSampler {
  public:
    struct Options {
        std::array<double, 6> move_prob = {0.3, 0.3, 0.2, 0.07, 0.07, 0.06};
        int shift_range = 2;  // proposal offsets +-1..shift_range
        int pair_range = 2;   // proposal gaps 1..pair_range
    };

    explicit GridSampler(const DiscretizedSystem& sys);
    GridSampler(const DiscretizedSystem& sys, Options opt);

    std::size_t step(std::size_t state, Rng& rng) const;

    struct Empirical {
        std::vector<double> spin_up;
        std::vector<double> njump_dist;
        long steps = 0;
    };
    Empirical run(std::size_t start, long steps, Rng& rng) const;

    // dense transition matrix over all states (row-stochastic)
    std::vector<double> transition_matrix() const;

    // max_x |sum_y pi(y) P(y,x) - pi(x)| for the exact target pi
    double stationarity_residual() const;
    // max_x |sum_y P(x,y) - 1|
    double row_sum_residual() const;

    const DiscretizedSystem& system() const { return sys_; }

  private:
    // enumerate proposals (state', proposal probability, acceptance) for one
    // move type from a state
    struct Proposal {
        std::size_t to;
        double prob;    // probability of proposing this state'
        double accept;  // Metropolis acceptance
    };
    void proposals(std::size_t state, int move, std::vector<Proposal>& out) const;

    const DiscretizedSystem& sys_;
    Options opt_;
};

}  // namespace sbmc

#endif

#ifndef SBMC_SAMPLER_HPP
#define SBMC_SAMPLER_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sbmc/path.hpp"
#include "sbmc/rng.hpp"

namespace sbmc {

enum class Move : int {
    Insert = 0,
    Delete,
    Shift,
    PairInsert,
    PairDelete,
    GlobalFlip,
    Count
};

inline constexpr std::array<const char*, 6> kMoveNames = {
    "insert", "delete", "shift", "pair_insert", "pair_delete", "global_flip"};

// Target on [-T,T]: density eps^n * exp(lambda_run * A(Y)) with respect to
// uniform initial sign x homogeneous unit-rate Poisson jumps.  lambda_run is
// kept separate from alpha so thermodynamic-integration ladders reuse the
// sampler; the physical measure has lambda_run = alpha^2/2.
struct McmcConfig {
    double T = 10.0;
    double eps = 1.0;
    double alpha = 0.0;
    double lambda_run = 0.0;

    std::array<double, 6> move_prob = {0.25, 0.25, 0.25, 0.1, 0.1, 0.05};
    double shift_width = 0.5;
    double pair_width = 1.0;

    int sweep_moves = 0;  // 0: auto, max(16, 2 * ceil(2 T eps))
    long burnin_sweeps = 1000;
    long measure_sweeps = 10000;

    std::uint64_t seed = 1;
    int chains = 1;

    // measurement window and quadrant/K truncation
    double t_w = 0.0;      // 0: auto, T - margin
    double t_prime = 0.0;  // 0: use t_w
    int n_probe = 81;      // spin probes on [-t_w, t_w]

    int resolved_sweep_moves() const;
    double resolved_t_w(double omega_typ) const;

    void validate() const;  // throws std::invalid_argument
};

struct MoveCounters {
    std::array<long, 6> attempted = {};
    std::array<long, 6> accepted = {};
};

struct ChainState {
    SpinPath path;
    double action = 0.0;  // cached pair_action(path)
    Rng rng;
    MoveCounters counters;
    long sweeps_done = 0;
    double max_cache_drift = 0.0;
    int cache_refreshes = 0;
};

ChainState make_initial_state(const McmcConfig& cfg, const KernelSet& ks,
                              std::uint64_t chain_index);

// One elementary Metropolis move; rejected proposals leave state unchanged.
void step(ChainState& state, const McmcConfig& cfg, const KernelSet& ks);

// Per-measurement-sweep record of path functionals.
struct SampleSet {
    std::vector<double> action;
    std::vector<double> w_quad;       // quadrant value, truncation t_prime
    std::vector<int> njumps;
    std::vector<std::int8_t> y0;
    std::vector<std::string> cross_names;
    std::vector<std::vector<double>> k_vals;  // [cross][sample]
    std::vector<double> probe_times;
    std::vector<std::int8_t> probes;  // flattened [sample][probe]
    std::vector<std::size_t> chain_edges;  // sample index ranges per chain

    double t_w = 0.0;
    double t_prime = 0.0;
    double alpha = 0.0;
    double eps = 0.0;
    double T = 0.0;

    std::size_t size() const { return action.size(); }
    std::size_t n_probe() const { return probe_times.size(); }
    std::int8_t probe(std::size_t sample, std::size_t j) const {
        return probes[sample * probe_times.size() + j];
    }
};

struct ChainDiagnostics {
    MoveCounters counters;
    double action_tau = 0.0;
    double max_cache_drift = 0.0;
    int cache_refreshes = 0;
    std::vector<std::string> warnings;  // includes non-ergodic move warnings
    double acceptance(Move m) const {
        const int i = static_cast<int>(m);
        return counters.attempted[i] > 0
                   ? static_cast<double>(counters.accepted[i]) / counters.attempted[i]
                   : 0.0;
    }
};

struct RunResult {
    SampleSet samples;
    std::vector<ChainDiagnostics> chains;
    std::vector<std::string> warnings;
};

// Burn-in then measurement sweeps for one chain (stream = chain index).
RunResult run_chain(const McmcConfig& cfg, const KernelSet& ks,
                    std::uint64_t chain_index);

// All configured chains, merged in chain order (deterministic for a fixed
// seed regardless of scheduling).
RunResult run_chains(const McmcConfig& cfg, const KernelSet& ks);

}  // namespace sbmc

#endif

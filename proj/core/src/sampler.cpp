#include "sbmc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sbmc/statistics.hpp"

namespace sbmc {

int McmcConfig::resolved_sweep_moves() const {
    if (sweep_moves > 0) return sweep_moves;
    const double expected_jumps = 2.0 * T * eps;
    return std::max(16, 2 * static_cast<int>(std::ceil(expected_jumps)));
}

double McmcConfig::resolved_t_w(double omega_typ) const {
    if (t_w > 0.0) return t_w;
    const double margin = 5.0 / std::max(omega_typ, 1e-12);
    return std::max(T - margin, 0.5 * T);
}

void McmcConfig::validate() const {
    if (!(T > 0.0)) throw std::invalid_argument("sampler: T must be > 0");
    if (!(eps > 0.0)) {
        throw std::invalid_argument("sampler: eps must be > 0 (the eps = 0 two-path measure is handled by the oracle closed forms)");
    }
    double sum = 0.0;
    for (double p : move_prob) {
        if (p < 0.0) throw std::invalid_argument("sampler: move probabilities must be >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("sampler: move probabilities must sum to 1");
    }
    if (std::abs(move_prob[0] - move_prob[1]) > 1e-12) {
        throw std::invalid_argument("sampler: insert and delete probabilities must be equal");
    }
    if (std::abs(move_prob[3] - move_prob[4]) > 1e-12) {
        throw std::invalid_argument("sampler: pair-insert and pair-delete probabilities must be equal");
    }
    if (lambda_run < 0.0) {
        throw std::invalid_argument("sampler: lambda_run must be >= 0");
    }
    if (lambda_run > 0.5 * alpha * alpha + 1e-12) {
        throw std::invalid_argument("sampler: lambda_run must lie in [0, alpha^2/2]");
    }
    if (!(shift_width > 0.0) || !(pair_width > 0.0)) {
        throw std::invalid_argument("sampler: move widths must be > 0");
    }
    if (chains < 1) throw std::invalid_argument("sampler: chain count must be >= 1");
    if (t_w > 0.0 && t_w > T) throw std::invalid_argument("sampler: t_w must be <= T");
}

ChainState make_initial_state(const McmcConfig& cfg, const KernelSet& ks,
                              std::uint64_t chain_index) {
    ChainState st;
    st.rng = Rng(cfg.seed, chain_index);
    st.path.T = cfg.T;
    st.path.v = st.rng.coin() ? +1 : -1;
    // start from a draw of the rate-eps reference
    double t = -cfg.T;
    for (;;) {
        t += -std::log(1.0 - st.rng.uniform()) / cfg.eps;
        if (t >= cfg.T) break;
        st.path.jumps.push_back(t);
        if (st.path.jumps.size() > 1000000) {
            throw std::runtime_error("sampler: initial path generation ran away");
        }
    }
    st.action = pair_action(st.path, ks);
    return st;
}

namespace {

double reflect_into(double x, double lo, double hi) {
    const double L = hi - lo;
    double y = std::fmod(x - lo, 2.0 * L);
    if (y < 0.0) y += 2.0 * L;
    return (y <= L) ? lo + y : hi - (y - L);
}

bool contains(const std::vector<double>& sorted, double x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    return it != sorted.end() && *it == x;
}

// indices i with jumps[i+1] - jumps[i] < width (adjacent pairs eligible for
// pair-delete)
int count_close_pairs(const std::vector<double>& jumps, double width,
                      std::vector<int>* out = nullptr) {
    int m = 0;
    for (std::size_t i = 0; i + 1 < jumps.size(); ++i) {
        if (jumps[i + 1] - jumps[i] < width) {
            if (out) out->push_back(static_cast<int>(i));
            ++m;
        }
    }
    return m;
}

}  // namespace

void step(ChainState& state, const McmcConfig& cfg, const KernelSet& ks) {
    auto& rng = state.rng;
    auto& path = state.path;
    const double L = 2.0 * cfg.T;
    const double lam = cfg.lambda_run;

    double r = rng.uniform();
    int mi = 0;
    for (; mi < 5; ++mi) {
        if (r < cfg.move_prob[mi]) break;
        r -= cfg.move_prob[mi];
    }
    state.counters.attempted[mi] += 1;
    const auto move = static_cast<Move>(mi);

    switch (move) {
        case Move::Insert: {
            const double u = rng.uniform(-cfg.T, cfg.T);
            if (contains(path.jumps, u)) return;
            const double dA = delta_action_flip(path, ks, u, cfg.T);
            const double n1 = static_cast<double>(path.jumps.size()) + 1.0;
            const double ratio = (L * cfg.eps / n1) * std::exp(lam * dA);
            if (rng.uniform() < ratio) {
                path.jumps.insert(
                    std::upper_bound(path.jumps.begin(), path.jumps.end(), u), u);
                state.action += dA;
                state.counters.accepted[mi] += 1;
            }
            return;
        }
        case Move::Delete: {
            const std::size_t n = path.jumps.size();
            if (n == 0) return;
            const std::size_t idx = rng.below(n);
            const double tau = path.jumps[idx];
            const double dA = delta_action_flip(path, ks, tau, cfg.T);
            const double ratio =
                (static_cast<double>(n) / (L * cfg.eps)) * std::exp(lam * dA);
            if (rng.uniform() < ratio) {
                path.jumps.erase(path.jumps.begin() + static_cast<long>(idx));
                state.action += dA;
                state.counters.accepted[mi] += 1;
            }
            return;
        }
        case Move::Shift: {
            const std::size_t n = path.jumps.size();
            if (n == 0) return;
            const std::size_t idx = rng.below(n);
            const double tau = path.jumps[idx];
            const double prop = tau + cfg.shift_width * (2.0 * rng.uniform() - 1.0);
            const double tau2 = reflect_into(prop, -cfg.T, cfg.T);
            if (tau2 == tau || contains(path.jumps, tau2) || tau2 <= -cfg.T ||
                tau2 >= cfg.T) {
                return;
            }
            const double lo = std::min(tau, tau2);
            const double hi = std::max(tau, tau2);
            const double dA = delta_action_flip(path, ks, lo, hi);
            if (rng.uniform() < std::exp(lam * dA)) {
                path.jumps.erase(path.jumps.begin() + static_cast<long>(idx));
                path.jumps.insert(
                    std::upper_bound(path.jumps.begin(), path.jumps.end(), tau2),
                    tau2);
                state.action += dA;
                state.counters.accepted[mi] += 1;
            }
            return;
        }
        case Move::PairInsert: {
            const double u1 = rng.uniform(-cfg.T, cfg.T);
            const double u2 = u1 + cfg.pair_width * rng.uniform();
            if (u2 >= cfg.T || u2 == u1) return;
            // inserted pair must be adjacent in the new configuration
            auto it = std::lower_bound(path.jumps.begin(), path.jumps.end(), u1);
            if (it != path.jumps.end() && *it <= u2) return;
            const double dA = delta_action_flip(path, ks, u1, u2);
            std::vector<double> next = path.jumps;
            next.insert(std::upper_bound(next.begin(), next.end(), u1), u1);
            next.insert(std::upper_bound(next.begin(), next.end(), u2), u2);
            const int m_new = count_close_pairs(next, cfg.pair_width);
            const double ratio = cfg.eps * cfg.eps * L * cfg.pair_width /
                                 static_cast<double>(m_new) * std::exp(lam * dA);
            if (rng.uniform() < ratio) {
                path.jumps = std::move(next);
                state.action += dA;
                state.counters.accepted[mi] += 1;
            }
            return;
        }
        case Move::PairDelete: {
            std::vector<int> close;
            const int m = count_close_pairs(path.jumps, cfg.pair_width, &close);
            if (m == 0) return;
            const int pick = close[rng.below(static_cast<std::uint64_t>(m))];
            const double t1 = path.jumps[pick];
            const double t2 = path.jumps[pick + 1];
            const double dA = delta_action_flip(path, ks, t1, t2);
            const double ratio = static_cast<double>(m) /
                                 (cfg.eps * cfg.eps * L * cfg.pair_width) *
                                 std::exp(lam * dA);
            if (rng.uniform() < ratio) {
                path.jumps.erase(path.jumps.begin() + pick,
                                 path.jumps.begin() + pick + 2);
                state.action += dA;
                state.counters.accepted[mi] += 1;
            }
            return;
        }
        case Move::GlobalFlip: {
            path.v = -path.v;  // A is invariant under the global flip
            state.counters.accepted[mi] += 1;
            return;
        }
        default:
            return;
    }
}

namespace {

void sweep(ChainState& st, const McmcConfig& cfg, const KernelSet& ks,
           int moves) {
    for (int i = 0; i < moves; ++i) step(st, cfg, ks);
    st.sweeps_done += 1;
    if (st.sweeps_done % 1000 == 0) {
        const double exact = pair_action(st.path, ks);
        const double drift =
            std::abs(st.action - exact) / std::max(1.0, std::abs(exact));
        st.max_cache_drift = std::max(st.max_cache_drift, drift);
        if (drift > 1e-9) {
            st.action = exact;
            st.cache_refreshes += 1;
        }
    }
}

void record_sample(const ChainState& st, const McmcConfig& cfg,
                   const KernelSet& ks, double tp, SampleSet& out) {
    out.action.push_back(st.action);
    out.njumps.push_back(st.path.n());
    out.y0.push_back(static_cast<std::int8_t>(st.path.spin_at(0.0)));
    out.w_quad.push_back(quadrant(st.path, *ks.bath_kernel(), tp));
    for (std::size_t c = 0; c < out.cross_names.size(); ++c) {
        out.k_vals[c].push_back(
            k_of(st.path, ks.cross(out.cross_names[c]), cfg.alpha, tp));
    }
    for (double t : out.probe_times) {
        out.probes.push_back(static_cast<std::int8_t>(st.path.spin_at(t)));
    }
}

}  // namespace

RunResult run_chain(const McmcConfig& cfg, const KernelSet& ks,
                    std::uint64_t chain_index) {
    cfg.validate();
    const double omega_typ =
        ks.overlap_h_over_omega_h() / std::max(ks.norm_h_over_omega_sq(), 1e-300);
    const double tw = cfg.resolved_t_w(omega_typ);
    const double tp = (cfg.t_prime > 0.0) ? cfg.t_prime : tw;
    const int moves = cfg.resolved_sweep_moves();

    RunResult res;
    auto& s = res.samples;
    s.t_w = tw;
    s.t_prime = tp;
    s.alpha = cfg.alpha;
    s.eps = cfg.eps;
    s.T = cfg.T;
    for (const auto& c : ks.crosses()) s.cross_names.push_back(c.name);
    s.k_vals.resize(s.cross_names.size());
    s.probe_times.resize(static_cast<std::size_t>(std::max(cfg.n_probe, 2)));
    for (std::size_t j = 0; j < s.probe_times.size(); ++j) {
        s.probe_times[j] =
            -tw + 2.0 * tw * static_cast<double>(j) /
                      static_cast<double>(s.probe_times.size() - 1);
    }

    ChainState st = make_initial_state(cfg, ks, chain_index);
    MoveCounters before_burnin = st.counters;
    for (long i = 0; i < cfg.burnin_sweeps; ++i) sweep(st, cfg, ks, moves);

    ChainDiagnostics diag;
    for (int m = 0; m < 6; ++m) {
        const long att = st.counters.attempted[m] - before_burnin.attempted[m];
        const long acc = st.counters.accepted[m] - before_burnin.accepted[m];
        if (cfg.move_prob[m] > 0.0 && att > 0 && acc == 0) {
            diag.warnings.push_back(std::string("non-ergodic: move '") +
                                    kMoveNames[m] +
                                    "' accepted nothing during burn-in");
        }
    }

    s.chain_edges.push_back(0);
    for (long i = 0; i < cfg.measure_sweeps; ++i) {
        sweep(st, cfg, ks, moves);
        record_sample(st, cfg, ks, tp, s);
    }
    s.chain_edges.push_back(s.size());

    diag.counters = st.counters;
    diag.max_cache_drift = st.max_cache_drift;
    diag.cache_refreshes = st.cache_refreshes;
    diag.action_tau = stats::tau_int(s.action);
    res.chains.push_back(diag);
    res.warnings = diag.warnings;
    return res;
}

RunResult run_chains(const McmcConfig& cfg, const KernelSet& ks) {
    cfg.validate();
    if (cfg.chains == 1) return run_chain(cfg, ks, 0);

    std::vector<RunResult> parts(static_cast<std::size_t>(cfg.chains));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(cfg.chains));
    for (int c = 0; c < cfg.chains; ++c) {
        workers.emplace_back([&, c]() {
            parts[static_cast<std::size_t>(c)] =
                run_chain(cfg, ks, static_cast<std::uint64_t>(c));
        });
    }
    for (auto& w : workers) w.join();

    // merge in chain order so output is independent of scheduling
    RunResult merged = std::move(parts[0]);
    for (int c = 1; c < cfg.chains; ++c) {
        auto& p = parts[static_cast<std::size_t>(c)];
        auto& s = merged.samples;
        const auto& q = p.samples;
        const std::size_t base = s.size();
        s.action.insert(s.action.end(), q.action.begin(), q.action.end());
        s.w_quad.insert(s.w_quad.end(), q.w_quad.begin(), q.w_quad.end());
        s.njumps.insert(s.njumps.end(), q.njumps.begin(), q.njumps.end());
        s.y0.insert(s.y0.end(), q.y0.begin(), q.y0.end());
        for (std::size_t k = 0; k < s.k_vals.size(); ++k) {
            s.k_vals[k].insert(s.k_vals[k].end(), q.k_vals[k].begin(),
                               q.k_vals[k].end());
        }
        s.probes.insert(s.probes.end(), q.probes.begin(), q.probes.end());
        s.chain_edges.push_back(base + q.size());
        merged.chains.push_back(p.chains.front());
        merged.warnings.insert(merged.warnings.end(), p.warnings.begin(),
                               p.warnings.end());
    }
    return merged;
}

}  // namespace sbmc

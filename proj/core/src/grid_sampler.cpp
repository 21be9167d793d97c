#include "sbmc/grid_sampler.hpp"

#include <cmath>

namespace sbmc {

namespace {

inline bool occupied(std::size_t state, int k) {
    return (state >> k) & 1u;
}

inline std::size_t toggled(std::size_t state, int k) {
    return state ^ (std::size_t{1} << k);
}

// occupied slots that begin an adjacent pair with gap <= range and no
// occupied slot in between
int close_pairs(std::size_t state, int m, int range, std::vector<int>* out) {
    int count = 0;
    int prev = -1;
    for (int k = 0; k < m; ++k) {
        if (!occupied(state, k)) continue;
        if (prev >= 0 && k - prev <= range) {
            if (out) out->push_back(prev);
            ++count;
        }
        prev = k;
    }
    return count;
}

}  // namespace

GridSampler::GridSampler(const DiscretizedSystem& sys)
    : GridSampler(sys, Options{}) {}

GridSampler::GridSampler(const DiscretizedSystem& sys, Options opt)
    : sys_(sys), opt_(opt) {}

void GridSampler::proposals(std::size_t state, int move,
                            std::vector<Proposal>& out) const {
    out.clear();
    const int m = sys_.slots();
    const int n = sys_.jump_count(state);
    const double lw = sys_.log_weight(state);
    auto accept_of = [&](std::size_t to, double extra) {
        const double r = std::exp(sys_.log_weight(to) - lw) * extra;
        return std::min(1.0, r);
    };

    switch (move) {
        case 0: {  // insert: uniform slot, reject if occupied
            for (int k = 0; k < m; ++k) {
                if (occupied(state, k)) continue;
                const std::size_t to = toggled(state, k);
                // pi ratio already includes rho; proposal asymmetry m/(n+1)
                const double extra = static_cast<double>(m) / (n + 1);
                out.push_back({to, 1.0 / m, accept_of(to, extra)});
            }
            return;
        }
        case 1: {  // delete: uniform occupied slot
            if (n == 0) return;
            for (int k = 0; k < m; ++k) {
                if (!occupied(state, k)) continue;
                const std::size_t to = toggled(state, k);
                const double extra = static_cast<double>(n) / m;
                out.push_back({to, 1.0 / n, accept_of(to, extra)});
            }
            return;
        }
        case 2: {  // shift: uniform occupied slot, symmetric offset
            if (n == 0) return;
            const int w = opt_.shift_range;
            for (int k = 0; k < m; ++k) {
                if (!occupied(state, k)) continue;
                for (int d = -w; d <= w; ++d) {
                    if (d == 0) continue;
                    const int k2 = k + d;
                    const double pprop = 1.0 / (n * 2.0 * w);
                    if (k2 < 0 || k2 >= m || occupied(state, k2)) continue;
                    const std::size_t to = toggled(toggled(state, k), k2);
                    out.push_back({to, pprop, accept_of(to, 1.0)});
                }
            }
            return;
        }
        case 3: {  // pair insert: uniform slot and gap, adjacency enforced
            const int g = opt_.pair_range;
            for (int k = 0; k < m; ++k) {
                for (int d = 1; d <= g; ++d) {
                    const int k2 = k + d;
                    if (k2 >= m) continue;
                    if (occupied(state, k) || occupied(state, k2)) continue;
                    bool blocked = false;
                    for (int j = k + 1; j < k2; ++j) {
                        if (occupied(state, j)) blocked = true;
                    }
                    if (blocked) continue;
                    const std::size_t to = toggled(toggled(state, k), k2);
                    const int m2 = close_pairs(to, m, g, nullptr);
                    const double extra = static_cast<double>(m) * g / m2;
                    out.push_back({to, 1.0 / (m * g), accept_of(to, extra)});
                }
            }
            return;
        }
        case 4: {  // pair delete: uniform close pair
            std::vector<int> close;
            const int mp = close_pairs(state, m, opt_.pair_range, &close);
            if (mp == 0) return;
            for (int k : close) {
                int k2 = k + 1;
                while (!occupied(state, k2)) ++k2;
                const std::size_t to = toggled(toggled(state, k), k2);
                const double extra =
                    static_cast<double>(mp) / (m * opt_.pair_range);
                out.push_back({to, 1.0 / mp, accept_of(to, extra)});
            }
            return;
        }
        case 5: {  // global flip
            const std::size_t to = state ^ (std::size_t{1} << m);
            out.push_back({to, 1.0, 1.0});
            return;
        }
        default:
            return;
    }
}

std::size_t GridSampler::step(std::size_t state, Rng& rng) const {
    double r = rng.uniform();
    int move = 0;
    for (; move < 5; ++move) {
        if (r < opt_.move_prob[move]) break;
        r -= opt_.move_prob[move];
    }
    std::vector<Proposal> props;
    proposals(state, move, props);
    if (props.empty()) return state;
    // proposals within a move are uniform; pick one then Metropolis-accept
    const std::size_t pick = rng.below(props.size());
    // account for proposal outcomes that were rejected structurally
    double total = 0.0;
    for (const auto& p : props) total += p.prob;
    if (rng.uniform() > total) return state;  // structurally rejected outcome
    const auto& p = props[pick];
    if (rng.uniform() < p.accept) return p.to;
    return state;
}

GridSampler::Empirical GridSampler::run(std::size_t start, long steps,
                                        Rng& rng) const {
    Empirical e;
    const int nb = sys_.slots() + 1;
    e.spin_up.assign(static_cast<std::size_t>(nb), 0.0);
    e.njump_dist.assign(static_cast<std::size_t>(sys_.slots()) + 1, 0.0);
    std::size_t st = start;
    for (long i = 0; i < steps; ++i) {
        st = step(st, rng);
        e.njump_dist[static_cast<std::size_t>(sys_.jump_count(st))] += 1.0;
        for (int j = 0; j < nb; ++j) {
            if (sys_.boundary_spin(st, j) > 0) {
                e.spin_up[static_cast<std::size_t>(j)] += 1.0;
            }
        }
    }
    for (auto& x : e.spin_up) x /= static_cast<double>(steps);
    for (auto& x : e.njump_dist) x /= static_cast<double>(steps);
    e.steps = steps;
    return e;
}

std::vector<double> GridSampler::transition_matrix() const {
    const std::size_t ns = sys_.states();
    std::vector<double> P(ns * ns, 0.0);
    std::vector<Proposal> props;
    for (std::size_t x = 0; x < ns; ++x) {
        double stay = 0.0;
        for (int move = 0; move < 6; ++move) {
            const double pm = opt_.move_prob[static_cast<std::size_t>(move)];
            if (pm <= 0.0) continue;
            proposals(x, move, props);
            double used = 0.0;
            for (const auto& p : props) {
                P[x * ns + p.to] += pm * p.prob * p.accept;
                used += p.prob * (1.0 - p.accept) + 0.0;
            }
            double proposed = 0.0;
            for (const auto& p : props) proposed += p.prob;
            // structurally impossible outcomes and rejected proposals stay put
            stay += pm * ((1.0 - proposed) + used);
        }
        P[x * ns + x] += stay;
    }
    return P;
}

double GridSampler::row_sum_residual() const {
    const std::size_t ns = sys_.states();
    const auto P = transition_matrix();
    double worst = 0.0;
    for (std::size_t x = 0; x < ns; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < ns; ++y) s += P[x * ns + y];
        worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
}

double GridSampler::stationarity_residual() const {
    const std::size_t ns = sys_.states();
    const auto P = transition_matrix();
    std::vector<double> pi(ns);
    double maxlw = -1e300;
    for (std::size_t x = 0; x < ns; ++x) {
        maxlw = std::max(maxlw, sys_.log_weight(x));
    }
    double z = 0.0;
    for (std::size_t x = 0; x < ns; ++x) {
        pi[x] = std::exp(sys_.log_weight(x) - maxlw);
        z += pi[x];
    }
    for (auto& v : pi) v /= z;
    double worst = 0.0;
    for (std::size_t x = 0; x < ns; ++x) {
        double acc = 0.0;
        for (std::size_t y = 0; y < ns; ++y) acc += pi[y] * P[y * ns + x];
        worst = std::max(worst, std::abs(acc - pi[x]));
    }
    return worst;
}

}  // namespace sbmc

#include "sbmc/oracle_pathsum.hpp"

#include <cmath>

namespace sbmc {

DiscretizedSystem::DiscretizedSystem(double T, double eps, double lambda,
                                     int slots,
                                     std::function<double(double)> w_amp)
    : T_(T), eps_(eps), lambda_(lambda), m_(slots) {
    if (slots < 1 || slots > 12) {
        throw TooManySlots("discretized path sum: need 1 <= slots <= 12");
    }
    dt_ = 2.0 * T_ / m_;
    p_ = 0.5 * (1.0 - std::exp(-2.0 * eps_ * dt_));
    rho_ = p_ / (1.0 - p_);

    const int nb = m_ + 1;  // boundary nodes
    wmat_.assign(static_cast<std::size_t>(nb) * nb, 0.0);
    for (int j = 0; j < nb; ++j) {
        for (int l = 0; l < nb; ++l) {
            const double cj = (j == 0 || j == m_) ? 0.5 : 1.0;
            const double cl = (l == 0 || l == m_) ? 0.5 : 1.0;
            wmat_[static_cast<std::size_t>(j) * nb + l] =
                cj * cl * dt_ * dt_ * w_amp(boundary_time(j) - boundary_time(l));
        }
    }

    action_.resize(states());
    std::vector<int> y(static_cast<std::size_t>(nb));
    for (std::size_t st = 0; st < states(); ++st) {
        for (int j = 0; j < nb; ++j) y[static_cast<std::size_t>(j)] = boundary_spin(st, j);
        double acc = 0.0;
        for (int j = 0; j < nb; ++j) {
            for (int l = 0; l < nb; ++l) {
                acc += y[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(l)] *
                       wmat_[static_cast<std::size_t>(j) * nb + l];
            }
        }
        action_[st] = acc;
    }
}

int DiscretizedSystem::jump_count(std::size_t state) const {
    return __builtin_popcount(static_cast<unsigned>(state & ((1u << m_) - 1u)));
}

int DiscretizedSystem::initial_sign(std::size_t state) const {
    return (state >> m_) ? -1 : +1;
}

int DiscretizedSystem::boundary_spin(std::size_t state, int j) const {
    // flips at slot centers u_k = -T + (k - 1/2) dt, k = 1..m; boundary t_j
    // has seen the flips of slots 1..j
    const unsigned bits = static_cast<unsigned>(state & ((1u << m_) - 1u));
    const int flips = __builtin_popcount(bits & ((j >= 32) ? ~0u : ((1u << j) - 1u)));
    const int s = initial_sign(state);
    return (flips % 2 == 0) ? s : -s;
}

double DiscretizedSystem::log_weight(std::size_t state) const {
    return jump_count(state) * std::log(rho_) + lambda_ * action_[state];
}

double DiscretizedSystem::weight(std::size_t state) const {
    return std::exp(log_weight(state));
}

double DiscretizedSystem::quadrant(std::size_t state) const {
    const int nb = m_ + 1;
    double acc = 0.0;
    for (int j = 0; j < nb; ++j) {
        if (boundary_time(j) >= 0.0) continue;
        for (int l = 0; l < nb; ++l) {
            if (boundary_time(l) <= 0.0) continue;
            acc += boundary_spin(state, j) * boundary_spin(state, l) *
                   wmat_[static_cast<std::size_t>(j) * nb + l];
        }
    }
    return acc;
}

DiscretizedSystem::Marginals DiscretizedSystem::exact_marginals() const {
    Marginals out;
    const int nb = m_ + 1;
    out.spin_up.assign(static_cast<std::size_t>(nb), 0.0);
    out.pair_corr.assign(static_cast<std::size_t>(nb), 0.0);
    out.njump_dist.assign(static_cast<std::size_t>(m_) + 1, 0.0);

    // stabilize the exponentials around the maximal log weight
    double maxlw = -1e300;
    for (std::size_t st = 0; st < states(); ++st) {
        maxlw = std::max(maxlw, log_weight(st));
    }
    double z = 0.0;
    for (std::size_t st = 0; st < states(); ++st) {
        const double w = std::exp(log_weight(st) - maxlw);
        z += w;
        out.mean_jumps += w * jump_count(st);
        out.mean_action += w * action_[st];
        out.njump_dist[static_cast<std::size_t>(jump_count(st))] += w;
        for (int j = 0; j < nb; ++j) {
            const int yj = boundary_spin(st, j);
            if (yj > 0) out.spin_up[static_cast<std::size_t>(j)] += w;
            out.pair_corr[static_cast<std::size_t>(j)] +=
                w * boundary_spin(st, 0) * yj;
        }
    }
    out.mean_jumps /= z;
    out.mean_action /= z;
    for (auto& x : out.njump_dist) x /= z;
    for (auto& x : out.spin_up) x /= z;
    for (auto& x : out.pair_corr) x /= z;
    out.log_z = std::log(z) + maxlw;
    return out;
}

double DiscretizedSystem::expectation(
    const std::function<double(std::size_t)>& f) const {
    double maxlw = -1e300;
    for (std::size_t st = 0; st < states(); ++st) {
        maxlw = std::max(maxlw, log_weight(st));
    }
    double z = 0.0, acc = 0.0;
    for (std::size_t st = 0; st < states(); ++st) {
        const double w = std::exp(log_weight(st) - maxlw);
        z += w;
        acc += w * f(st);
    }
    return acc / z;
}

double DiscretizedSystem::free_pair_corr(int j) const {
    return std::pow(1.0 - 2.0 * p_, std::abs(j));
}

}  // namespace sbmc

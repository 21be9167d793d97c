#include "sbmc/statistics.hpp"

#include <algorithm>
#include <cmath>

namespace sbmc::stats {

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / static_cast<double>(x.size());
}

double tau_int(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 8) return 0.5;
    const double m = mean(x);
    const double c0 = variance(x);
    if (c0 <= 0.0) return 0.5;
    double tau = 0.5;
    const std::size_t kmax = n / 4;
    for (std::size_t k = 1; k <= kmax; ++k) {
        double ck = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) {
            ck += (x[i] - m) * (x[i + k] - m);
        }
        ck /= static_cast<double>(n - k);
        tau += ck / c0;
        if (static_cast<double>(k) >= 6.0 * tau) break;  // Sokal window
        if (ck < 0.0 && static_cast<double>(k) > 3.0 * tau) break;
    }
    return std::max(tau, 0.5);
}

Summary summarize(std::span<const double> x) {
    Summary s;
    s.n = x.size();
    s.mean = mean(x);
    if (x.size() < 2) return s;
    s.tau_int = tau_int(x);
    std::size_t block = static_cast<std::size_t>(std::ceil(20.0 * s.tau_int));
    block = std::max<std::size_t>(block, 1);
    if (x.size() / block < 8) block = std::max<std::size_t>(x.size() / 8, 1);
    const std::size_t nb = x.size() / block;
    if (nb < 2) {
        s.stderror = std::sqrt(variance(x) / static_cast<double>(x.size()));
        return s;
    }
    double bm = 0.0, bs = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        double acc = 0.0;
        for (std::size_t i = b * block; i < (b + 1) * block; ++i) acc += x[i];
        const double v = acc / static_cast<double>(block);
        bm += v;
        bs += v * v;
    }
    bm /= static_cast<double>(nb);
    bs = bs / static_cast<double>(nb) - bm * bm;
    if (bs < 0.0) bs = 0.0;
    s.stderror = std::sqrt(bs / static_cast<double>(nb - 1));
    return s;
}

Summary combine(const std::vector<Summary>& parts) {
    Summary out;
    double wsum = 0.0, msum = 0.0, sesq = 0.0, tausum = 0.0;
    for (const auto& p : parts) {
        const double w = static_cast<double>(p.n);
        wsum += w;
        msum += w * p.mean;
        sesq += (w * p.stderror) * (w * p.stderror);
        tausum += w * p.tau_int;
        out.n += p.n;
    }
    if (wsum <= 0.0) return out;
    out.mean = msum / wsum;
    out.stderror = std::sqrt(sesq) / wsum;
    out.tau_int = tausum / wsum;
    return out;
}

Summary summarize_chains(std::span<const double> x,
                         std::span<const std::size_t> chain_edges) {
    if (chain_edges.size() < 2) return summarize(x);
    std::vector<Summary> parts;
    for (std::size_t c = 0; c + 1 < chain_edges.size(); ++c) {
        const std::size_t a = chain_edges[c];
        const std::size_t b = chain_edges[c + 1];
        if (b > a) parts.push_back(summarize(x.subspan(a, b - a)));
    }
    return combine(parts);
}

}  // namespace sbmc::stats

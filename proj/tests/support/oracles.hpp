#ifndef SBMC_TESTS_SUPPORT_ORACLES_HPP
#define SBMC_TESTS_SUPPORT_ORACLES_HPP

#include <algorithm>
#include <vector>

#include "sbmc/kernels.hpp"
#include "sbmc/path.hpp"
#include "sbmc/quadrature.hpp"
#include "sbmc/rng.hpp"

namespace sbmc::testing {

// 2-D quadrature of w_amp(t-s) over [a,b] x [c,d], splitting the inner
// integral at the |t-s| kink so both halves are smooth.
inline double rect_by_quadrature(const KernelSet& ks, double a, double b,
                                 double c, double d) {
    auto outer = [&](double t) {
        double acc = 0.0;
        const double mid = std::clamp(t, c, d);
        if (mid > c) {
            acc += quad::integrate([&](double s) { return ks.w_amp(t - s); }, c,
                                   mid, 1e-13, 1e-11)
                       .value;
        }
        if (d > mid) {
            acc += quad::integrate([&](double s) { return ks.w_amp(t - s); }, mid,
                                   d, 1e-13, 1e-11)
                       .value;
        }
        return acc;
    };
    return quad::integrate(outer, a, b, 1e-12, 1e-10).value;
}

// action oracle: segment-wise quadrature, independent of the antiderivative
// machinery (self-squares reduce to 1-D integrals of the smooth kernel)
inline double action_by_quadrature(const SpinPath& p, const KernelSet& ks) {
    const auto segs = p.segments();
    double acc = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double L = segs[i].b - segs[i].a;
        acc += 2.0 *
               quad::integrate(
                   [&ks, L](double u) { return (L - u) * ks.w_amp(u); }, 0.0, L,
                   1e-13, 1e-11)
                   .value;
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            acc += 2.0 * segs[i].s * segs[j].s *
                   rect_by_quadrature(ks, segs[i].a, segs[i].b, segs[j].a,
                                      segs[j].b);
        }
    }
    return acc;
}

inline SpinPath random_path(Rng& rng, double T, int max_jumps) {
    SpinPath p;
    p.T = T;
    p.v = rng.coin() ? 1 : -1;
    const int n = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_jumps) + 1));
    for (int i = 0; i < n; ++i) p.jumps.push_back(rng.uniform(-T * 0.999, T * 0.999));
    std::sort(p.jumps.begin(), p.jumps.end());
    p.jumps.erase(std::unique(p.jumps.begin(), p.jumps.end()), p.jumps.end());
    return p;
}

}  // namespace sbmc::testing

#endif

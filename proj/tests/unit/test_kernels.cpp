#include <doctest.h>

#include <cmath>

#include "sbmc/kernels.hpp"
#include "sbmc/quadrature.hpp"
#include "sbmc/rng.hpp"
#include "support/oracles.hpp"

using namespace sbmc;

namespace {

const SpectralDensity kPowerBath = PowerLawExpCutoff{1.0, 2.0, 1.0};
const SpectralDensity kSingleMode = DiscreteModes{{{1.0, 1.0}}};

double w_amp_quad(const SpectralDensity& sd, double t) {
    if (const auto* p = std::get_if<PowerLawExpCutoff>(&sd)) {
        auto f = [p, t](double w) {
            return 0.5 * p->amplitude * std::pow(w, p->exponent) *
                   std::exp(-w / p->cutoff) * std::exp(-std::abs(t) * w);
        };
        return quad::integrate_to_inf(f, 0.0, 1e-13, 1e-11).value;
    }
    const auto& d = std::get<DiscreteModes>(sd);
    double acc = 0.0;
    for (const auto& m : d.modes) {
        acc += 0.5 * m.coupling * m.coupling * std::exp(-std::abs(t) * m.frequency);
    }
    return acc;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("power-law closed forms") {
    const KernelSet ks = build_kernels(kPowerBath);
    // w_amp(t) = (1+|t|)^{-3}
    CHECK(ks.w_amp(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ks.w_amp(1.0) == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
    CHECK(ks.w_amp(-1.0) == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
    for (double t : {0.0, 0.2, 1.0, 3.7, 11.0}) {
        CHECK(ks.w_amp(t) == doctest::Approx(w_amp_quad(kPowerBath, t)).epsilon(1e-9));
    }
    // u2(t) = t/2 + 1/(2(1+t)) - 1/2
    CHECK(ks.u2(0.0) == doctest::Approx(0.0));
    CHECK(ks.u2(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(ks.u2(-2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(ks.norm_h_over_omega_sq() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ks.norm_h_sq() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(ks.overlap_h_over_omega_h() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("single-mode closed forms") {
    const KernelSet ks = build_kernels(kSingleMode);
    CHECK(ks.w_amp(0.0) == doctest::Approx(0.5));
    CHECK(ks.w_amp(2.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-14));
    // u2(t) = (e^{-|t|} - 1 + |t|)/2
    CHECK(ks.u2(1.0) == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-13));
    CHECK(ks.norm_h_over_omega_sq() == doctest::Approx(1.0));
}

TEST_CASE("u2 second derivative matches w_amp") {
    for (const auto& bath : {kPowerBath, kSingleMode}) {
        const KernelSet ks = build_kernels(bath);
        Rng rng(3, 0);
        for (int i = 0; i < 60; ++i) {
            const double t = 0.05 + 6.95 * rng.uniform();
            // step balancing FD truncation against cancellation in u2
            const double w = ks.w_amp(t);
            const double h = std::pow(
                12.0 * 2.2e-16 * std::max(std::abs(ks.u2(t)), 1.0) / w, 0.25);
            const double fd =
                (ks.u2(t + h) - 2.0 * ks.u2(t) + ks.u2(t - h)) / (h * h);
            CHECK(std::abs(fd - w) / w < 1e-6);
        }
    }
}

TEST_CASE("rectangle identity against 2-D quadrature") {
    for (const auto& bath : {kPowerBath, kSingleMode}) {
        const KernelSet ks = build_kernels(bath);
        Rng rng(17, 0);
        for (int i = 0; i < 100; ++i) {
            const double a = rng.uniform(-5.0, 4.0);
            const double b = a + rng.uniform(0.1, 3.0);
            const double c = rng.uniform(-5.0, 4.0);
            const double d = c + rng.uniform(0.1, 3.0);
            const double rect = ks.rect(a, b, c, d);
            const double ref = sbmc::testing::rect_by_quadrature(ks, a, b, c, d);
            CHECK(std::abs(rect - ref) <= 1e-8 * (std::abs(ref) + 1e-8));
        }
    }
}

TEST_CASE("quadrant constant equals half the infrared norm") {
    for (const auto& bath : {kPowerBath, kSingleMode}) {
        const KernelSet ks = build_kernels(bath);
        const double ref =
            quad::integrate_to_inf([&ks](double u) { return u * ks.w_amp(u); }, 0.0)
                .value;
        CHECK(ks.tail_u_w(0.0) ==
              doctest::Approx(0.5 * ks.norm_h_over_omega_sq()).epsilon(1e-10));
        CHECK(ks.tail_u_w(0.0) == doctest::Approx(ref).epsilon(1e-6));
        // tail beyond R by quadrature
        const double tail =
            quad::integrate_to_inf([&ks](double u) { return u * ks.w_amp(u); }, 6.0)
                .value;
        CHECK(ks.tail_u_w(6.0) == doctest::Approx(tail).epsilon(1e-6));
    }
}

TEST_CASE("modified kernel with a unit weight is an exact rescaling") {
    for (const auto& bath : {kPowerBath, kSingleMode}) {
        const KernelSet ks = build_kernels(bath);
        const double beta = 0.8;
        auto wmod = ks.w_amp_mod(beta, [](double) { return 1.0; });
        const double factor = 1.0 - std::exp(-beta);
        for (double t : {0.0, 0.4, 1.3, 5.0}) {
            CHECK(std::abs(wmod(t) - factor * ks.w_amp(t)) <=
                  1e-12 * std::abs(factor * ks.w_amp(t)));
        }
    }
}

TEST_CASE("modified kernel with a genuine frequency weight") {
    const KernelSet ks = build_kernels(kSingleMode);
    const double beta = 0.7;
    auto rho_op = [](double w) { return w * w; };  // nontrivial weight
    auto wmod = ks.w_amp_mod(beta, rho_op);
    // single mode: exact value (1 - e^{-beta w^2}) e^{-|t|w} g^2/2 at w=1
    for (double t : {0.0, 1.0, 2.5}) {
        const double ref = 0.5 * (1.0 - std::exp(-beta)) * std::exp(-t);
        CHECK(wmod(t) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("cross kernels for the standard test functions") {
    const KernelSet ks = build_kernels(
        kPowerBath, {overlap_f_equals_h(kPowerBath),
                     overlap_f_equals_h_over_omega(kPowerBath)});
    const auto& ch = ks.cross("h");
    CHECK(ch.norm_f_sq == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ch.overlap_h_over_omega_f == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ch.c(0.5) == doctest::Approx(2.0 * ks.w_amp(0.5)).epsilon(1e-12));
    // odd antiderivative
    CHECK(ch.c1(0.7) == doctest::Approx(-ch.c1(-0.7)).epsilon(1e-13));

    const auto& chw = ks.cross("h_over_omega");
    CHECK(chw.norm_f_sq == doctest::Approx(1.0).epsilon(1e-12));  // int rho/w^2
    // c1 is the integral of c
    const double ref = quad::integrate([&chw](double r) { return chw.c(r); }, 0.0, 1.2).value;
    CHECK(chw.c1(1.2) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(ks.has_cross("h"));
    CHECK(!ks.has_cross("nope"));
}

TEST_CASE("tabulated kernel tracks its closed-form parent") {
    // tabulate the power-law density on a dense grid and compare kernels
    Tabulated t;
    for (int i = 0; i <= 4000; ++i) {
        const double w = 1e-3 + 40.0 * i / 4000.0;
        t.omega.push_back(w);
        t.rho.push_back(w * w * std::exp(-w));
    }
    const KernelSet tab = build_kernels(SpectralDensity{t});
    const KernelSet ref = build_kernels(kPowerBath);
    for (double x : {0.0, 0.3, 1.0, 2.7, 6.0, 20.0}) {
        CHECK(tab.w_amp(x) == doctest::Approx(ref.w_amp(x)).epsilon(2e-4));
        CHECK(tab.u2(x) == doctest::Approx(ref.u2(x)).epsilon(2e-3));
    }
    // internal consistency of the cached antiderivatives at much tighter
    // tolerance: finite differences of u2 reproduce the tabulated w_amp
    for (double x : {0.3, 1.1, 3.3, 9.0}) {
        const double h = 1e-3 * x;
        const double fd = (tab.u2(x + h) - 2.0 * tab.u2(x) + tab.u2(x - h)) / (h * h);
        CHECK(std::abs(fd - tab.w_amp(x)) / tab.w_amp(x) < 1e-6);
    }
}

TEST_CASE("build rejects invalid baths") {
    CHECK_THROWS_AS(build_kernels(SpectralDensity{PowerLawExpCutoff{1.0, 0.8, 1.0}}),
                    InfraredDivergent);
    DiscreteModes d;
    d.modes = {};
    CHECK_THROWS(build_kernels(SpectralDensity{d}));
}

}  // TEST_SUITE

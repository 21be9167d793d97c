#include <doctest.h>

#include <cmath>

#include "sbmc/kernels.hpp"
#include "sbmc/oracle_ed.hpp"
#include "sbmc/oracle_pathsum.hpp"
#include "sbmc/van_hove.hpp"

using namespace sbmc;

namespace {

TruncatedModel rabi_model(double alpha, int n_max = 30) {
    TruncatedModel m;
    m.eps = 1.0;
    m.alpha = alpha;
    m.modes = {{1.0, 1.0}};
    m.n_max = n_max;
    return m;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("decoupled limits of the ground state") {
    // alpha = 0: E0 = -eps, state = |+x> tensor vacuum
    TruncatedModel m = rabi_model(0.0);
    const auto gs = ground_state(m);
    CHECK(gs.energy == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(gs.residual < 1e-10);
    const std::size_t half = m.dim() / 2;
    CHECK(std::abs(gs.state[0]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    CHECK(std::abs(gs.state[half]) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    CHECK(gs.state[0] * gs.state[half] > 0.0);
    CHECK(gs.gap == doctest::Approx(2.0).epsilon(1e-9));  // 2 eps

    // eps ~ 0: the shifted-field value -alpha^2 g^2 / (2 w)
    TruncatedModel m2 = rabi_model(0.4, 40);
    m2.eps = 1e-9;
    const auto gs2 = ground_state(m2);
    CHECK(gs2.energy == doctest::Approx(-0.08).epsilon(1e-6));
}

TEST_CASE("Rabi point matches second-order perturbation theory") {
    TruncatedModel m = rabi_model(0.3);
    const auto gs = ground_state(m);
    CHECK(perturbative_energy(m) == doctest::Approx(-1.015).epsilon(1e-12));
    CHECK(gs.energy == doctest::Approx(-1.015).epsilon(2e-3));
    CHECK(gs.energy < -1.0);  // coupling lowers the energy
}

TEST_CASE("cutoff ladder is monotone and Cauchy") {
    TruncatedModel m = rabi_model(0.3);
    const auto ladder = cutoff_ladder(m, 10, 34, 4);
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        CHECK(ladder[i] <= ladder[i - 1] + 1e-14);
    }
    const double last = ladder.back();
    const double prev = ladder[ladder.size() - 2];
    CHECK(std::abs(last - prev) < 1e-8);
}

TEST_CASE("parity observables") {
    for (double alpha : {0.0, 0.3, 0.7}) {
        TruncatedModel m = rabi_model(alpha, 36);
        const auto gs = ground_state(m);
        const auto obs = observables(m, gs.state);
        // conserved parity sector: exactly -1 at every coupling
        CHECK(obs.spin_boson_parity == doctest::Approx(-1.0).epsilon(1e-10));
        // the direct sigma_z (-1)^N expectation vanishes by the flip symmetry
        CHECK(std::abs(obs.spin_times_boson_parity) < 1e-10);
        // N bound
        CHECK(obs.N <= 0.5 * alpha * alpha * 1.0 + 1e-10);
        if (alpha == 0.0) {
            CHECK(obs.N == doctest::Approx(0.0));
            CHECK(obs.boson_parity == doctest::Approx(1.0));
        } else {
            CHECK(obs.boson_parity >= std::exp(-alpha * alpha) - 1e-10);
        }
    }
}

TEST_CASE("field operator quadrature against exact moments") {
    TruncatedModel m = rabi_model(0.3, 34);
    const auto gs = ground_state(m);
    const FieldOperator phi(m, {1.0});
    CHECK(phi.norm_f_sq() == doctest::Approx(1.0));

    // moments by mat-vec vs quadrature of polynomials
    const double m1 = phi.moment(gs.state, 1);
    const double m2 = phi.moment(gs.state, 2);
    CHECK(std::abs(m1) < 1e-10);  // flip symmetry
    CHECK(phi.expectation(gs.state, [](double x) { return x * x; }) ==
          doctest::Approx(m2).epsilon(1e-10));
    CHECK(m2 > 0.5);  // coupling increases the fluctuation above the free value

    // vacuum limit
    TruncatedModel m0 = rabi_model(0.0, 20);
    const auto gs0 = ground_state(m0);
    const FieldOperator phi0(m0, {1.0});
    CHECK(phi0.moment(gs0.state, 2) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(phi0.expectation(gs0.state, [](double x) { return std::cos(x); }) ==
          doctest::Approx(std::exp(-0.25)).epsilon(1e-9));
}

TEST_CASE("gaussian moment grows monotonically toward the domain edge") {
    TruncatedModel m = rabi_model(0.4, 40);
    const auto gs = ground_state(m);
    const FieldOperator phi(m, {1.0});
    double prev = 0.0;
    for (double frac : {0.5, 0.8, 0.9, 0.95}) {
        const double beta = frac / phi.norm_f_sq();
        const double v = phi.expectation(gs.state, [beta](double x) {
            return std::exp(beta * x * x);
        });
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev > 1.0);
}

TEST_CASE("sigma expectation via polarization") {
    TruncatedModel m = rabi_model(0.35, 34);
    const auto gs = ground_state(m);
    const FieldOperator phi(m, {1.0});
    // <sigma_z phi> by polarization quadrature vs direct mat-vec
    const std::size_t half = m.dim() / 2;
    std::vector<double> sz(gs.state.size());
    for (std::size_t i = 0; i < sz.size(); ++i) {
        sz[i] = (i < half ? 1.0 : -1.0) * gs.state[i];
    }
    std::vector<double> pv;
    phi.matvec()(gs.state, pv);
    double direct = 0.0;
    for (std::size_t i = 0; i < sz.size(); ++i) direct += sz[i] * pv[i];
    const double quadv =
        phi.sigma_expectation(gs.state, [](double x) { return x; });
    CHECK(quadv == doctest::Approx(direct).epsilon(1e-9));
    CHECK(direct < 0.0);  // the coupled spin drags the field opposite to sigma
}

TEST_CASE("dimension budget is enforced") {
    TruncatedModel m;
    m.eps = 1.0;
    m.alpha = 0.1;
    m.modes = {{1.0, 1.0}, {0.5, 2.0}, {0.25, 3.0}};
    m.n_max = 40;
    CHECK_THROWS(ground_state(m));
}

TEST_CASE("brute force path sum: free marginals are exact") {
    const KernelSet ks = build_kernels(SpectralDensity{DiscreteModes{{{1.0, 1.0}}}});
    DiscretizedSystem sys(2.0, 1.0, 0.0, 10,
                          [&ks](double t) { return ks.w_amp(t); });
    const auto marg = sys.exact_marginals();
    for (std::size_t j = 0; j < marg.spin_up.size(); ++j) {
        CHECK(marg.spin_up[j] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(marg.pair_corr[j] ==
              doctest::Approx(sys.free_pair_corr(static_cast<int>(j))).epsilon(1e-12));
    }
}

TEST_CASE("brute force path sum: single slot by hand") {
    // one slot: states (v, b) with weight rho^b e^{lambda A}; A couples the
    // two boundary spins only
    auto w = [](double t) { return std::exp(-std::abs(t)); };
    DiscretizedSystem sys(0.5, 1.0, 0.3, 1, w);
    const double dt = 1.0;
    const double p = 0.5 * (1.0 - std::exp(-2.0));
    const double rho = p / (1.0 - p);
    // boundary spins: b=0 -> (v,v); b=1 -> (v,-v)
    auto a_of = [&](int y0, int y1) {
        const double c = 0.5 * dt * dt;
        return c * (y0 * y0 * w(0.0) + y1 * y1 * w(0.0)) / 1.0 +
               2.0 * c * y0 * y1 * w(dt) * 0.5;
    };
    // trapezoid weights are (1/2,1/2) on the two boundary nodes
    const double a0 = 0.25 * (w(0.0) + w(0.0)) + 2.0 * 0.25 * w(dt);
    const double a1 = 0.25 * (w(0.0) + w(0.0)) - 2.0 * 0.25 * w(dt);
    (void)a_of;
    const double z = 2.0 * (std::exp(0.3 * a0) + rho * std::exp(0.3 * a1));
    const double mean_jumps = 2.0 * rho * std::exp(0.3 * a1) / z;
    const auto marg = sys.exact_marginals();
    CHECK(marg.mean_jumps == doctest::Approx(mean_jumps).epsilon(1e-12));
    CHECK(sys.jump_count(1) == 1);
    CHECK(sys.action(0) == doctest::Approx(a0).epsilon(1e-12));
    CHECK(sys.action(1) == doctest::Approx(a1).epsilon(1e-12));
}

TEST_CASE("brute force path sum: time reversal symmetry") {
    const KernelSet ks = build_kernels(SpectralDensity{DiscreteModes{{{1.0, 1.0}}}});
    DiscretizedSystem sys(2.0, 1.0, 0.2, 9,
                          [&ks](double t) { return ks.w_amp(t); });
    const auto marg = sys.exact_marginals();
    const std::size_t nb = marg.spin_up.size();
    for (std::size_t j = 0; j < nb; ++j) {
        CHECK(marg.spin_up[j] == doctest::Approx(marg.spin_up[nb - 1 - j]).epsilon(1e-10));
    }
    CHECK_THROWS_AS(DiscretizedSystem(2.0, 1.0, 0.2, 13, [](double) { return 0.0; }),
                    TooManySlots);
}

TEST_CASE("decoupled closed forms") {
    const SpectralDensity bath = PowerLawExpCutoff{1.0, 2.0, 1.0};
    const KernelSet ks = build_kernels(bath, {overlap_f_equals_h(bath)});
    const auto& cross = ks.cross("h");
    CHECK(van_hove::char_fn(0.0, 0.7, cross) == doctest::Approx(1.0));
    CHECK(van_hove::char_fn(1.0, 0.0, cross) ==
          doctest::Approx(std::exp(-0.25 * cross.norm_f_sq)).epsilon(1e-12));
    // (h/w, h) = 1 for this bath: the cosine argument is exactly beta*alpha
    CHECK(van_hove::char_fn(0.8, 0.5, cross) ==
          doctest::Approx(std::exp(-0.25 * 0.64 * 2.0) * std::cos(0.4)).epsilon(1e-12));
    CHECK(van_hove::energy_shift(0.5, ks) == doctest::Approx(-0.125).epsilon(1e-12));
}

}  // TEST_SUITE

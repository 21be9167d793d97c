#include <doctest.h>

#include <cmath>
#include <vector>

#include "sbmc/rng.hpp"
#include "sbmc/statistics.hpp"

using namespace sbmc;

TEST_SUITE("statistics") {

TEST_CASE("mean and variance") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    CHECK(stats::mean(x) == doctest::Approx(2.5));
    CHECK(stats::variance(x) == doctest::Approx(1.25));
}

TEST_CASE("iid series has tau about one half") {
    Rng rng(2, 0);
    std::vector<double> x(20000);
    for (auto& v : x) v = rng.uniform();
    const double tau = stats::tau_int(x);
    CHECK(tau == doctest::Approx(0.5).epsilon(0.15));
    const auto s = stats::summarize(x);
    const double expected_se = std::sqrt(1.0 / 12.0 / static_cast<double>(x.size()));
    CHECK(s.stderror == doctest::Approx(expected_se).epsilon(0.35));
}

TEST_CASE("ar1 series tau matches theory") {
    // x_{t+1} = rho x_t + noise: tau_int = (1+rho)/(2(1-rho))
    const double rho = 0.8;
    Rng rng(9, 1);
    std::vector<double> x(200000);
    double cur = 0.0;
    for (auto& v : x) {
        cur = rho * cur + rng.normal();
        v = cur;
    }
    const double tau = stats::tau_int(x);
    const double ref = 0.5 * (1.0 + rho) / (1.0 - rho);
    CHECK(tau == doctest::Approx(ref).epsilon(0.2));

    // blocked errors widen accordingly
    const auto s = stats::summarize(x);
    const double sd = std::sqrt(stats::variance(x));
    const double naive = sd / std::sqrt(static_cast<double>(x.size()));
    CHECK(s.stderror > 2.0 * naive);
    CHECK(s.stderror < 6.0 * naive);
}

TEST_CASE("combine is associative and weighted") {
    stats::Summary a{1.0, 0.1, 1.0, 100};
    stats::Summary b{3.0, 0.1, 1.0, 300};
    const auto ab = stats::combine({a, b});
    CHECK(ab.mean == doctest::Approx(2.5));
    CHECK(ab.n == 400);
    stats::Summary c{2.0, 0.2, 2.0, 100};
    const auto abc1 = stats::combine({stats::combine({a, b}), c});
    const auto abc2 = stats::combine({a, stats::combine({b, c})});
    CHECK(abc1.mean == doctest::Approx(abc2.mean).epsilon(1e-12));
    CHECK(abc1.n == abc2.n);
}

TEST_CASE("per-chain summaries respect boundaries") {
    std::vector<double> x(1000, 1.0);
    for (std::size_t i = 500; i < 1000; ++i) x[i] = 3.0;
    const std::vector<std::size_t> edges = {0, 500, 1000};
    const auto s = stats::summarize_chains(x, edges);
    CHECK(s.mean == doctest::Approx(2.0));
    // constant chains: no inflation from the cross-chain jump
    CHECK(s.stderror == doctest::Approx(0.0));
}

}  // TEST_SUITE

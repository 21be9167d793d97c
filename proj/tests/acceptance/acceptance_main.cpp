// Acceptance suite: one criterion per invocation, each printing PASS/FAIL
// lines for its sub-checks and exiting nonzero on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sbmc/driver.hpp"
#include "sbmc/energy.hpp"
#include "sbmc/estimators.hpp"
#include "sbmc/grid_sampler.hpp"
#include "sbmc/oracle_ed.hpp"
#include "sbmc/oracle_pathsum.hpp"
#include "sbmc/quadrature.hpp"
#include "sbmc/special.hpp"
#include "../support/oracles.hpp"

using namespace sbmc;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what, const std::string& detail) {
    std::printf("  [%s] %s: %s\n", ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8g", x);
    return buf;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

const SpectralDensity kPowerBath = PowerLawExpCutoff{1.0, 2.0, 1.0};
const SpectralDensity kSingleMode = DiscreteModes{{{1.0, 1.0}}};

KernelSet kernels_for(const SpectralDensity& bath) {
    return build_kernels(bath, {overlap_f_equals_h(bath),
                                overlap_f_equals_h_over_omega(bath)});
}

using sbmc::testing::random_path;

// ---------------------------------------------------------------------------
// criterion 1: kernel exactness, runtime < 1 s
void criterion1() {
    Timer timer;
    const KernelSet ks = build_kernels(kPowerBath);

    double worst_w = 0.0;
    for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 9.0}) {
        const double closed = 1.0 / std::pow(1.0 + std::abs(t), 3.0);
        const double viaks = ks.w_amp(t);
        const double quadr =
            quad::integrate_to_inf(
                [t](double w) { return 0.5 * w * w * std::exp(-w * (1.0 + t)); }, 0.0,
                1e-13, 1e-11)
                .value;
        worst_w = std::max({worst_w, std::abs(viaks - closed) / closed,
                            std::abs(viaks - quadr) / quadr});
    }
    check(worst_w < 1e-8, "w_amp(t) = (1+|t|)^-3 vs adaptive quadrature",
          "worst rel err " + num(worst_w));

    const double u2_closed = 2.0 / 3.0;
    const double u2_quad =
        quad::integrate([&ks](double u) { return (2.0 - u) * ks.w_amp(u); }, 0.0,
                        2.0, 1e-13, 1e-11)
            .value;
    const double e1 = std::abs(ks.u2(2.0) - u2_closed) / u2_closed;
    const double e2 = std::abs(ks.u2(2.0) - u2_quad) / u2_quad;
    check(std::max(e1, e2) < 1e-8, "U(2) = 2/3",
          "U(2) = " + num(ks.u2(2.0)) + ", rel err " + num(std::max(e1, e2)));

    Rng rng(2024, 0);
    double worst_rect = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(-5.0, 4.0);
        const double b = a + rng.uniform(0.1, 3.0);
        const double c = rng.uniform(-5.0, 4.0);
        const double d = c + rng.uniform(0.1, 3.0);
        const double rect = ks.rect(a, b, c, d);
        const double ref = sbmc::testing::rect_by_quadrature(ks, a, b, c, d);
        worst_rect = std::max(worst_rect, std::abs(rect - ref) / (std::abs(ref) + 1e-8));
    }
    check(worst_rect < 1e-8, "rectangle identity on 100 random rectangles",
          "worst rel err " + num(worst_rect));

    const double secs = timer.seconds();
    check(secs < 1.0, "runtime budget", num(secs) + " s < 1 s");
}

// ---------------------------------------------------------------------------
// criterion 2: action oracle, runtime < 1 min
void criterion2() {
    Timer timer;
    const KernelSet ks = build_kernels(kPowerBath);
    Rng rng(7, 0);

    double worst = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const SpinPath p = random_path(rng, 2.0, 50);
        const double a = pair_action(p, ks);
        const double ref = sbmc::testing::action_by_quadrature(p, ks);
        worst = std::max(worst, std::abs(a - ref) / std::max(1.0, std::abs(ref)));
    }
    check(worst < 1e-7, "pair_action vs 2-D quadrature on 1000 random paths",
          "worst rel err " + num(worst));

    double worst_d = 0.0;
    for (int it = 0; it < 500; ++it) {
        SpinPath p = random_path(rng, 2.0, 30);
        const double lo = rng.uniform(-2.0, 1.9);
        const double hi = std::min(lo + rng.uniform(0.01, 2.0), 2.0);
        const double dA = delta_action_flip(p, ks, lo, hi);
        SpinPath q = p;
        auto toggle = [&q](double x) {
            if (x <= -q.T || x >= q.T) return;
            auto pos = std::lower_bound(q.jumps.begin(), q.jumps.end(), x);
            if (pos != q.jumps.end() && *pos == x) {
                q.jumps.erase(pos);
            } else {
                q.jumps.insert(pos, x);
            }
        };
        toggle(lo);
        toggle(hi);
        const double ref = pair_action(q, ks) - pair_action(p, ks);
        worst_d = std::max(worst_d,
                           std::abs(dA - ref) / std::max(1.0, std::abs(ref)));
    }
    check(worst_d < 1e-9, "delta_action_flip vs full recompute",
          "worst rel err " + num(worst_d));

    const double secs = timer.seconds();
    check(secs < 60.0, "runtime budget", num(secs) + " s < 60 s");
}

// ---------------------------------------------------------------------------
// criterion 3: exact sampler stationarity on the slotted system, < 2 min
void criterion3() {
    Timer timer;
    const KernelSet ks = kernels_for(kSingleMode);
    const double alpha = 0.5;
    DiscretizedSystem sys(2.0, 1.0, 0.5 * alpha * alpha, 10,
                          [&ks](double t) { return ks.w_amp(t); });
    GridSampler gs(sys);

    const double rowres = gs.row_sum_residual();
    check(rowres < 1e-12, "transition matrix is row stochastic",
          "residual " + num(rowres));
    const double res = gs.stationarity_residual();
    check(res < 1e-10, "pi P = pi on all 2*2^10 states", "residual " + num(res));

    Rng rng(31, 0);
    const auto emp = gs.run(0, 1000000, rng);
    const auto exact = sys.exact_marginals();
    double tv_spin = 0.0;
    for (std::size_t j = 0; j < emp.spin_up.size(); ++j) {
        tv_spin = std::max(tv_spin, std::abs(emp.spin_up[j] - exact.spin_up[j]));
    }
    double tv_n = 0.0;
    for (std::size_t n = 0; n < emp.njump_dist.size(); ++n) {
        tv_n += 0.5 * std::abs(emp.njump_dist[n] - exact.njump_dist[n]);
    }
    check(tv_spin < 0.01, "slot-spin marginals vs enumeration (1e6 steps)",
          "max TV " + num(tv_spin));
    check(tv_n < 0.01, "jump-count distribution vs enumeration",
          "TV " + num(tv_n));

    const double secs = timer.seconds();
    check(secs < 120.0, "runtime budget", num(secs) + " s < 120 s");
}

// ---------------------------------------------------------------------------
// criterion 4: free-theory laws, < 1 min
void criterion4() {
    Timer timer;
    const KernelSet ks = kernels_for(kSingleMode);
    McmcConfig cfg;
    cfg.T = 8.0;
    cfg.eps = 1.0;
    cfg.alpha = 0.0;
    cfg.lambda_run = 0.0;
    cfg.burnin_sweeps = 500;
    cfg.measure_sweeps = 20000;
    cfg.seed = 404;
    cfg.t_w = 4.0;
    cfg.n_probe = 41;
    auto run = run_chains(cfg, ks);
    const auto& s = run.samples;

    std::vector<double> n(s.size());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = s.njumps[i];
    const auto sn = stats::summarize_chains(n, s.chain_edges);
    const double mu = 2.0 * cfg.T * cfg.eps;
    check(std::abs(sn.mean - mu) < 3.0 * sn.stderror,
          "<n> = 2 T eps under the free measure",
          num(sn.mean) + " +- " + num(sn.stderror) + " vs " + num(mu));

    const auto corr = est::spin_correlation(s, 20);
    const double dt = s.probe_times[1] - s.probe_times[0];
    int lag_checks = 0;
    bool all_ok = true;
    std::string detail;
    for (std::size_t L : {2ul, 5ul, 8ul, 12ul, 16ul}) {
        const double ref = std::exp(-2.0 * cfg.eps * static_cast<double>(L) * dt);
        const bool ok =
            std::abs(corr[L].stat.mean - ref) < 3.0 * corr[L].stat.stderror;
        all_ok = all_ok && ok;
        ++lag_checks;
        detail += " t=" + num(corr[L].lag) + ":" + num(corr[L].stat.mean) + "/" +
                  num(ref);
    }
    check(all_ok && lag_checks == 5, "<Y_0 Y_t> = exp(-2 eps t) at 5 lags", detail);

    const double secs = timer.seconds();
    check(secs < 60.0, "runtime budget", num(secs) + " s < 60 s");
}

// ---------------------------------------------------------------------------
// criterion 5 state shared with criterion 9
struct RabiRoutes {
    double stirling = 0.0, stirling_err = 0.0, stirling_sys = 0.0;
    double resolvent = 0.0, resolvent_err = 0.0, resolvent_sys = 0.0;
    double derivative = 0.0, derivative_err = 0.0;
};

std::string cache_dir() {
#ifdef SBMC_ACCEPTANCE_CACHE
    return SBMC_ACCEPTANCE_CACHE;
#else
    return "acceptance_cache";
#endif
}

void write_routes(const RabiRoutes& r) {
    nlohmann::json j;
    j["stirling"] = {r.stirling, r.stirling_err, r.stirling_sys};
    j["resolvent"] = {r.resolvent, r.resolvent_err, r.resolvent_sys};
    j["derivative"] = {r.derivative, r.derivative_err, 0.0};
    std::filesystem::create_directories(cache_dir());
    std::ofstream out(cache_dir() + "/rabi_routes.json");
    out << j.dump(2) << "\n";
}

bool read_routes(RabiRoutes& r) {
    std::ifstream in(cache_dir() + "/rabi_routes.json");
    if (!in) return false;
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) return false;
    auto get = [&j](const char* key, double& v, double& e, double& sys) {
        v = j[key][0].get<double>();
        e = j[key][1].get<double>();
        sys = j[key][2].get<double>();
    };
    double dummy;
    get("stirling", r.stirling, r.stirling_err, r.stirling_sys);
    get("resolvent", r.resolvent, r.resolvent_err, r.resolvent_sys);
    get("derivative", r.derivative, r.derivative_err, dummy);
    return true;
}

McmcConfig rabi_config() {
    McmcConfig cfg;
    cfg.T = 20.0;
    cfg.eps = 1.0;
    cfg.alpha = 0.3;
    cfg.lambda_run = 0.5 * cfg.alpha * cfg.alpha;
    cfg.burnin_sweeps = 5000;
    cfg.measure_sweeps = 200000;
    cfg.seed = 20240501;
    cfg.chains = 1;
    cfg.t_w = 10.0;
    cfg.n_probe = 81;
    return cfg;
}

RabiRoutes compute_routes(const SampleSet& s, const KernelSet& ks) {
    RabiRoutes routes;
    const auto n1 = est::n_moment(s, ks, 1);
    routes.stirling = n1.value;
    routes.stirling_err = n1.stderror;
    routes.stirling_sys = n1.systematic;
    const auto corr = est::spin_correlation(s);
    const auto fit = est::gap_fit(corr, 0.25, 2.0);
    const auto rr = est::resolvent(s, ks, {1.0}, fit);
    routes.resolvent = rr.boson_number.value;
    routes.resolvent_err = rr.boson_number.stderror;
    routes.resolvent_sys = rr.boson_number.systematic;
    const double db = 1e-3;
    const auto bp = est::boson_generating(s, ks, db);
    const auto bm = est::boson_generating(s, ks, -db);
    routes.derivative = -(bp.real_part.value - bm.real_part.value) / (2.0 * db);
    routes.derivative_err = bp.real_part.stderror;
    return routes;
}

void criterion5() {
    Timer timer;

    // exact-diagonalization targets come first
    TruncatedModel model;
    model.eps = 1.0;
    model.alpha = 0.3;
    model.modes = {{1.0, 1.0}};
    model.n_max = 34;
    const auto gs = ground_state(model);
    const auto obs = observables(model, gs.state);
    const FieldOperator phi_h(model, {1.0});
    const double ed_phi2 = phi_h.moment(gs.state, 2);
    const double ed_char05 =
        phi_h.expectation(gs.state, [](double x) { return std::cos(0.5 * x); });
    const double ed_char10 =
        phi_h.expectation(gs.state, [](double x) { return std::cos(1.0 * x); });
    // ||e^{(beta/2) phi^2} psi||^2 = <e^{beta phi^2}>
    const double beta_g = 0.5 / phi_h.norm_f_sq();
    const double ed_gauss = phi_h.expectation(
        gs.state, [beta_g](double x) { return std::exp(beta_g * x * x); });
    std::printf(
        "  oracle targets: E=%.8f gap=%.8f N=%.8g N2=%.8g parity=%.8g phi2=%.8g\n",
        gs.energy, gs.gap, obs.N, obs.N2, obs.boson_parity, ed_phi2);

    const KernelSet ks = kernels_for(kSingleMode);
    McmcConfig cfg = rabi_config();
    auto run = run_chains(cfg, ks);
    const auto& s = run.samples;

    auto compare = [&](const std::string& name, const EstimatorResult& mc,
                       double ed) {
        const double tol = 3.0 * (mc.stderror + mc.systematic);
        const bool stat_ok = mc.stderror <= 0.01 * std::max(std::abs(ed), 1e-3);
        const bool ok = std::abs(mc.value - ed) <= tol;
        check(ok && stat_ok, name,
              "mcmc " + num(mc.value) + " +- " + num(mc.stderror) + " (sys " +
                  num(mc.systematic) + ") vs oracle " + num(ed));
    };

    // energy via the coupling ladder
    EnergyOptions eopt;
    eopt.nodes = 7;
    eopt.burnin_sweeps = 2000;
    eopt.measure_sweeps = 22000;
    const EnergyResult er = energy(cfg, ks, eopt);
    {
        const double tol = 3.0 * (er.stderror + er.systematic);
        const bool ok = std::abs(er.value - gs.energy) <= tol;
        const bool stat_ok = er.stderror <= 0.01 * std::abs(gs.energy);
        check(ok && stat_ok, "energy",
              "mcmc " + num(er.value) + " +- " + num(er.stderror) + " (sys " +
                  num(er.systematic) + ") vs oracle " + num(gs.energy));
    }

    // gap from the correlation decay; the channel is a two-exponential
    // mixture here, so the oracle target is the identical log-linear fit
    // applied to the exact correlation at the same lags and weights
    const auto corr = est::spin_correlation(s);
    const auto fit = est::gap_fit(corr, 0.25, 2.0);
    {
        const auto channel = sigma_z_channel(model, gs.state);
        std::vector<est::CorrelationPoint> corr_ed = corr;
        for (auto& c : corr_ed) {
            double acc = 0.0;
            for (std::size_t j = 0; j < channel.nodes.size(); ++j) {
                acc += channel.weights[j] *
                       std::exp(-(channel.nodes[j] - gs.energy) * c.lag);
            }
            c.stat.mean = acc;  // same stderr as the sampled points
        }
        const auto fit_ed = est::gap_fit(corr_ed, 0.25, 2.0);
        const double tol = 3.0 * std::hypot(fit.gap_err, fit_ed.gap_err);
        const bool ok = std::abs(fit.gap - fit_ed.gap) <= tol;
        const bool stat_ok = fit.gap_err <= 0.01 * fit_ed.gap;
        check(ok && stat_ok, "gap",
              "mcmc fit " + num(fit.gap) + " +- " + num(fit.gap_err) +
                  " vs oracle fit " + num(fit_ed.gap) + " (channel: dominant " +
                  num(gs.gap) + " w=" + num(gs.gap_weight) + ", sector " +
                  num(gs.gap_sector) + ")");
    }

    compare("<N>", est::n_moment(s, ks, 1), obs.N);
    compare("<N^2>", est::n_moment(s, ks, 2), obs.N2);
    {
        auto pp = est::parity_pair(s, ks);
        compare("<(-1)^N>", pp.number, obs.boson_parity);
    }
    compare("<phi(h)^2>", est::field_moment(s, ks, "h", 2), ed_phi2);
    compare("<e^{i 0.5 phi}>", est::char_fn(s, ks, "h", 0.5), ed_char05);
    compare("<e^{i 1.0 phi}>", est::char_fn(s, ks, "h", 1.0), ed_char10);
    compare("gaussian moment", est::gaussian_moment(s, ks, "h", beta_g), ed_gauss);

    write_routes(compute_routes(s, ks));

    const double secs = timer.seconds();
    check(secs < 900.0, "runtime budget", num(secs) + " s < 900 s");
}

// ---------------------------------------------------------------------------
// criterion 6: parity identities at two parameter points, <= 10 min
void run_parity_point(const std::string& label, const SpectralDensity& bath,
                      McmcConfig cfg) {
    const KernelSet ks = kernels_for(bath);
    auto run = run_chains(cfg, ks);
    const auto pp = est::parity_pair(run.samples, ks);

    const double tol_spin = 3.0 * pp.spin.stderror + pp.spin.systematic;
    check(std::abs(pp.spin.value - (-1.0)) <= tol_spin,
          label + ": <Y0 e^{-2 a^2 W}> = -1 within 3 sigma + truncation",
          "estimate " + num(pp.spin.value) + " +- " + num(pp.spin.stderror) +
              " (sys " + num(pp.spin.systematic) + ")");

    check(pp.number.value >= pp.lower_bound - 3.0 * pp.number.stderror,
          label + ": <e^{-2 a^2 W}> >= e^{-a^2 ||h/w||^2}",
          num(pp.number.value) + " vs bound " + num(pp.lower_bound));
}

void criterion6() {
    Timer timer;
    {
        McmcConfig cfg;
        cfg.T = 20.0;
        cfg.eps = 1.0;
        cfg.alpha = 0.5;
        cfg.lambda_run = 0.125;
        cfg.burnin_sweeps = 2000;
        cfg.measure_sweeps = 60000;
        cfg.seed = 61;
        cfg.t_w = 10.0;
        cfg.n_probe = 61;
        run_parity_point("discrete bath", kSingleMode, cfg);
    }
    {
        McmcConfig cfg;
        cfg.T = 60.0;
        cfg.eps = 0.5;
        cfg.alpha = 0.4;
        cfg.lambda_run = 0.08;
        cfg.burnin_sweeps = 1500;
        cfg.measure_sweeps = 40000;
        cfg.seed = 62;
        cfg.t_w = 45.0;
        cfg.n_probe = 61;
        run_parity_point("continuum bath", kPowerBath, cfg);
    }
    const double secs = timer.seconds();
    check(secs < 600.0, "runtime budget", num(secs) + " s < 600 s");
}

// ---------------------------------------------------------------------------
// criterion 7: per-path bound and the expectation inequality chain
void criterion7() {
    Timer timer;
    const KernelSet ks = kernels_for(kPowerBath);
    McmcConfig cfg;
    cfg.T = 60.0;
    cfg.eps = 0.5;
    cfg.alpha = 0.4;
    cfg.lambda_run = 0.08;
    cfg.burnin_sweeps = 1500;
    cfg.measure_sweeps = 50000;
    cfg.seed = 71;
    cfg.t_w = 45.0;
    cfg.n_probe = 121;

    // quadrant() hard-asserts |W| <= ||h/w||^2/2 on every sample; reaching
    // this point means the assertion never fired
    auto run = run_chains(cfg, ks);
    const auto& s = run.samples;
    double wmax = 0.0;
    for (double w : s.w_quad) wmax = std::max(wmax, std::abs(w));
    const double bound = 0.5 * ks.norm_h_over_omega_sq();
    check(wmax <= bound * (1.0 + 1e-9),
          "|W| <= ||h/w||^2 / 2 on every sampled path",
          "max |W| = " + num(wmax) + ", bound " + num(bound));

    // middle term oriented by the sign of K: <Y0 K> < 0 for positive
    // coupling, so the number bound reads <N> <= -(alpha/2) <Y0 K_{h/w}>
    const auto n1 = est::n_moment(s, ks, 1);
    const auto fl = est::fluctuations(s, ks, "h_over_omega");
    const double middle = -0.5 * cfg.alpha * fl.sigma_phi.value;
    const double middle_err = 0.5 * cfg.alpha * fl.sigma_phi.stderror;
    const double upper = 0.5 * cfg.alpha * cfg.alpha * ks.norm_h_over_omega_sq();

    const double slack1 = 3.0 * (n1.stderror + middle_err) + n1.systematic;
    check(n1.value <= middle + slack1,
          "<N> <= (alpha/2) <sigma phi(h/w)>",
          num(n1.value) + " <= " + num(middle) + " (+" + num(slack1) + ")");
    const double slack2 = 3.0 * middle_err;
    check(middle <= upper + slack2, "(alpha/2) <sigma phi(h/w)> <= (alpha^2/2) ||h/w||^2",
          num(middle) + " <= " + num(upper));

    // same chain through the correlation-function route
    const auto corr = est::spin_correlation(s);
    const auto fit = est::gap_fit(corr, 0.7, 3.1);
    const auto rr = est::resolvent(s, ks, {0.5, 1.0}, fit);
    check(rr.chain_holds, "resolvent route confirms the chain",
          "N " + num(rr.boson_number.value) + " <= " +
              num(rr.sigma_phi_bound.value) + " <= " + num(rr.upper_bound));

    const double secs = timer.seconds();
    check(secs < 600.0, "runtime budget", num(secs) + " s < 600 s");
}

// ---------------------------------------------------------------------------
// criterion 8: monotonicity statements
void criterion8() {
    Timer timer;
    const KernelSet ks = kernels_for(kPowerBath);
    McmcConfig cfg;
    cfg.T = 60.0;
    cfg.eps = 0.5;
    cfg.alpha = 0.4;
    cfg.lambda_run = 0.08;
    cfg.burnin_sweeps = 1500;
    cfg.measure_sweeps = 30000;
    cfg.seed = 81;
    cfg.t_w = 45.0;
    cfg.n_probe = 41;
    auto run = run_chains(cfg, ks);
    const auto& s = run.samples;

    const auto fl = est::fluctuations(s, ks, "h");
    const double f0 = 0.5 * ks.cross("h").norm_f_sq;
    check(fl.F_alpha.value >= f0 - 3.0 * fl.F_alpha.stderror,
          "F_alpha >= F_0", num(fl.F_alpha.value) + " vs " + num(f0));

    const double s_ord = 1.0;
    const auto lam = est::fractional_moment(s, ks, "h", s_ord);
    const double lam0 = est::fractional_moment_free(ks.cross("h").norm_f_sq, s_ord);
    check(lam.value >= lam0 - 3.0 * lam.stderror, "Lambda_alpha >= Lambda_0",
          num(lam.value) + " +- " + num(lam.stderror) + " vs " + num(lam0));

    double prev = -1.0;
    bool increasing = true;
    std::string detail;
    for (double frac : {0.5, 0.8, 0.9, 0.95}) {
        const double beta = frac / ks.cross("h").norm_f_sq;
        const auto gm = est::gaussian_moment(s, ks, "h", beta);
        increasing = increasing && (gm.value > prev);
        prev = gm.value;
        detail += " " + num(gm.value);
    }
    check(increasing, "gaussian moment increases along the beta ladder", detail);

    const double secs = timer.seconds();
    check(secs < 600.0, "runtime budget", num(secs) + " s < 600 s");
}

// ---------------------------------------------------------------------------
// criterion 9: three routes to <N> agree (reuses the criterion-5 run)
void criterion9() {
    Timer timer;
    RabiRoutes routes;
    if (!read_routes(routes)) {
        std::printf("  (criterion-5 cache missing; running a reduced chain)\n");
        const KernelSet ks = kernels_for(kSingleMode);
        McmcConfig cfg = rabi_config();
        cfg.measure_sweeps = 60000;
        auto run = run_chains(cfg, ks);
        routes = compute_routes(run.samples, ks);
    }
    const double tol12 = 3.0 * (routes.stirling_err + routes.resolvent_err) +
                         routes.stirling_sys + routes.resolvent_sys;
    check(std::abs(routes.stirling - routes.resolvent) <= tol12,
          "Stirling m=1 vs resolvent route",
          num(routes.stirling) + " vs " + num(routes.resolvent) + " (tol " +
              num(tol12) + ")");
    const double tol13 =
        3.0 * (routes.stirling_err + routes.derivative_err) + 1e-5;
    check(std::abs(routes.stirling - routes.derivative) <= tol13,
          "Stirling m=1 vs generating-function derivative",
          num(routes.stirling) + " vs " + num(routes.derivative));
    const double secs = timer.seconds();
    check(secs < 600.0, "runtime budget", num(secs) + " s < 600 s");
}

// ---------------------------------------------------------------------------
// criterion 10: reproducibility and error scaling
void criterion10() {
    Timer timer;
    const char* cfg_text = R"(
seed = 4242
[model]
epsilon = 1.0
alpha = 0.3
[model.bath]
type = "discrete"
couplings = [1.0]
frequencies = [1.0]
[sampler]
T = 10.0
burnin_sweeps = 300
measure_sweeps = 3000
chains = 2
[estimators]
window = 5.0
betas = [0.5]
observables = ["char_fn", "parity", "number_moments"]
[output]
dir = "acc10_out"
)";
    RunConfig rc = parse_run_config(cfg_text, "acceptance10.toml");
    CliOverrides opt;
    opt.out_dir = cache_dir() + "/acc10_a";
    const auto a = run_estimate(rc, opt);
    opt.out_dir = cache_dir() + "/acc10_b";
    const auto b = run_estimate(rc, opt);
    const std::string ja = results_json(a.meta, a.records);
    const std::string jb = results_json(b.meta, b.records);
    check(ja == jb, "identical seed and config give byte-identical payloads",
          ja == jb ? "payloads match" : "payloads differ");

    // doubling the sample budget shrinks errors by sqrt(2) within a 2 sigma band
    const KernelSet ks = kernels_for(kSingleMode);
    McmcConfig cfg;
    cfg.T = 10.0;
    cfg.eps = 1.0;
    cfg.alpha = 0.3;
    cfg.lambda_run = 0.045;
    cfg.burnin_sweeps = 500;
    cfg.seed = 1001;
    cfg.t_w = 5.0;
    cfg.measure_sweeps = 20000;
    auto r1 = run_chains(cfg, ks);
    cfg.measure_sweeps = 40000;
    cfg.seed = 1002;
    auto r2 = run_chains(cfg, ks);
    const auto s1 = stats::summarize_chains(r1.samples.action, r1.samples.chain_edges);
    const auto s2 = stats::summarize_chains(r2.samples.action, r2.samples.chain_edges);
    const double ratio = s1.stderror / s2.stderror;
    // block counts are ~N/(20 tau); 2 sigma of the log ratio
    const double n_eff1 = static_cast<double>(s1.n) / (20.0 * s1.tau_int);
    const double n_eff2 = static_cast<double>(s2.n) / (20.0 * s2.tau_int);
    const double band = 2.0 * std::sqrt(0.5 / n_eff1 + 0.5 / n_eff2);
    const bool ok = std::abs(std::log(ratio) - 0.5 * std::log(2.0)) <= band + 0.05;
    check(ok, "doubling samples shrinks stderr by sqrt(2) within 2 sigma",
          "ratio " + num(ratio) + " vs " + num(std::sqrt(2.0)) + " band " +
              num(band));

    const double secs = timer.seconds();
    check(secs < 300.0, "runtime budget", num(secs) + " s < 300 s");
}

}  // namespace

int main(int argc, char** argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which = std::atoi(argv[i + 1]);
        }
    }
    if (which < 1 || which > 10) {
        std::fprintf(stderr, "usage: sbmc_acceptance --criterion N (1..10)\n");
        return 2;
    }
    std::printf("criterion %d:\n", which);
    switch (which) {
        case 1: criterion1(); break;
        case 2: criterion2(); break;
        case 3: criterion3(); break;
        case 4: criterion4(); break;
        case 5: criterion5(); break;
        case 6: criterion6(); break;
        case 7: criterion7(); break;
        case 8: criterion8(); break;
        case 9: criterion9(); break;
        case 10: criterion10(); break;
    }
    std::printf("criterion %d: %s\n", which, g_failures == 0 ? "PASS" : "FAIL");
    return g_failures == 0 ? 0 : 1;
}

#include "sbmc/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "sbmc/energy.hpp"
#include "sbmc/grid_sampler.hpp"
#include "sbmc/oracle_ed.hpp"
#include "sbmc/oracle_pathsum.hpp"
#include "sbmc/quadrature.hpp"
#include "sbmc/special.hpp"
#include "sbmc/van_hove.hpp"

namespace sbmc {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

bool wants(const ObservableRequest& req, const std::string& name) {
    if (req.names.empty()) return true;
    return std::find(req.names.begin(), req.names.end(), name) != req.names.end();
}

EstimatorResult plain(const std::string& name, const std::string& id, double v,
                      const std::string& note = "") {
    EstimatorResult r;
    r.name = name;
    r.formula_id = id;
    r.value = v;
    r.note = note;
    return r;
}

std::vector<ResultRecord> ed_records(const RunConfig& cfg) {
    std::vector<ResultRecord> out;
    const auto& dm = std::get<DiscreteModes>(cfg.bath);
    TruncatedModel model;
    model.eps = cfg.sampler.eps;
    model.alpha = cfg.sampler.alpha;
    model.n_max = cfg.oracle.n_max;
    for (const auto& m : dm.modes) model.modes.push_back({m.coupling, m.frequency});

    const GroundStateResult gs = ground_state(model);
    const EdObservables obs = observables(model, gs.state);

    auto push = [&out](EstimatorResult r) { out.push_back({std::move(r), "oracle"}); };
    push(plain("energy", "eq:criter", gs.energy));
    push(plain("gap", "eq:expectation", gs.gap));
    push(plain("n_moment(m=1)", "eq:m", obs.N));
    push(plain("n_moment(m=2)", "eq:m", obs.N2));
    push(plain("n_moment(m=3)", "eq:m", obs.N3));
    push(plain("n_moment(m=4)", "eq:m", obs.N4));
    push(plain("parity_number", "eq:n1", obs.boson_parity));
    push(plain("parity_spin_sector", "eq:n4", obs.spin_boson_parity,
               "conserved-parity sector value"));
    push(plain("parity_spin_direct", "eq:n4", obs.spin_times_boson_parity,
               "direct spin-times-boson-parity expectation"));
    push(plain("energy_perturbative", "eq:criter", perturbative_energy(model),
               "second-order reference"));

    std::vector<double> fh, fhw;
    for (const auto& m : dm.modes) {
        fh.push_back(m.coupling);
        fhw.push_back(m.coupling / m.frequency);
    }
    const FieldOperator phi_h(model, fh);
    push(plain("phi_moment(h,n=1)", "eq:phimoments", phi_h.moment(gs.state, 1)));
    push(plain("phi_moment(h,n=2)", "eq:phimoments", phi_h.moment(gs.state, 2)));
    push(plain("phi_moment(h,n=3)", "eq:phimoments", phi_h.moment(gs.state, 3)));
    push(plain("phi_moment(h,n=4)", "eq:phimoments", phi_h.moment(gs.state, 4)));
    for (double beta : cfg.observables.betas) {
        push(plain("char_fn(h,beta=" + std::to_string(beta) + ")",
                   "eq:expectationoffield2",
                   phi_h.expectation(gs.state, [beta](double x) {
                       return std::cos(beta * x);
                   })));
        push(plain("exp_moment(h,beta=" + std::to_string(beta) + ")", "eq:dd",
                   phi_h.expectation(gs.state, [beta](double x) {
                       return std::exp(beta * x);
                   })));
    }
    for (double frac : cfg.observables.gaussian_fracs) {
        // squared norm of e^{(beta/2) phi^2} applied to the ground state
        const double beta = frac / phi_h.norm_f_sq();
        push(plain("gaussian_moment(h,beta=" + std::to_string(beta) + ")",
                   "eq:gauss3", phi_h.expectation(gs.state, [beta](double x) {
                       return std::exp(beta * x * x);
                   })));
    }
    for (double s : cfg.observables.fractional_orders) {
        push(plain("fractional_moment(h,s=" + std::to_string(s) + ")", "eq:ab2",
                   phi_h.expectation(gs.state, [s](double x) {
                       return std::pow(std::abs(x), s);
                   })));
    }
    const FieldOperator phi_hw(model, fhw);
    push(plain("sigma_phi(h_over_omega)", "eq:hu",
               phi_hw.sigma_expectation(gs.state, [](double x) { return x; })));
    return out;
}

}  // namespace

EstimateOutcome run_estimate(RunConfig cfg, const CliOverrides& opt) {
    if (opt.seed) cfg.sampler.seed = *opt.seed;
    if (opt.chains) cfg.sampler.chains = *opt.chains;
    if (opt.out_dir) cfg.output.dir = *opt.out_dir;

    const KernelSet ks = cfg.build_kernel_set();
    RunResult run = run_chains(cfg.sampler, ks);
    const SampleSet& s = run.samples;

    EstimateOutcome out;
    const auto& req = cfg.observables;
    auto push = [&out](EstimatorResult r) { out.records.push_back({std::move(r), "mcmc"}); };

    std::optional<est::GapFit> fit;
    if (wants(req, "correlation") || wants(req, "gap") || wants(req, "resolvent")) {
        const auto corr = est::spin_correlation(s);
        for (std::size_t i = 0; i < corr.size(); i += std::max<std::size_t>(corr.size() / 16, 1)) {
            EstimatorResult r;
            r.name = "spin_correlation(t=" + num(corr[i].lag) + ")";
            r.formula_id = "eq:expectation";
            r.value = corr[i].stat.mean;
            r.stderror = corr[i].stat.stderror;
            r.tau_int = corr[i].stat.tau_int;
            r.n_samples = corr[i].stat.n;
            out.records.push_back({r, "mcmc"});
        }
        try {
            fit = est::gap_fit(corr, req.fit_lo, req.fit_hi);
            EstimatorResult r;
            r.name = "gap";
            r.formula_id = "eq:expectation";
            r.value = fit->gap;
            r.stderror = fit->gap_err;
            r.note = "log-linear fit on [" + num(req.fit_lo) + "," + num(req.fit_hi) +
                     "], r2=" + num(fit->r2);
            out.records.push_back({r, "mcmc"});
        } catch (const FitWindowBad& e) {
            out.meta.warnings.push_back(std::string("gap fit skipped: ") + e.what());
        }
    }

    push(est::spin_mean_symmetrized(s));
    for (const auto& cross : ks.crosses()) {
        const std::string& f = cross.name;
        if (wants(req, "char_fn")) {
            for (double beta : req.betas) push(est::char_fn(s, ks, f, beta));
        }
        if (wants(req, "field_moments")) {
            for (int n : req.field_orders.empty() ? std::vector<int>{1, 2}
                                                  : req.field_orders) {
                push(est::field_moment(s, ks, f, n, Xi::One));
            }
        }
        if (wants(req, "fluctuations")) {
            auto fl = est::fluctuations(s, ks, f);
            push(fl.sigma_phi);
            push(fl.F_alpha);
            push(fl.G_alpha);
        }
        if (wants(req, "gaussian_moment")) {
            for (double frac : req.gaussian_fracs.empty()
                                   ? std::vector<double>{0.5}
                                   : req.gaussian_fracs) {
                push(est::gaussian_moment(s, ks, f, frac / cross.norm_f_sq));
            }
        }
        if (wants(req, "exp_moment")) {
            for (double beta : req.betas) {
                auto em = est::exp_moment(s, ks, f, beta);
                push(em.plain);
                push(em.sigma);
            }
        }
        if (wants(req, "fractional_moment")) {
            for (double so : req.fractional_orders.empty()
                                 ? std::vector<double>{1.0}
                                 : req.fractional_orders) {
                push(est::fractional_moment(s, ks, f, so));
            }
        }
        if (wants(req, "field_function")) {
            // canonical smoothed observable F(x) = exp(-x^2)
            auto r = est::field_function(s, ks, f,
                                         [](double x) { return std::exp(-x * x); });
            r.name = "field_function_gauss(" + f + ")";
            push(std::move(r));
        }
    }
    if (wants(req, "parity")) {
        auto pp = est::parity_pair(s, ks);
        push(pp.number);
        push(pp.spin);
        push(plain("parity_lower_bound", "eq:n3", pp.lower_bound, "a-priori bound"));
    }
    if (wants(req, "number_moments")) {
        for (int m : req.number_moments.empty() ? std::vector<int>{1, 2}
                                                : req.number_moments) {
            push(est::n_moment(s, ks, m));
        }
    }
    if (wants(req, "boson_generating")) {
        for (double beta : req.betas) {
            auto bg = est::boson_generating(s, ks, beta);
            push(bg.real_part);
        }
    }
    if (wants(req, "resolvent") && fit) {
        std::vector<double> grid = req.omega_grid;
        if (grid.empty()) grid = {0.5, 1.0, 2.0};
        auto rr = est::resolvent(s, ks, grid, *fit);
        push(rr.boson_number);
        push(rr.sigma_phi_bound);
        push(plain("n_upper_bound", "eq:ine1", rr.upper_bound, "a-priori bound"));
        if (!rr.chain_holds) {
            out.meta.warnings.push_back(
                "resolvent inequality chain violated beyond 3 sigma");
        }
        for (const auto& row : rr.table) {
            push(plain("resolvent(omega=" + num(row.omega) + ")", "eq:gk", row.R));
        }
    }
    if (cfg.run_energy && wants(req, "energy")) {
        const EnergyResult er = energy(cfg.sampler, ks, cfg.energy);
        EstimatorResult r;
        r.name = "energy";
        r.formula_id = "eq:criter";
        r.value = er.value;
        r.stderror = er.stderror;
        r.systematic = er.systematic;
        r.note = "T-ladder extrapolation; E(T)=" + num(er.e_at_T) +
                 ", E(T/2)=" + num(er.e_at_half_T);
        out.records.push_back({r, "mcmc"});
    }

    if (cfg.oracle.run_ed) {
        for (auto& r : ed_records(cfg)) out.records.push_back(std::move(r));
    }

    // metadata: resolved settings so the output alone reproduces the run
    out.meta.config_fingerprint = cfg.fingerprint;
    out.meta.seed = cfg.sampler.seed;
    out.meta.chains = cfg.sampler.chains;
    auto set = [&](const std::string& k, const std::string& v) {
        out.meta.settings.emplace_back(k, v);
    };
    set("epsilon", num(cfg.sampler.eps));
    set("alpha", num(cfg.sampler.alpha));
    set("bath", describe(cfg.bath));
    set("T", num(cfg.sampler.T));
    set("t_w", num(s.t_w));
    set("t_prime", num(s.t_prime));
    set("lambda_run", num(cfg.sampler.lambda_run));
    set("sweep_moves", std::to_string(cfg.sampler.resolved_sweep_moves()));
    set("burnin_sweeps", std::to_string(cfg.sampler.burnin_sweeps));
    set("measure_sweeps", std::to_string(cfg.sampler.measure_sweeps));
    set("shift_width", num(cfg.sampler.shift_width));
    set("pair_width", num(cfg.sampler.pair_width));
    set("n_probe", std::to_string(cfg.sampler.n_probe));
    {
        std::string mp = "[";
        for (int i = 0; i < 6; ++i) {
            if (i) mp += ",";
            mp += num(cfg.sampler.move_prob[static_cast<std::size_t>(i)]);
        }
        set("move_prob", mp + "]");
    }
    for (const auto& w : run.warnings) out.meta.warnings.push_back(w);
    double acc_min = 1.0;
    for (std::size_t c = 0; c < run.chains.size(); ++c) {
        const auto& d = run.chains[c];
        for (int m = 0; m < 6; ++m) {
            if (cfg.sampler.move_prob[static_cast<std::size_t>(m)] > 0.0 &&
                m != static_cast<int>(Move::GlobalFlip)) {
                acc_min = std::min(acc_min, d.acceptance(static_cast<Move>(m)));
            }
        }
        out.meta.diagnostics.emplace_back("chain" + std::to_string(c) + ".action_tau",
                                          d.action_tau);
        out.meta.diagnostics.emplace_back(
            "chain" + std::to_string(c) + ".max_cache_drift", d.max_cache_drift);
    }
    out.meta.diagnostics.emplace_back("min_acceptance", acc_min);

    const std::string json = results_json(out.meta, out.records);
    const std::string err = validate_against_schema(json, results_schema());
    if (!err.empty()) {
        throw std::runtime_error("results payload failed schema validation: " + err);
    }
    out.json_path = cfg.output.dir + "/results.json";
    out.csv_path = cfg.output.dir + "/results.csv";
    if (cfg.output.write_json) write_text_file(out.json_path, json);
    if (cfg.output.write_csv) write_text_file(out.csv_path, results_csv(out.records));
    if (cfg.output.dump_samples) {
        write_text_file(cfg.output.dir + "/samples.csv", samples_csv(s));
    }
    if (opt.strict && !out.meta.warnings.empty()) out.exit_code = 3;
    return out;
}

std::vector<Check> run_validate(const std::string& level) {
    std::vector<Check> checks;
    auto add = [&checks](const std::string& name, bool pass, const std::string& detail) {
        checks.push_back({name, pass, detail});
    };

    // kernel closed forms against adaptive quadrature
    {
        const SpectralDensity bath = PowerLawExpCutoff{1.0, 2.0, 1.0};
        const KernelSet ks = build_kernels(bath);
        double worst = 0.0;
        for (double t : {0.0, 0.3, 1.0, 2.5, 7.0}) {
            auto f = [t](double w) { return 0.5 * w * w * std::exp(-w * (1.0 + t)); };
            const double ref = quad::integrate_to_inf(f, 0.0).value;
            worst = std::max(worst, std::abs(ks.w_amp(t) - ref) / ref);
        }
        add("kernel.w_amp_quadrature", worst < 1e-8, "rel err " + num(worst));
        const double u2ref = 2.0 / 3.0;
        add("kernel.u2_closed_form", std::abs(ks.u2(2.0) - u2ref) < 1e-12,
            "u2(2) = " + num(ks.u2(2.0)));
        const double qb = 0.5 * ks.norm_h_over_omega_sq();
        add("kernel.quadrant_constant", std::abs(ks.tail_u_w(0.0) - qb) < 1e-10,
            "int u w = " + num(ks.tail_u_w(0.0)));
    }

    // pair action against 2-D quadrature on random paths
    {
        const SpectralDensity bath = PowerLawExpCutoff{1.0, 2.0, 1.0};
        const KernelSet ks = build_kernels(bath);
        Rng rng(42, 0);
        double worst = 0.0;
        const int npaths = (level == "full") ? 40 : 8;
        for (int it = 0; it < npaths; ++it) {
            SpinPath p;
            p.T = 2.0;
            p.v = rng.coin() ? 1 : -1;
            const int n = static_cast<int>(rng.below(8));
            for (int i = 0; i < n; ++i) p.jumps.push_back(rng.uniform(-p.T, p.T));
            std::sort(p.jumps.begin(), p.jumps.end());
            p.jumps.erase(std::unique(p.jumps.begin(), p.jumps.end()), p.jumps.end());
            const double a = pair_action(p, ks);
            double ref = 0.0;
            const auto segs = p.segments();
            for (const auto& si : segs) {
                for (const auto& sj : segs) {
                    ref += si.s * sj.s *
                           quad::integrate_2d(
                               [&ks](double t, double ss) { return ks.w_amp(t - ss); },
                               si.a, si.b, sj.a, sj.b, 1e-12, 1e-10)
                               .value;
                }
            }
            worst = std::max(worst, std::abs(a - ref) / std::max(1.0, std::abs(ref)));
        }
        add("path.action_quadrature", worst < 1e-7, "rel err " + num(worst));
    }

    // discretized stationarity
    {
        const SpectralDensity bath = PowerLawExpCutoff{1.0, 2.0, 1.0};
        const KernelSet ks = build_kernels(bath);
        const int slots = (level == "full") ? 10 : 8;
        DiscretizedSystem sys(2.0, 1.0, 0.125, slots,
                              [&ks](double t) { return ks.w_amp(t); });
        GridSampler gs(sys);
        const double rowres = gs.row_sum_residual();
        const double res = gs.stationarity_residual();
        add("sampler.row_stochastic", rowres < 1e-12, "residual " + num(rowres));
        add("sampler.stationarity", res < 1e-10, "pi P - pi residual " + num(res));
    }

    // Stirling coefficients: alternating sum vs recurrence
    {
        bool ok = true;
        for (int m = 1; m <= 20 && ok; ++m) {
            for (int r = 1; r <= m && ok; ++r) {
                ok = stirling2(m, r) == stirling2_recurrence(m, r);
            }
        }
        add("special.stirling_consistency", ok, "m <= 20");
    }

    if (level == "full") {
        // small ED cross check at the exactly solvable decoupled point
        TruncatedModel model;
        model.eps = 1e-8;
        model.alpha = 0.4;
        model.modes = {{1.0, 1.0}};
        model.n_max = 40;
        const auto gs2 = ground_state(model);
        const double ref = -0.5 * model.alpha * model.alpha;  // -alpha^2 g^2/(2w)
        add("oracle.decoupled_shift", std::abs(gs2.energy - ref) < 1e-6,
            "E0 = " + num(gs2.energy) + " vs " + num(ref));

        // free-theory jump count
        McmcConfig cfg;
        cfg.T = 4.0;
        cfg.eps = 1.0;
        cfg.alpha = 0.0;
        cfg.lambda_run = 0.0;
        cfg.burnin_sweeps = 200;
        cfg.measure_sweeps = 4000;
        cfg.seed = 11;
        const KernelSet ks = build_kernels(SpectralDensity{DiscreteModes{{{1.0, 1.0}}}});
        auto run = run_chains(cfg, ks);
        std::vector<double> njumps(run.samples.size());
        for (std::size_t i = 0; i < njumps.size(); ++i) {
            njumps[i] = run.samples.njumps[i];
        }
        const auto sum = stats::summarize_chains(njumps, run.samples.chain_edges);
        const double expect = 2.0 * cfg.T * cfg.eps;
        const bool pass = std::abs(sum.mean - expect) < 4.0 * sum.stderror + 0.05;
        add("sampler.free_jump_count", pass,
            "<n> = " + num(sum.mean) + " +- " + num(sum.stderror) + " vs " + num(expect));
    }
    return checks;
}

std::string run_sweep(RunConfig cfg, const std::string& axis,
                      const std::vector<double>& values, const CliOverrides& opt) {
    std::string csv = "axis_value,name,value,stderr,systematic\n";
    for (double v : values) {
        RunConfig point = cfg;
        if (axis == "T") {
            point.sampler.T = v;
        } else if (axis == "alpha") {
            point.sampler.alpha = v;
            point.sampler.lambda_run = 0.5 * v * v;
        } else if (axis == "eps") {
            point.sampler.eps = v;
        } else if (axis == "beta") {
            point.observables.gaussian_fracs = {v};
        } else {
            throw ConfigError("sweep: unknown axis '" + axis +
                              "' (expected T, alpha, eps or beta)");
        }
        CliOverrides o = opt;
        o.out_dir = (opt.out_dir ? *opt.out_dir : cfg.output.dir) + "/" + axis + "_" + num(v);
        const auto outcome = run_estimate(point, o);
        for (const auto& r : outcome.records) {
            csv += num(v) + "," + r.est.name + "," + num(r.est.value) + "," +
                   num(r.est.stderror) + "," + num(r.est.systematic) + "\n";
        }
    }
    return csv;
}

std::vector<ResultRecord> run_oracle(const RunConfig& cfg) {
    std::vector<ResultRecord> out;
    if (std::holds_alternative<DiscreteModes>(cfg.bath)) {
        for (auto& r : ed_records(cfg)) out.push_back(std::move(r));
    }
    const KernelSet ks = cfg.build_kernel_set();
    for (const auto& cross : ks.crosses()) {
        for (double beta : cfg.observables.betas) {
            out.push_back({plain("van_hove_char_fn(" + cross.name + ",beta=" +
                                     std::to_string(beta) + ")",
                                 "eq:vh7",
                                 van_hove::char_fn(beta, cfg.sampler.alpha, cross),
                                 "decoupled closed form"),
                           "oracle"});
        }
    }
    if (cfg.oracle.brute_slots > 0) {
        DiscretizedSystem sys(cfg.sampler.T, cfg.sampler.eps,
                              cfg.sampler.lambda_run, cfg.oracle.brute_slots,
                              [&ks](double t) { return ks.w_amp(t); });
        const auto marg = sys.exact_marginals();
        out.push_back({plain("brute_force_mean_jumps", "eq:measure", marg.mean_jumps), "oracle"});
        out.push_back({plain("brute_force_mean_action", "eq:measure", marg.mean_action), "oracle"});
        out.push_back({plain("brute_force_log_z", "eq:measure", marg.log_z), "oracle"});
    }
    return out;
}

}  // namespace sbmc

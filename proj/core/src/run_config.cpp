#include "sbmc/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sbmc {

namespace {

SpectralDensity parse_density(toml::Document& doc, const std::string& prefix) {
    const std::string type = doc.take(prefix + ".type").as_string();
    if (type == "power_law") {
        PowerLawExpCutoff p;
        p.amplitude = doc.take(prefix + ".amplitude").as_number();
        p.exponent = doc.take(prefix + ".exponent").as_number();
        p.cutoff = doc.take(prefix + ".cutoff").as_number();
        return p;
    }
    if (type == "discrete") {
        DiscreteModes d;
        const auto gs = doc.take(prefix + ".couplings").as_number_array();
        const auto ws = doc.take(prefix + ".frequencies").as_number_array();
        if (gs.size() != ws.size()) {
            doc.fail(prefix + ".couplings", "couplings and frequencies must have equal length");
        }
        for (std::size_t i = 0; i < gs.size(); ++i) d.modes.push_back({gs[i], ws[i]});
        return d;
    }
    if (type == "tabulated") {
        const std::string file = doc.take(prefix + ".file").as_string();
        return load_tabulated_csv(file);
    }
    doc.fail(prefix + ".type", "unknown density type '" + type +
                                   "' (expected power_law, discrete or tabulated)");
}

std::vector<int> as_int_array(const toml::Value& v) {
    std::vector<int> out;
    for (double x : v.as_number_array()) out.push_back(static_cast<int>(std::lround(x)));
    return out;
}

}  // namespace

KernelSet RunConfig::build_kernel_set() const {
    std::vector<TestOverlap> overlaps;
    for (const auto& tf : test_functions) {
        if (tf.kind == "h") {
            auto ov = overlap_f_equals_h(bath);
            ov.name = tf.name;
            overlaps.push_back(std::move(ov));
        } else if (tf.kind == "h_over_omega") {
            auto ov = overlap_f_equals_h_over_omega(bath);
            ov.name = tf.name;
            overlaps.push_back(std::move(ov));
        } else {
            overlaps.push_back(TestOverlap{tf.name, *tf.rho_hf, *tf.rho_ff});
        }
    }
    return build_kernels(bath, overlaps);
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    toml::Document doc = toml::Document::parse(text, origin);
    RunConfig rc;
    rc.fingerprint = toml::fingerprint(doc);

    // model
    if (!doc.has("model.bath.type")) {
        throw ConfigError(origin + ": missing bath specification (model.bath.type)");
    }
    rc.sampler.eps = doc.take("model.epsilon").as_number();
    rc.sampler.alpha = doc.take("model.alpha").as_number();
    rc.bath = parse_density(doc, "model.bath");
    try {
        validate_bath(rc.bath);
    } catch (const SpectralDensityError& e) {
        throw ConfigError(origin + ": model.bath: " + e.what());
    }
    if (!(rc.sampler.eps > 0.0)) doc.fail("model.epsilon", "epsilon must be > 0");

    // test functions: named subtables under model.test_functions
    for (const auto& key : doc.keys_with_prefix("model.test_functions.")) {
        const auto rest = key.substr(std::string("model.test_functions.").size());
        const auto dot = rest.find('.');
        const std::string name = rest.substr(0, dot);
        bool known = false;
        for (const auto& tf : rc.test_functions) known |= (tf.name == name);
        if (known) continue;
        TestFunctionSpec tf;
        tf.name = name;
        const std::string base = "model.test_functions." + name;
        tf.kind = doc.take(base + ".kind").as_string();
        if (tf.kind == "custom") {
            tf.rho_hf = parse_density(doc, base + ".rho_hf");
            tf.rho_ff = parse_density(doc, base + ".rho_ff");
        } else if (tf.kind != "h" && tf.kind != "h_over_omega") {
            doc.fail(base + ".kind", "unknown test-function kind '" + tf.kind + "'");
        }
        rc.test_functions.push_back(std::move(tf));
    }
    if (rc.test_functions.empty()) {
        rc.test_functions.push_back({"h", "h", {}, {}});
        rc.test_functions.push_back({"h_over_omega", "h_over_omega", {}, {}});
    }

    // sampler
    auto& mc = rc.sampler;
    mc.T = doc.take("sampler.T").as_number();
    mc.lambda_run = 0.5 * mc.alpha * mc.alpha;
    if (doc.take_has("sampler.move_prob")) {
        const auto probs = doc.at("sampler.move_prob").as_number_array();
        if (probs.size() != 6) doc.fail("sampler.move_prob", "expected 6 probabilities");
        for (int i = 0; i < 6; ++i) mc.move_prob[static_cast<std::size_t>(i)] = probs[static_cast<std::size_t>(i)];
    }
    mc.shift_width = doc.number_or("sampler.shift_width", mc.shift_width);
    doc.take_has("sampler.shift_width");
    mc.pair_width = doc.number_or("sampler.pair_width", mc.pair_width);
    doc.take_has("sampler.pair_width");
    mc.sweep_moves = static_cast<int>(doc.number_or("sampler.sweep_moves", 0));
    doc.take_has("sampler.sweep_moves");
    mc.burnin_sweeps = static_cast<long>(doc.number_or("sampler.burnin_sweeps", 2000));
    doc.take_has("sampler.burnin_sweeps");
    mc.measure_sweeps = static_cast<long>(doc.number_or("sampler.measure_sweeps", 20000));
    doc.take_has("sampler.measure_sweeps");
    mc.chains = static_cast<int>(doc.number_or("sampler.chains", 2));
    doc.take_has("sampler.chains");
    mc.seed = static_cast<std::uint64_t>(doc.number_or("seed", 1));
    doc.take_has("seed");
    mc.n_probe = static_cast<int>(doc.number_or("estimators.n_probe", 81));
    doc.take_has("estimators.n_probe");

    // estimator window and truncation
    mc.t_w = doc.number_or("estimators.window", 0.0);
    doc.take_has("estimators.window");
    mc.t_prime = doc.number_or("estimators.truncation", 0.0);
    doc.take_has("estimators.truncation");

    try {
        mc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin + ": sampler: " + e.what());
    }

    // window constraint t_w <= T - margin with margin = 5 / omega_typ
    {
        const double m1 = moment(rc.bath, 1);
        const double m2 = moment(rc.bath, 2);
        const double omega_typ = m1 / m2;
        const double margin = doc.number_or("estimators.margin", 5.0 / omega_typ);
        doc.take_has("estimators.margin");
        if (mc.t_w > 0.0 && mc.t_w > mc.T - margin + 1e-12) {
            doc.fail("estimators.window",
                     "window must satisfy t_w <= T - margin (margin " +
                         std::to_string(margin) + ")");
        }
    }

    // observables
    auto& obs = rc.observables;
    if (doc.take_has("estimators.observables")) {
        obs.names = doc.at("estimators.observables").as_string_array();
    }
    if (doc.take_has("estimators.betas")) obs.betas = doc.at("estimators.betas").as_number_array();
    if (doc.take_has("estimators.gaussian_fracs")) {
        obs.gaussian_fracs = doc.at("estimators.gaussian_fracs").as_number_array();
        for (double frac : obs.gaussian_fracs) {
            if (!(frac < 1.0)) {
                doc.fail("estimators.gaussian_fracs",
                         "gaussian moment requires beta < 1/||f||^2 (fractions must be < 1)");
            }
        }
    }
    if (doc.take_has("estimators.fractional_orders")) {
        obs.fractional_orders = doc.at("estimators.fractional_orders").as_number_array();
        for (double s : obs.fractional_orders) {
            if (!(s > 0.0 && s < 2.0)) {
                doc.fail("estimators.fractional_orders", "orders must lie in (0,2)");
            }
        }
    }
    if (doc.take_has("estimators.number_moments")) {
        obs.number_moments = as_int_array(doc.at("estimators.number_moments"));
    }
    if (doc.take_has("estimators.field_orders")) {
        obs.field_orders = as_int_array(doc.at("estimators.field_orders"));
    }
    if (doc.take_has("estimators.omega_grid")) {
        obs.omega_grid = doc.at("estimators.omega_grid").as_number_array();
    }
    obs.fit_lo = doc.number_or("estimators.fit_lo", obs.fit_lo);
    doc.take_has("estimators.fit_lo");
    obs.fit_hi = doc.number_or("estimators.fit_hi", obs.fit_hi);
    doc.take_has("estimators.fit_hi");

    // energy ladder
    rc.run_energy = doc.bool_or("energy.enabled", false);
    doc.take_has("energy.enabled");
    rc.energy.nodes = static_cast<int>(doc.number_or("energy.nodes", 7));
    doc.take_has("energy.nodes");
    if (rc.energy.nodes < 5) doc.fail("energy.nodes", "the coupling ladder needs at least 5 nodes");
    rc.energy.burnin_sweeps = static_cast<long>(doc.number_or("energy.burnin_sweeps", 500));
    doc.take_has("energy.burnin_sweeps");
    rc.energy.measure_sweeps = static_cast<long>(doc.number_or("energy.measure_sweeps", 6000));
    doc.take_has("energy.measure_sweeps");
    rc.energy.richardson = doc.bool_or("energy.richardson", true);
    doc.take_has("energy.richardson");

    // oracle
    rc.oracle.run_ed = doc.bool_or("oracle.ed", false);
    doc.take_has("oracle.ed");
    rc.oracle.n_max = static_cast<int>(doc.number_or("oracle.n_max", 30));
    doc.take_has("oracle.n_max");
    rc.oracle.brute_slots = static_cast<int>(doc.number_or("oracle.brute_slots", 0));
    doc.take_has("oracle.brute_slots");
    if (rc.oracle.run_ed && !std::holds_alternative<DiscreteModes>(rc.bath)) {
        doc.fail("oracle.ed", "exact diagonalization requires a discrete-mode bath");
    }

    // output
    rc.output.dir = doc.string_or("output.dir", "out");
    doc.take_has("output.dir");
    rc.output.write_json = doc.bool_or("output.json", true);
    doc.take_has("output.json");
    rc.output.write_csv = doc.bool_or("output.csv", true);
    doc.take_has("output.csv");
    rc.output.dump_samples = doc.bool_or("output.dump_samples", false);
    doc.take_has("output.dump_samples");

    doc.expect_consumed();
    rc.raw = std::move(doc);
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_run_config(os.str(), path);
}

}  // namespace sbmc

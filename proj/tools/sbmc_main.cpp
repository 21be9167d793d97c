// sbmc: continuous-time path sampler and observable estimator for a two-level
// system coupled to a boson bath, plus its validation oracles.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sbmc/driver.hpp"

namespace {

int cmd_estimate(const std::string& cfg_path, const sbmc::CliOverrides& opt) {
    sbmc::RunConfig cfg = sbmc::load_run_config(cfg_path);
    const auto outcome = sbmc::run_estimate(cfg, opt);
    std::printf("%-44s %14s %12s %12s\n", "observable", "value", "stderr", "systematic");
    for (const auto& r : outcome.records) {
        std::printf("%-44s %14.8g %12.3g %12.3g  [%s]\n", r.est.name.c_str(),
                    r.est.value, r.est.stderror, r.est.systematic,
                    r.source.c_str());
    }
    for (const auto& w : outcome.meta.warnings) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    std::printf("results: %s\n", outcome.json_path.c_str());
    return outcome.exit_code;
}

int cmd_validate(const std::string& level) {
    const auto checks = sbmc::run_validate(level);
    bool all = true;
    for (const auto& c : checks) {
        std::printf("[%s] %-32s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%zu checks, %s\n", checks.size(), all ? "all passed" : "FAILURES");
    return all ? 0 : 1;
}

int cmd_sweep(const std::string& cfg_path, const std::string& axis,
              std::vector<double> values, const sbmc::CliOverrides& opt) {
    sbmc::RunConfig cfg = sbmc::load_run_config(cfg_path);
    if (values.empty()) {
        const std::string key = "sweep." + axis;
        if (cfg.raw.has(key)) {
            values = cfg.raw.at(key).as_number_array();
        } else if (axis == "beta") {
            values = {0.5, 0.8, 0.9, 0.95};
        } else {
            throw sbmc::ConfigError("sweep: provide --values or a [sweep] " + axis +
                                    " array in the config");
        }
    }
    const std::string csv = sbmc::run_sweep(cfg, axis, values, opt);
    const std::string dir = opt.out_dir ? *opt.out_dir : cfg.output.dir;
    const std::string path = dir + "/sweep_" + axis + ".csv";
    sbmc::write_text_file(path, csv);
    std::printf("%s", csv.c_str());
    std::printf("sweep table: %s\n", path.c_str());
    return 0;
}

int cmd_oracle(const std::string& cfg_path, const sbmc::CliOverrides& opt) {
    sbmc::RunConfig cfg = sbmc::load_run_config(cfg_path);
    cfg.oracle.run_ed = std::holds_alternative<sbmc::DiscreteModes>(cfg.bath);
    const auto records = sbmc::run_oracle(cfg);
    std::printf("%-44s %14s\n", "observable", "value");
    for (const auto& r : records) {
        std::printf("%-44s %14.10g  %s\n", r.est.name.c_str(), r.est.value,
                    r.est.note.c_str());
    }
    sbmc::RunMetadata meta;
    meta.config_fingerprint = cfg.fingerprint;
    meta.seed = cfg.sampler.seed;
    meta.chains = cfg.sampler.chains;
    const std::string dir = opt.out_dir ? *opt.out_dir : cfg.output.dir;
    sbmc::write_text_file(dir + "/oracle.json",
                          sbmc::results_json(meta, records));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuous-time jump-path sampler for a two-level system in a boson bath"};
    app.require_subcommand(1);

    sbmc::CliOverrides opt;
    std::uint64_t seed_flag = 0;
    int chains_flag = 0;
    std::string out_flag;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed_flag, "override the configured RNG seed");
        sub->add_option("--chains", chains_flag, "override the configured chain count");
        sub->add_option("--out", out_flag, "override the output directory");
        sub->add_flag("--strict", opt.strict,
                      "exit nonzero when the run raises warnings");
    };

    std::string cfg_path, axis, level = "quick";
    std::vector<double> values;

    CLI::App* estimate = app.add_subcommand("estimate", "run chains and evaluate observables");
    estimate->add_option("config", cfg_path, "run configuration file")->required();
    add_common(estimate);

    CLI::App* validate = app.add_subcommand("validate", "run the built-in invariant suites");
    validate->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));

    CLI::App* sweep = app.add_subcommand("sweep", "repeat the estimate along a parameter ladder");
    sweep->add_option("config", cfg_path, "run configuration file")->required();
    sweep->add_option("--axis", axis, "T, alpha, eps or beta")->required();
    sweep->add_option("--values", values, "ladder values (else from the config)");
    add_common(sweep);

    CLI::App* oracle = app.add_subcommand("oracle", "standalone oracle computations");
    oracle->add_option("config", cfg_path, "run configuration file")->required();
    add_common(oracle);

    CLI11_PARSE(app, argc, argv);

    auto fill = [&]() {
        if (seed_flag != 0) opt.seed = seed_flag;
        if (chains_flag != 0) opt.chains = chains_flag;
        if (!out_flag.empty()) opt.out_dir = out_flag;
    };

    try {
        fill();
        if (estimate->parsed()) return cmd_estimate(cfg_path, opt);
        if (validate->parsed()) return cmd_validate(level);
        if (sweep->parsed()) return cmd_sweep(cfg_path, axis, values, opt);
        if (oracle->parsed()) return cmd_oracle(cfg_path, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

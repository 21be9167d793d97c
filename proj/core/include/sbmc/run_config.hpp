#ifndef SBMC_RUN_CONFIG_HPP
#define SBMC_RUN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "sbmc/energy.hpp"
#include "sbmc/kernels.hpp"
#include "sbmc/sampler.hpp"
#include "sbmc/toml.hpp"

namespace sbmc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TestFunctionSpec {
    std::string name;
    std::string kind;  // "h", "h_over_omega" or "custom"
    std::optional<SpectralDensity> rho_hf;
    std::optional<SpectralDensity> rho_ff;
};

struct ObservableRequest {
    std::vector<std::string> names;       // which estimator families to run
    std::vector<double> betas;            // char_fn / exp_moment
    std::vector<double> gaussian_fracs;   // gaussian_moment, fractions of 1/||f||^2
    std::vector<double> fractional_orders;
    std::vector<int> number_moments;      // m
    std::vector<int> field_orders;        // n
    std::vector<double> omega_grid;       // resolvent table
    double fit_lo = 0.25;
    double fit_hi = 2.0;
};

struct OracleBlock {
    bool run_ed = false;
    int n_max = 30;
    int brute_slots = 0;  // 0: skip brute force
};

struct OutputBlock {
    std::string dir = "out";
    bool write_json = true;
    bool write_csv = true;
    bool dump_samples = false;
};

struct RunConfig {
    SpectralDensity bath;
    std::vector<TestFunctionSpec> test_functions;
    McmcConfig sampler;
    ObservableRequest observables;
    EnergyOptions energy;
    bool run_energy = false;
    OracleBlock oracle;
    OutputBlock output;
    std::string fingerprint;
    toml::Document raw;

    KernelSet build_kernel_set() const;
};

// Parses and validates; unknown keys and constraint violations are reported
// with their source location.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin);

}  // namespace sbmc

#endif

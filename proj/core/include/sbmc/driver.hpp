#ifndef SBMC_DRIVER_HPP
#define SBMC_DRIVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "sbmc/output.hpp"
#include "sbmc/run_config.hpp"

namespace sbmc {

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> chains;
    std::optional<std::string> out_dir;
    bool strict = false;
};

struct EstimateOutcome {
    std::vector<ResultRecord> records;
    RunMetadata meta;
    std::string json_path;
    std::string csv_path;
    int exit_code = 0;
};

// runs chains, evaluates the requested estimators (all of them when the
// config lists none), optionally the oracle comparison, and writes outputs
EstimateOutcome run_estimate(RunConfig cfg, const CliOverrides& opt);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

// module invariant suites; quick keeps everything under a few seconds
std::vector<Check> run_validate(const std::string& level);

// repeats the estimate along a parameter ladder; returns the table as CSV
std::string run_sweep(RunConfig cfg, const std::string& axis,
                      const std::vector<double>& values, const CliOverrides& opt);

// standalone oracle computations (ED, brute force, decoupled closed forms)
std::vector<ResultRecord> run_oracle(const RunConfig& cfg);

}  // namespace sbmc

#endif

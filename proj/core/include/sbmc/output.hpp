#ifndef SBMC_OUTPUT_HPP
#define SBMC_OUTPUT_HPP

#include <string>
#include <vector>

#include "sbmc/estimators.hpp"
#include "sbmc/sampler.hpp"

namespace sbmc {

struct ResultRecord {
    EstimatorResult est;
    std::string source = "mcmc";  // or "oracle"
};

struct RunMetadata {
    std::string config_fingerprint;
    std::uint64_t seed = 0;
    int chains = 1;
    std::vector<std::pair<std::string, std::string>> settings;  // resolved
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> diagnostics;
};

// deterministic serialization: a fixed seed and config reproduce these bytes
std::string results_json(const RunMetadata& meta,
                         const std::vector<ResultRecord>& records);
std::string results_csv(const std::vector<ResultRecord>& records);

// one record per measurement sweep; column order is stable and documented in
// the header row
std::string samples_csv(const SampleSet& s);

// shipped schema for the results payload
const std::string& results_schema();

// minimal structural validator for the schema subset in use; returns an
// empty string on success, else the first violation
std::string validate_against_schema(const std::string& json_text,
                                    const std::string& schema_text);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sbmc

#endif

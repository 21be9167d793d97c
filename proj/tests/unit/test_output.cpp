#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sbmc/output.hpp"

using namespace sbmc;

namespace {

RunMetadata meta_fixture() {
    RunMetadata m;
    m.config_fingerprint = "00ff00ff00ff00ff";
    m.seed = 42;
    m.chains = 2;
    m.settings = {{"epsilon", "1"}, {"alpha", "0.3"}};
    m.diagnostics = {{"min_acceptance", 0.41}};
    return m;
}

std::vector<ResultRecord> records_fixture() {
    EstimatorResult r;
    r.name = "parity_number";
    r.formula_id = "eq:n1";
    r.value = 0.9;
    r.stderror = 0.01;
    r.tau_int = 2.5;
    r.n_samples = 1000;
    r.systematic = 1e-4;
    return {{r, "mcmc"}};
}

}  // namespace

TEST_SUITE("output") {

TEST_CASE("results payload validates against the shipped schema") {
    const std::string json = results_json(meta_fixture(), records_fixture());
    CHECK(validate_against_schema(json, results_schema()).empty());
}

TEST_CASE("schema catches malformed payloads") {
    CHECK(validate_against_schema("{}", results_schema()).find("missing required") !=
          std::string::npos);
    CHECK(validate_against_schema("{not json", results_schema()) ==
          "payload: invalid JSON");
    // a result entry missing its value
    std::string json = results_json(meta_fixture(), records_fixture());
    const auto pos = json.find("\"value\"");
    json.replace(pos, 7, "\"velue\"");
    CHECK(!validate_against_schema(json, results_schema()).empty());
}

TEST_CASE("shipped schema file matches the embedded schema") {
    std::ifstream in(std::string(SBMC_REPO_DIR) + "/schema/results.schema.json");
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    CHECK(os.str() == results_schema());
}

TEST_CASE("serialization is deterministic") {
    const std::string a = results_json(meta_fixture(), records_fixture());
    const std::string b = results_json(meta_fixture(), records_fixture());
    CHECK(a == b);
    CHECK(results_csv(records_fixture()) == results_csv(records_fixture()));
}

TEST_CASE("csv column order is stable") {
    const std::string csv = results_csv(records_fixture());
    CHECK(csv.rfind("name,formula_id,value,stderr,tau_int,n_samples,systematic,source\n",
                    0) == 0);
    CHECK(csv.find("parity_number,eq:n1,") != std::string::npos);
}

TEST_CASE("sample dump columns") {
    SampleSet s;
    s.cross_names = {"h"};
    s.k_vals.resize(1);
    s.probe_times = {-1.0, 0.0, 1.0};
    s.action = {2.0};
    s.w_quad = {0.25};
    s.njumps = {3};
    s.y0 = {1};
    s.k_vals[0] = {-0.125};
    s.probes = {1, -1, 1};
    s.chain_edges = {0, 1};
    const std::string csv = samples_csv(s);
    CHECK(csv.rfind("sweep,action,njumps,y0,w_quad,K_h,y_t-1,y_t0,y_t1\n", 0) == 0);
    CHECK(csv.find("0,2,3,1,0.25,-0.125,1,-1,1\n") != std::string::npos);
}

}  // TEST_SUITE

#include "sbmc/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "sbmc/rng.hpp"

namespace sbmc {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

ordered_json record_json(const ResultRecord& r) {
    ordered_json j;
    j["name"] = r.est.name;
    j["formula_id"] = r.est.formula_id;
    j["value"] = r.est.value;
    j["stderr"] = r.est.stderror;
    j["tau_int"] = r.est.tau_int;
    j["n_samples"] = r.est.n_samples;
    j["systematic"] = r.est.systematic;
    j["source"] = r.source;
    if (!r.est.note.empty()) j["note"] = r.est.note;
    return j;
}

}  // namespace

std::string results_json(const RunMetadata& meta,
                         const std::vector<ResultRecord>& records) {
    ordered_json j;
    j["schema"] = "sbmc-results-1";
    j["config_fingerprint"] = meta.config_fingerprint;
    j["rng"] = {{"algorithm", kRngAlgorithm},
                {"version", kRngVersion},
                {"seed", meta.seed},
                {"chains", meta.chains}};
    ordered_json settings = ordered_json::object();
    for (const auto& [k, v] : meta.settings) settings[k] = v;
    j["settings"] = settings;
    ordered_json results = ordered_json::array();
    for (const auto& r : records) results.push_back(record_json(r));
    j["results"] = results;
    ordered_json diag = ordered_json::object();
    for (const auto& [k, v] : meta.diagnostics) diag[k] = v;
    j["diagnostics"] = diag;
    j["warnings"] = meta.warnings;
    return j.dump(2) + "\n";
}

std::string results_csv(const std::vector<ResultRecord>& records) {
    std::string out =
        "name,formula_id,value,stderr,tau_int,n_samples,systematic,source\n";
    for (const auto& r : records) {
        out += r.est.name + "," + r.est.formula_id + "," + num(r.est.value) + "," +
               num(r.est.stderror) + "," + num(r.est.tau_int) + "," +
               std::to_string(r.est.n_samples) + "," + num(r.est.systematic) +
               "," + r.source + "\n";
    }
    return out;
}

std::string samples_csv(const SampleSet& s) {
    std::string header = "sweep,action,njumps,y0,w_quad";
    for (const auto& name : s.cross_names) header += ",K_" + name;
    for (std::size_t j = 0; j < s.n_probe(); ++j) {
        header += ",y_t" + num(s.probe_times[j]);
    }
    std::string out = header + "\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += std::to_string(i) + "," + num(s.action[i]) + "," +
               std::to_string(s.njumps[i]) + "," + std::to_string(s.y0[i]) +
               "," + num(s.w_quad[i]);
        for (const auto& kv : s.k_vals) out += "," + num(kv[i]);
        for (std::size_t j = 0; j < s.n_probe(); ++j) {
            out += "," + std::to_string(static_cast<int>(s.probe(i, j)));
        }
        out += "\n";
    }
    return out;
}

const std::string& results_schema() {
    static const std::string schema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "sbmc results payload",
  "type": "object",
  "required": ["schema", "config_fingerprint", "rng", "settings", "results", "diagnostics", "warnings"],
  "additionalProperties": false,
  "properties": {
    "schema": {"type": "string"},
    "config_fingerprint": {"type": "string"},
    "rng": {
      "type": "object",
      "required": ["algorithm", "version", "seed", "chains"],
      "additionalProperties": false,
      "properties": {
        "algorithm": {"type": "string"},
        "version": {"type": "string"},
        "seed": {"type": "number"},
        "chains": {"type": "number"}
      }
    },
    "settings": {"type": "object"},
    "results": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "formula_id", "value", "stderr", "tau_int", "n_samples", "systematic", "source"],
        "additionalProperties": true,
        "properties": {
          "name": {"type": "string"},
          "formula_id": {"type": "string"},
          "value": {"type": "number"},
          "stderr": {"type": "number"},
          "tau_int": {"type": "number"},
          "n_samples": {"type": "number"},
          "systematic": {"type": "number"},
          "source": {"type": "string"},
          "note": {"type": "string"}
        }
      }
    },
    "diagnostics": {"type": "object"},
    "warnings": {"type": "array", "items": {"type": "string"}}
  }
}
)";
    return schema;
}

namespace {

std::string check_node(const json& data, const json& schema, const std::string& where) {
    const std::string type = schema.value("type", "");
    if (type == "object") {
        if (!data.is_object()) return where + ": expected object";
        if (schema.contains("required")) {
            for (const auto& req : schema["required"]) {
                if (!data.contains(req.get<std::string>())) {
                    return where + ": missing required property '" +
                           req.get<std::string>() + "'";
                }
            }
        }
        const bool extra_ok = !schema.contains("additionalProperties") ||
                              schema["additionalProperties"].is_object() ||
                              schema["additionalProperties"].get<bool>();
        for (auto it = data.begin(); it != data.end(); ++it) {
            if (schema.contains("properties") && schema["properties"].contains(it.key())) {
                const std::string err = check_node(
                    it.value(), schema["properties"][it.key()], where + "." + it.key());
                if (!err.empty()) return err;
            } else if (!extra_ok) {
                return where + ": unexpected property '" + it.key() + "'";
            }
        }
        return "";
    }
    if (type == "array") {
        if (!data.is_array()) return where + ": expected array";
        if (schema.contains("items")) {
            int idx = 0;
            for (const auto& item : data) {
                const std::string err = check_node(
                    item, schema["items"], where + "[" + std::to_string(idx) + "]");
                if (!err.empty()) return err;
                ++idx;
            }
        }
        return "";
    }
    if (type == "string") return data.is_string() ? "" : where + ": expected string";
    if (type == "number") {
        return data.is_number() ? "" : where + ": expected number";
    }
    if (type == "boolean") return data.is_boolean() ? "" : where + ": expected boolean";
    return "";
}

}  // namespace

std::string validate_against_schema(const std::string& json_text,
                                    const std::string& schema_text) {
    json data = json::parse(json_text, nullptr, false);
    if (data.is_discarded()) return "payload: invalid JSON";
    json schema = json::parse(schema_text, nullptr, false);
    if (schema.is_discarded()) return "schema: invalid JSON";
    return check_node(data, schema, "$");
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace sbmc

#ifndef SBMC_TOML_HPP
#define SBMC_TOML_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sbmc::toml {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// UTF-8 key-value subset: [table.subtable] headers, `key = value` lines,
// values are strings, numbers, booleans or one-line arrays; '#' comments.
struct Value {
    std::variant<std::string, double, bool, std::vector<Value>> data;
    int line = 0;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<std::vector<Value>>(data); }

    const std::string& as_string() const;
    double as_number() const;
    bool as_bool() const;
    const std::vector<Value>& as_array() const;
    std::vector<double> as_number_array() const;
    std::vector<std::string> as_string_array() const;
};

// Flat document: dotted-path key -> value.
class Document {
  public:
    static Document parse(const std::string& text, const std::string& origin = "<config>");
    static Document parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const Value& at(const std::string& key) const;

    double number_or(const std::string& key, double fallback) const;
    bool bool_or(const std::string& key, bool fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;

    // consumption tracking: validated readers mark keys, leftovers are
    // rejected with their source location
    const Value& take(const std::string& key);
    bool take_has(const std::string& key);
    void expect_consumed() const;  // throws on unknown keys

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
    const std::map<std::string, Value>& all() const { return values_; }
    const std::string& origin() const { return origin_; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  private:
    std::map<std::string, Value> values_;
    std::set<std::string> consumed_;
    std::string origin_;
};

// canonical serialization (sorted keys, normalized numbers) and fingerprint
std::string canonical(const Document& doc);
std::string fingerprint(const Document& doc);  // 16 hex digits, FNV-1a 64

}  // namespace sbmc::toml

#endif

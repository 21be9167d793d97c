#include "sbmc/toml.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sbmc::toml {

namespace {

[[noreturn]] void die(const std::string& origin, int line, const std::string& what) {
    throw ParseError(origin + ":" + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strip comments outside of strings
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
            c != '.') {
            return false;
        }
    }
    return true;
}

Value parse_scalar(const std::string& raw, int line, const std::string& origin);

Value parse_value(const std::string& raw, int line, const std::string& origin) {
    const std::string s = trim(raw);
    if (s.empty()) die(origin, line, "empty value");
    if (s.front() == '[') {
        if (s.back() != ']') die(origin, line, "unterminated array");
        Value v;
        v.line = line;
        std::vector<Value> items;
        std::string body = s.substr(1, s.size() - 2);
        std::string cur;
        bool in_str = false;
        int depth = 0;
        for (char c : body) {
            if (c == '"') in_str = !in_str;
            if (!in_str && c == '[') ++depth;
            if (!in_str && c == ']') --depth;
            if (c == ',' && !in_str && depth == 0) {
                if (!trim(cur).empty()) items.push_back(parse_value(cur, line, origin));
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!trim(cur).empty()) items.push_back(parse_value(cur, line, origin));
        v.data = std::move(items);
        return v;
    }
    return parse_scalar(s, line, origin);
}

Value parse_scalar(const std::string& s, int line, const std::string& origin) {
    Value v;
    v.line = line;
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') die(origin, line, "unterminated string");
        v.data = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true") {
        v.data = true;
        return v;
    }
    if (s == "false") {
        v.data = false;
        return v;
    }
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) die(origin, line, "malformed number '" + s + "'");
        v.data = x;
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        die(origin, line, "cannot parse value '" + s + "'");
    }
}

}  // namespace

const std::string& Value::as_string() const {
    if (!is_string()) throw ParseError("config value is not a string (line " + std::to_string(line) + ")");
    return std::get<std::string>(data);
}
double Value::as_number() const {
    if (!is_number()) throw ParseError("config value is not a number (line " + std::to_string(line) + ")");
    return std::get<double>(data);
}
bool Value::as_bool() const {
    if (!is_bool()) throw ParseError("config value is not a boolean (line " + std::to_string(line) + ")");
    return std::get<bool>(data);
}
const std::vector<Value>& Value::as_array() const {
    if (!is_array()) throw ParseError("config value is not an array (line " + std::to_string(line) + ")");
    return std::get<std::vector<Value>>(data);
}
std::vector<double> Value::as_number_array() const {
    std::vector<double> out;
    for (const auto& v : as_array()) out.push_back(v.as_number());
    return out;
}
std::vector<std::string> Value::as_string_array() const {
    std::vector<std::string> out;
    for (const auto& v : as_array()) out.push_back(v.as_string());
    return out;
}

Document Document::parse(const std::string& text, const std::string& origin) {
    Document doc;
    doc.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string prefix;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') die(origin, lineno, "unterminated table header");
            prefix = trim(s.substr(1, s.size() - 2));
            if (!valid_key(prefix)) die(origin, lineno, "invalid table name '" + prefix + "'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) die(origin, lineno, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        if (!valid_key(key)) die(origin, lineno, "invalid key '" + key + "'");
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        if (doc.values_.count(full)) die(origin, lineno, "duplicate key '" + full + "'");
        doc.values_.emplace(full, parse_value(s.substr(eq + 1), lineno, origin));
    }
    return doc;
}

Document Document::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str(), path);
}

const Value& Document::at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw ParseError(origin_ + ": missing required key '" + key + "'");
    }
    return it->second;
}

double Document::number_or(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_number();
}
bool Document::bool_or(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_bool();
}
std::string Document::string_or(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.as_string();
}

const Value& Document::take(const std::string& key) {
    consumed_.insert(key);
    return at(key);
}

bool Document::take_has(const std::string& key) {
    consumed_.insert(key);
    return has(key);
}

void Document::expect_consumed() const {
    for (const auto& [key, value] : values_) {
        if (!consumed_.count(key)) {
            throw ParseError(origin_ + ":" + std::to_string(value.line) +
                             ": unknown key '" + key + "'");
        }
    }
}

std::vector<std::string> Document::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_) {
        if (key.rfind(prefix, 0) == 0) out.push_back(key);
    }
    return out;
}

void Document::fail(const std::string& key, const std::string& what) const {
    int line = 0;
    auto it = values_.find(key);
    if (it != values_.end()) line = it->second.line;
    throw ParseError(origin_ + ":" + std::to_string(line) + ": key '" + key +
                     "': " + what);
}

namespace {

void canon_value(std::ostringstream& os, const Value& v) {
    if (v.is_string()) {
        os << '"' << v.as_string() << '"';
    } else if (v.is_bool()) {
        os << (v.as_bool() ? "true" : "false");
    } else if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v.as_number());
        os << buf;
    } else {
        os << '[';
        bool first = true;
        for (const auto& item : v.as_array()) {
            if (!first) os << ',';
            first = false;
            canon_value(os, item);
        }
        os << ']';
    }
}

}  // namespace

std::string canonical(const Document& doc) {
    std::ostringstream os;
    for (const auto& [key, value] : doc.all()) {  // std::map: sorted
        os << key << '=';
        canon_value(os, value);
        os << '\n';
    }
    return os.str();
}

std::string fingerprint(const Document& doc) {
    const std::string c = canonical(doc);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : c) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sbmc::toml

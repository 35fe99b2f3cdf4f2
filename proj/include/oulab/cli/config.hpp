#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oulab/core/types.hpp"

namespace oulab::cli {

/// Malformed or invalid configuration; `key()` names the offending entry as "section.key".
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& msg) : Error(key + ": " + msg), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Flat key = value text with [section] headers. Lines starting with '#' or ';' are comments.
/// Keys outside any section belong to the empty section.
class Config {
public:
    static Config parse(const std::string& text) {
        Config c;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']') throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
                section = trim(t.substr(1, t.size() - 2));
                if (section.empty()) throw ConfigError("line " + std::to_string(lineno), "empty section name");
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError(qualify(section, t), "expected key = value (line " + std::to_string(lineno) + ")");
            const std::string key = trim(t.substr(0, eq));
            if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
            const std::string full = qualify(section, key);
            if (c.values_.count(full)) throw ConfigError(full, "duplicate key");
            c.values_[full] = trim(t.substr(eq + 1));
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw ConfigError(path, "cannot open config file");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str());
    }

    /// One "section.key=value" line per entry in sorted order, whitespace trimmed.
    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
        return out;
    }

    std::string hash() const {
        char buf[17];
        const auto h = fnv1a64(canonical());
        for (int i = 0; i < 16; ++i) buf[i] = "0123456789abcdef"[(h >> (60 - 4 * i)) & 0xf];
        buf[16] = 0;
        return buf;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& def) const {
        const auto it = values_.find(key);
        return it == values_.end() ? def : it->second;
    }
    std::string require_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end() || it->second.empty()) throw ConfigError(key, "required key is missing");
        return it->second;
    }

    real get_real(const std::string& key, real def) const {
        return has(key) ? parse_real(key, values_.at(key)) : def;
    }
    long long get_int(const std::string& key, long long def) const {
        return has(key) ? parse_int(key, values_.at(key)) : def;
    }
    bool get_bool(const std::string& key, bool def) const {
        if (!has(key)) return def;
        const std::string& v = values_.at(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(key, "expected a boolean, got '" + v + "'");
    }

    /// Comma-separated reals; `linspace(a, b, n)` and `geomspace(a, b, n)` expand in place.
    std::vector<real> get_reals(const std::string& key, const std::vector<real>& def) const {
        if (!has(key)) return def;
        std::vector<real> out;
        for (const auto& item : split(values_.at(key), ',')) {
            if (item.rfind("linspace(", 0) == 0 || item.rfind("geomspace(", 0) == 0) {
                const bool geo = item[0] == 'g';
                if (item.back() != ')') throw ConfigError(key, "unterminated " + item);
                const auto args = split(item.substr(item.find('(') + 1, item.size() - item.find('(') - 2), ',');
                if (args.size() != 3) throw ConfigError(key, "expected three arguments in " + item);
                const real a = parse_real(key, args[0]), b = parse_real(key, args[1]);
                const long long n = parse_int(key, args[2]);
                if (n < 1) throw ConfigError(key, "point count must be positive");
                if (geo && !(a > 0 && b > 0)) throw ConfigError(key, "geomspace needs positive end points");
                for (long long i = 0; i < n; ++i) {
                    const real s = n == 1 ? 0.0 : static_cast<real>(i) / static_cast<real>(n - 1);
                    out.push_back(geo ? a * std::pow(b / a, s) : a + (b - a) * s);
                }
            } else {
                out.push_back(parse_real(key, item));
            }
        }
        if (out.empty()) throw ConfigError(key, "grid must be non-empty");
        return out;
    }
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& def) const {
        if (!has(key)) return def;
        std::vector<int> out;
        for (const auto& item : split(values_.at(key), ',')) out.push_back(static_cast<int>(parse_int(key, item)));
        return out;
    }
    /// Complex list written as "re:im" items, e.g. "0.1:1.5, 1:0".
    std::vector<cplx> get_complex(const std::string& key, const std::vector<cplx>& def) const {
        if (!has(key)) return def;
        std::vector<cplx> out;
        for (const auto& item : split(values_.at(key), ',')) {
            const auto c = item.find(':');
            if (c == std::string::npos) {
                out.emplace_back(parse_real(key, item), 0.0);
            } else {
                out.emplace_back(parse_real(key, trim(item.substr(0, c))), parse_real(key, trim(item.substr(c + 1))));
            }
        }
        return out;
    }

    static real parse_real(const std::string& key, const std::string& s) {
        const std::string t = trim(s);
        real v = 0.0;
        const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
        if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
            throw ConfigError(key, "expected a number, got '" + t + "'");
        return v;
    }
    static long long parse_int(const std::string& key, const std::string& s) {
        const std::string t = trim(s);
        long long v = 0;
        const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
        if (r.ec != std::errc() || r.ptr != t.data() + t.size() || t.empty())
            throw ConfigError(key, "expected an integer, got '" + t + "'");
        return v;
    }

private:
    static std::string qualify(const std::string& section, const std::string& key) {
        return section.empty() ? key : section + "." + key;
    }

    std::map<std::string, std::string> values_;
};

/// Rejects keys outside `allowed`, so that a typo fails loudly instead of silently using a default.
inline void require_known_keys(const Config& c, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : c.values())
        if (!allowed.count(k)) throw ConfigError(k, "unknown key for this experiment");
}

}  // namespace oulab::cli

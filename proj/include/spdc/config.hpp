#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

// Flat typed key-value text: one `key = value` per line, '#' to end of line
// is a comment, keys use dotted sections. Values keep internal spaces.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse_text(const std::string& text) {
        Config cfg;
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw)) {
            ++lineno;
            std::string line = raw;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(lineno, "expected 'key = value', got '" + trim(raw) + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(lineno, "empty key");
            if (cfg.entries_.count(key))
                throw ConfigError(lineno, "duplicate key '" + key + "' (first at line " +
                                              std::to_string(cfg.entries_[key].line) + ")");
            cfg.entries_[key] = {value, lineno};
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str());
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    int line_of(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    std::string get_string(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(0, "missing required key '" + key + "'");
        return it->second.value;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const {
        return has(key) ? to_double(key, get_string(key)) : fallback;
    }

    int get_int(const std::string& key, int fallback) const {
        if (!has(key)) return fallback;
        const std::string v = get_string(key);
        try {
            std::size_t pos = 0;
            const int out = std::stoi(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw ConfigError(line_of(key), "key '" + key + "': expected an integer, got '" + v + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = get_string(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(line_of(key), "key '" + key + "': expected a boolean, got '" + v + "'");
    }

    // Value must be one of the allowed words.
    std::string get_enum(const std::string& key, const std::vector<std::string>& allowed,
                         const std::string& fallback) const {
        const std::string v = has(key) ? get_string(key) : fallback;
        if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
            std::string opts;
            for (const auto& a : allowed) opts += (opts.empty() ? "" : "|") + a;
            throw ConfigError(line_of(key), "key '" + key + "': expected one of " + opts + ", got '" + v + "'");
        }
        return v;
    }

    // Two whitespace-separated doubles ("lo hi").
    std::pair<double, double> get_double_pair(const std::string& key) const {
        const std::string v = get_string(key);
        std::istringstream ss(v);
        double a, b;
        if (!(ss >> a >> b))
            throw ConfigError(line_of(key), "key '" + key + "': expected two numbers, got '" + v + "'");
        std::string rest;
        if (ss >> rest)
            throw ConfigError(line_of(key), "key '" + key + "': expected two numbers, got '" + v + "'");
        return {a, b};
    }

    // Rejects any key not in the allowed set, naming it and its line.
    void validate_keys(const std::set<std::string>& allowed) const {
        for (const auto& [key, entry] : entries_) {
            if (!allowed.count(key))
                throw ConfigError(entry.line, "unknown key '" + key + "'");
        }
    }

    const std::map<std::string, Entry>& entries() const { return entries_; }

private:
    static std::string trim(const std::string& s) {
        std::size_t a = 0, b = s.size();
        while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
        return s.substr(a, b - a);
    }

    double to_double(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double out = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw ConfigError(line_of(key), "key '" + key + "': expected a number, got '" + v + "'");
        }
    }

    std::map<std::string, Entry> entries_;
};

}  // namespace spdc

#pragma once

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "crim/errors.hpp"

namespace crim {

// Which model contribution rate feeds effort imputation.
enum class RateMethod { Mean, MeanHigh, Median, Both };

inline std::string_view to_string(RateMethod m) {
    switch (m) {
        case RateMethod::Mean: return "mean";
        case RateMethod::MeanHigh: return "mean_high";
        case RateMethod::Median: return "median";
        case RateMethod::Both: return "both";
    }
    return "both";
}

inline RateMethod rate_method_from_string(std::string_view s) {
    if (s == "mean") return RateMethod::Mean;
    if (s == "mean_high") return RateMethod::MeanHigh;
    if (s == "median") return RateMethod::Median;
    if (s == "both") return RateMethod::Both;
    throw InvalidConfig("unknown rate_method: '" + std::string(s) +
                        "' (expected mean|mean_high|median|both)");
}

struct AnalysisConfig {
    double mctdr_lower_hours = 0.5;
    double mctdr_upper_hours = 8.0;
    bool exclude_merges = true;
    double ure_daily_cap_hours = 8.0;
    std::size_t min_candidates_for_quartiles = 8;
    RateMethod rate_method = RateMethod::Both;

    void validate() const {
        if (!(mctdr_lower_hours > 0.0) || !(mctdr_lower_hours < mctdr_upper_hours)) {
            throw InvalidConfig("require 0 < mctdr_lower_hours < mctdr_upper_hours");
        }
        if (!(ure_daily_cap_hours > 0.0) || ure_daily_cap_hours > 24.0) {
            throw InvalidConfig("ure_daily_cap_hours must be in (0, 24]");
        }
        if (min_candidates_for_quartiles < 4) {
            throw InvalidConfig("min_candidates_for_quartiles must be >= 4");
        }
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string_view strip_quotes(std::string_view s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\''))) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

inline double parse_double_value(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw InvalidConfig("bad numeric value for " + std::string(key) + ": '" +
                            std::string(value) + "'");
    }
    return out;
}

inline bool parse_bool_value(std::string_view key, std::string_view value) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw InvalidConfig("bad boolean value for " + std::string(key) + ": '" +
                        std::string(value) + "'");
}

}  // namespace detail

// Parses a flat TOML-style `key = value` document. Every key is optional;
// unknown keys are rejected so typos do not silently fall back to defaults.
inline AnalysisConfig parse_config(std::string_view text) {
    AnalysisConfig cfg;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidConfig("config line is not 'key = value': '" + std::string(line) + "'");
        }
        const std::string_view key = detail::trim(line.substr(0, eq));
        const std::string_view value = detail::strip_quotes(detail::trim(line.substr(eq + 1)));

        if (key == "mctdr_lower_hours") {
            cfg.mctdr_lower_hours = detail::parse_double_value(key, value);
        } else if (key == "mctdr_upper_hours") {
            cfg.mctdr_upper_hours = detail::parse_double_value(key, value);
        } else if (key == "ure_daily_cap_hours") {
            cfg.ure_daily_cap_hours = detail::parse_double_value(key, value);
        } else if (key == "exclude_merges") {
            cfg.exclude_merges = detail::parse_bool_value(key, value);
        } else if (key == "min_candidates_for_quartiles") {
            const double v = detail::parse_double_value(key, value);
            if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
                throw InvalidConfig("min_candidates_for_quartiles must be a nonnegative integer");
            }
            cfg.min_candidates_for_quartiles = static_cast<std::size_t>(v);
        } else if (key == "rate_method") {
            cfg.rate_method = rate_method_from_string(value);
        } else {
            throw InvalidConfig("unknown config key: '" + std::string(key) + "'");
        }
    }
    cfg.validate();
    return cfg;
}

inline AnalysisConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotFound("config file not found: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace crim

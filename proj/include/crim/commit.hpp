#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace crim {

// One extracted commit. Timestamps are UTC seconds since the Unix epoch;
// size_words is the Levenshtein word distance of the commit's diff.
struct RawCommit {
    std::string commit_id;
    std::string author_id;
    std::int64_t author_timestamp = 0;
    std::uint64_t size_words = 0;
    bool is_merge = false;

    bool operator==(const RawCommit&) const = default;
};

// Datasets are kept in (author_timestamp, commit_id) ascending order; the id
// breaks timestamp ties so equal inputs always produce identical sequences.
inline bool commit_order_less(const RawCommit& a, const RawCommit& b) {
    if (a.author_timestamp != b.author_timestamp) {
        return a.author_timestamp < b.author_timestamp;
    }
    return a.commit_id < b.commit_id;
}

// Author identity: lower-cased trimmed email, falling back to the
// lower-cased trimmed name when the email is empty.
inline std::string normalize_author_id(std::string_view email, std::string_view name) {
    const auto normalize = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        std::string out(s);
        for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    };
    std::string id = normalize(email);
    if (id.empty()) {
        id = normalize(name);
    }
    return id;
}

namespace detail {

// Civil-date conversions (Howard Hinnant's algorithms), valid far beyond any
// plausible commit timestamp.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += (m <= 2);
}

inline bool is_leap_year(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr unsigned kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return m >= 1 && m <= 12 ? kDays[m - 1] : 0;
}

inline bool parse_fixed_uint(std::string_view s, std::size_t offset, std::size_t len, unsigned& out) {
    if (offset + len > s.size()) return false;
    unsigned value = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const char c = s[offset + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + static_cast<unsigned>(c - '0');
    }
    out = value;
    return true;
}

}  // namespace detail

// Strict `YYYY-MM-DDTHH:MM:SSZ` parse; anything else is rejected.
inline std::optional<std::int64_t> parse_iso8601_utc(std::string_view s) {
    if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
        s[16] != ':' || s[19] != 'Z') {
        return std::nullopt;
    }
    unsigned year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!detail::parse_fixed_uint(s, 0, 4, year) || !detail::parse_fixed_uint(s, 5, 2, month) ||
        !detail::parse_fixed_uint(s, 8, 2, day) || !detail::parse_fixed_uint(s, 11, 2, hour) ||
        !detail::parse_fixed_uint(s, 14, 2, minute) || !detail::parse_fixed_uint(s, 17, 2, second)) {
        return std::nullopt;
    }
    if (month < 1 || month > 12 || day < 1 ||
        day > detail::days_in_month(static_cast<std::int64_t>(year), month) || hour > 23 ||
        minute > 59 || second > 59) {
        return std::nullopt;
    }
    const std::int64_t days =
        detail::days_from_civil(static_cast<std::int64_t>(year), month, day);
    return days * 86400 + hour * 3600 + minute * 60 + second;
}

inline std::string format_iso8601_utc(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    std::int64_t year = 0;
    unsigned month = 0, day = 0;
    detail::civil_from_days(days, year, month, day);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(year), month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return std::string(buf);
}

}  // namespace crim

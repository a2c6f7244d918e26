#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "crim/commit.hpp"
#include "crim/errors.hpp"

namespace crim {

inline constexpr std::string_view kCommitCsvHeader =
    "commit_id,author_id,author_timestamp_utc,size_words,is_merge";

struct CsvReadResult {
    std::vector<RawCommit> commits;
    std::size_t dropped_rows = 0;
};

namespace detail {

inline std::string csv_escape(std::string_view s) {
    bool need_quotes = false;
    for (char c : s) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            need_quotes = true;
            break;
        }
    }
    if (!need_quotes) return std::string(s);
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Splits one CSV record into fields, honoring double-quote escaping.
// Returns nullopt on unbalanced quotes or quotes opening mid-field.
inline std::optional<std::vector<std::string>> split_csv_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            if (field_started) return std::nullopt;
            in_quotes = true;
            field_started = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            field_started = false;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) return std::nullopt;
    fields.push_back(std::move(field));
    return fields;
}

inline bool is_hex_string(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
        if (!ok) return false;
    }
    return true;
}

inline std::optional<std::uint64_t> parse_size_words(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return out;
}

}  // namespace detail

inline std::string commit_csv_string(std::span<const RawCommit> records) {
    std::string out;
    out.append(kCommitCsvHeader);
    out.push_back('\n');
    for (const RawCommit& c : records) {
        out.append(detail::csv_escape(c.commit_id));
        out.push_back(',');
        out.append(detail::csv_escape(c.author_id));
        out.push_back(',');
        out.append(format_iso8601_utc(c.author_timestamp));
        out.push_back(',');
        out.append(std::to_string(c.size_words));
        out.push_back(',');
        out.append(c.is_merge ? "true" : "false");
        out.push_back('\n');
    }
    return out;
}

inline void write_commit_csv(std::span<const RawCommit> records,
                             const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    const std::string body = commit_csv_string(records);
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

// Parses a commit CSV. A wrong header is a hard error; individual rows that
// do not parse (bad field count, timestamp, size, merge flag, or a duplicate
// commit id) are dropped and counted, never repaired.
inline CsvReadResult parse_commit_csv(std::string_view text) {
    CsvReadResult result;
    std::unordered_set<std::string> seen_ids;

    std::size_t pos = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (!saw_header) {
            if (line != kCommitCsvHeader) {
                throw MalformedHeader("expected header '" + std::string(kCommitCsvHeader) +
                                      "', got '" + std::string(line) + "'");
            }
            saw_header = true;
            continue;
        }
        if (line.empty()) continue;

        const auto fields = detail::split_csv_record(line);
        if (!fields || fields->size() != 5) {
            ++result.dropped_rows;
            continue;
        }
        RawCommit c;
        c.commit_id = (*fields)[0];
        c.author_id = (*fields)[1];
        const auto ts = parse_iso8601_utc((*fields)[2]);
        const auto size = detail::parse_size_words((*fields)[3]);
        const std::string& merge = (*fields)[4];
        if (!detail::is_hex_string(c.commit_id) || !ts || !size ||
            (merge != "true" && merge != "false")) {
            ++result.dropped_rows;
            continue;
        }
        c.author_timestamp = *ts;
        c.size_words = *size;
        c.is_merge = merge == "true";
        if (!seen_ids.insert(c.commit_id).second) {
            ++result.dropped_rows;
            continue;
        }
        result.commits.push_back(std::move(c));
    }
    if (!saw_header) {
        throw MalformedHeader("empty file: missing header line");
    }
    return result;
}

inline CsvReadResult read_commit_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileNotFound("commit CSV not found: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_commit_csv(buf.str());
}

}  // namespace crim

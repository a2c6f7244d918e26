#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include "crim/commit.hpp"
#include "crim/config.hpp"
#include "crim/detail/subprocess.hpp"
#include "crim/diffsize.hpp"
#include "crim/errors.hpp"

namespace crim {

struct SkippedCommit {
    std::string commit_id;
    std::string reason;
};

struct ExtractResult {
    std::vector<RawCommit> commits;
    std::size_t merges_excluded = 0;
    std::size_t binary_files_skipped = 0;
    std::vector<SkippedCommit> skipped;  // unreadable objects, commit dropped
};

namespace detail {

inline constexpr std::string_view kZeroOid40 = "0000000000000000000000000000000000000000";

struct BlobPairRef {
    std::string before_oid;  // empty: created file
    std::string after_oid;   // empty: deleted file
};

struct PendingCommit {
    std::string commit_id;
    std::string author_id;
    std::int64_t author_timestamp = 0;
    bool is_merge = false;
    std::vector<BlobPairRef> pairs;
};

inline bool looks_binary(std::string_view content) {
    // git's own heuristic: a NUL byte in the first 8000 bytes.
    const std::size_t limit = std::min<std::size_t>(content.size(), 8000);
    return content.substr(0, limit).find('\0') != std::string_view::npos;
}

inline std::vector<std::string_view> split_on(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = text.find(sep, pos);
        if (next == std::string_view::npos) {
            parts.push_back(text.substr(pos));
            break;
        }
        parts.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    return parts;
}

// Parses one `git log --raw -z` record: header fields separated by \x1f and
// terminated by NUL, then optional ":old_mode new_mode old_oid new_oid
// status\0path\0" entries.
inline std::optional<PendingCommit> parse_log_record(std::string_view record) {
    const std::size_t header_end = record.find('\0');
    const std::string_view header =
        header_end == std::string_view::npos ? record : record.substr(0, header_end);
    const std::vector<std::string_view> fields = split_on(header, '\x1f');
    if (fields.size() != 5) {
        return std::nullopt;
    }
    PendingCommit commit;
    commit.commit_id = std::string(fields[0]);
    commit.is_merge = fields[1].find(' ') != std::string_view::npos;
    commit.author_id = normalize_author_id(fields[2], fields[3]);
    char* end = nullptr;
    const std::string ts(fields[4]);
    commit.author_timestamp = std::strtoll(ts.c_str(), &end, 10);
    if (end == ts.c_str() || *end != '\0') {
        return std::nullopt;
    }

    if (header_end == std::string_view::npos) {
        return commit;
    }
    std::string_view rest = record.substr(header_end + 1);
    if (!rest.empty() && rest.front() == '\n') {
        rest.remove_prefix(1);
    }
    while (!rest.empty() && rest.front() == ':') {
        const std::size_t meta_end = rest.find('\0');
        if (meta_end == std::string_view::npos) break;
        const std::vector<std::string_view> meta = split_on(rest.substr(1, meta_end - 1), ' ');
        rest.remove_prefix(meta_end + 1);
        const std::size_t path_end = rest.find('\0');
        if (path_end == std::string_view::npos) break;
        rest.remove_prefix(path_end + 1);
        if (meta.size() < 5) continue;
        const std::string_view old_mode = meta[0];
        const std::string_view new_mode = meta[1];
        const std::string_view old_oid = meta[2];
        const std::string_view new_oid = meta[3];
        if (old_mode == "160000" || new_mode == "160000") {
            continue;  // submodule pointer, not text
        }
        if (old_oid == new_oid) {
            continue;  // mode-only change
        }
        BlobPairRef pair;
        if (old_oid != kZeroOid40) pair.before_oid = std::string(old_oid);
        if (new_oid != kZeroOid40) pair.after_oid = std::string(new_oid);
        commit.pairs.push_back(std::move(pair));
    }
    return commit;
}

struct SizingOutcome {
    std::uint64_t size_words = 0;
    std::size_t binary_files = 0;
    bool unreadable = false;
    std::string missing_oid;
};

inline SizingOutcome size_commit(CatFileBatch& blobs, const PendingCommit& commit) {
    SizingOutcome outcome;
    for (const BlobPairRef& pair : commit.pairs) {
        std::string before, after;
        if (!pair.before_oid.empty()) {
            auto content = blobs.read_object(pair.before_oid);
            if (!content) {
                outcome.unreadable = true;
                outcome.missing_oid = pair.before_oid;
                return outcome;
            }
            before = std::move(*content);
        }
        if (!pair.after_oid.empty()) {
            auto content = blobs.read_object(pair.after_oid);
            if (!content) {
                outcome.unreadable = true;
                outcome.missing_oid = pair.after_oid;
                return outcome;
            }
            after = std::move(*content);
        }
        if (looks_binary(before) || looks_binary(after)) {
            ++outcome.binary_files;
            continue;
        }
        outcome.size_words += word_levenshtein(tokenize(before), tokenize(after));
    }
    return outcome;
}

}  // namespace detail

// Extracts one RawCommit per non-excluded commit reachable from any ref.
// Sizes are word distances against the first parent (the empty tree for
// root commits); merge commits are excluded when the config says so.
// Commits whose objects cannot be read are skipped and reported, never
// silently mis-sized. Output is sorted by (author_timestamp, commit_id), so
// the sizing work is order-independent and runs on `jobs` worker threads
// (0 = hardware default).
inline ExtractResult extract_commits(const std::filesystem::path& repo_path,
                                     const AnalysisConfig& cfg, unsigned jobs = 0) {
    namespace d = detail;

    const d::CommandResult probe =
        d::run_command({"git", "-C", repo_path.string(), "rev-parse", "--git-dir"});
    if (probe.exit_code != 0) {
        throw NotARepository("not a git repository: " + repo_path.string());
    }

    const d::CommandResult log = d::run_command(
        {"git", "-C", repo_path.string(), "log", "--all", "--root",
         "--diff-merges=first-parent", "--raw", "--no-renames", "--no-abbrev", "-z",
         "--format=%x1e%H%x1f%P%x1f%ae%x1f%an%x1f%at"});
    if (log.exit_code != 0) {
        throw NotARepository("git log failed for " + repo_path.string() + ": " + log.err);
    }

    ExtractResult result;
    std::vector<d::PendingCommit> pending;
    std::unordered_set<std::string> seen;
    std::string_view stream = log.out;
    std::size_t pos = 0;
    while (pos < stream.size()) {
        if (stream[pos] == '\x1e') {
            ++pos;
        }
        std::size_t next = stream.find('\x1e', pos);
        if (next == std::string_view::npos) next = stream.size();
        auto commit = d::parse_log_record(stream.substr(pos, next - pos));
        pos = next;
        if (!commit || !seen.insert(commit->commit_id).second) {
            continue;
        }
        if (commit->is_merge && cfg.exclude_merges) {
            ++result.merges_excluded;
            continue;
        }
        pending.push_back(std::move(*commit));
    }

    std::vector<d::SizingOutcome> outcomes(pending.size());
    if (!pending.empty()) {
        unsigned worker_count = jobs != 0 ? jobs : std::thread::hardware_concurrency();
        worker_count = std::clamp<unsigned>(worker_count, 1, 8);
        worker_count = std::min<unsigned>(worker_count, static_cast<unsigned>(pending.size()));

        std::atomic<std::size_t> cursor{0};
        const auto worker = [&] {
            d::CatFileBatch blobs;
            blobs.open(repo_path);
            while (true) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= pending.size()) break;
                outcomes[i] = d::size_commit(blobs, pending[i]);
            }
        };
        if (worker_count == 1) {
            worker();
        } else {
            std::vector<std::thread> threads;
            threads.reserve(worker_count);
            for (unsigned t = 0; t < worker_count; ++t) threads.emplace_back(worker);
            for (std::thread& t : threads) t.join();
        }
    }

    result.commits.reserve(pending.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
        const d::PendingCommit& commit = pending[i];
        const d::SizingOutcome& outcome = outcomes[i];
        if (outcome.unreadable) {
            result.skipped.push_back(
                {commit.commit_id, "unreadable object " + outcome.missing_oid});
            continue;
        }
        result.binary_files_skipped += outcome.binary_files;
        RawCommit raw;
        raw.commit_id = commit.commit_id;
        raw.author_id = commit.author_id;
        raw.author_timestamp = commit.author_timestamp;
        raw.size_words = outcome.size_words;
        raw.is_merge = commit.is_merge;
        result.commits.push_back(std::move(raw));
    }
    std::sort(result.commits.begin(), result.commits.end(), commit_order_less);
    return result;
}

}  // namespace crim

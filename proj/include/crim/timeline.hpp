#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crim/commit.hpp"

namespace crim {

enum class ContributionClass {
    NoCtd,
    QuickRemedy,
    ModelCandidate,
    Model,
    DisqualifiedCandidate,
    Unbound,
};

inline std::string_view to_string(ContributionClass c) {
    switch (c) {
        case ContributionClass::NoCtd: return "no_ctd";
        case ContributionClass::QuickRemedy: return "quick_remedy";
        case ContributionClass::ModelCandidate: return "model_candidate";
        case ContributionClass::Model: return "model";
        case ContributionClass::DisqualifiedCandidate: return "disqualified_candidate";
        case ContributionClass::Unbound: return "unbound";
    }
    return "no_ctd";
}

// One analysis row. The commit time delta attaches to the later commit of
// each consecutive pair: it is the interval that preceded this commit.
// ctd_hours is absent for an author's first commit and for nonpositive
// deltas; rate_wpm is present exactly when ctd_hours is.
struct CommitObservation {
    std::string commit_id;
    std::string author_id;
    std::int64_t author_timestamp = 0;
    std::optional<double> ctd_hours;
    std::uint64_t size_words = 0;
    std::optional<double> rate_wpm;
    ContributionClass contribution_class = ContributionClass::NoCtd;
    bool size_outlier = false;
};

// Ordered by author key so every downstream pass iterates deterministically.
using AuthorTimelines = std::map<std::string, std::vector<RawCommit>>;

inline AuthorTimelines build_timelines(std::span<const RawCommit> commits) {
    AuthorTimelines timelines;
    for (const RawCommit& c : commits) {
        timelines[c.author_id].push_back(c);
    }
    for (auto& [author, list] : timelines) {
        std::sort(list.begin(), list.end(), commit_order_less);
    }
    return timelines;
}

struct CtdResult {
    std::vector<CommitObservation> observations;
    // Zero deltas from timestamp ties (and any clock skew surviving the
    // sort) are treated as missing CTD, not clamped.
    std::size_t nonpositive_deltas = 0;
};

inline CtdResult compute_ctds(const AuthorTimelines& timelines) {
    CtdResult result;
    for (const auto& [author, list] : timelines) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            const RawCommit& c = list[i];
            CommitObservation obs;
            obs.commit_id = c.commit_id;
            obs.author_id = c.author_id;
            obs.author_timestamp = c.author_timestamp;
            obs.size_words = c.size_words;
            if (i > 0) {
                const std::int64_t delta_seconds =
                    c.author_timestamp - list[i - 1].author_timestamp;
                if (delta_seconds > 0) {
                    const double ctd_hours = static_cast<double>(delta_seconds) / 3600.0;
                    obs.ctd_hours = ctd_hours;
                    obs.rate_wpm = static_cast<double>(c.size_words) / (ctd_hours * 60.0);
                } else {
                    ++result.nonpositive_deltas;
                }
            }
            result.observations.push_back(std::move(obs));
        }
    }
    std::sort(result.observations.begin(), result.observations.end(),
              [](const CommitObservation& a, const CommitObservation& b) {
                  if (a.author_timestamp != b.author_timestamp) {
                      return a.author_timestamp < b.author_timestamp;
                  }
                  return a.commit_id < b.commit_id;
              });
    return result;
}

}  // namespace crim

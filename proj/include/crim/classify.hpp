#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crim/config.hpp"
#include "crim/errors.hpp"
#include "crim/stats.hpp"
#include "crim/timeline.hpp"

namespace crim {

struct ClassCounts {
    std::size_t no_ctd = 0;
    std::size_t quick_remedy = 0;
    std::size_t model_candidate = 0;
    std::size_t model = 0;
    std::size_t disqualified = 0;
    std::size_t unbound = 0;

    std::size_t total() const {
        return no_ctd + quick_remedy + model_candidate + model + disqualified + unbound;
    }
};

// A fully classified dataset. Observations keep their (timestamp, id) order;
// counts and the quartile summaries describe the classification that was
// actually applied. The config travels with the dataset so rate estimation
// can honor the same thresholds.
struct ClassifiedDataset {
    std::vector<CommitObservation> observations;
    ClassCounts counts;
    AnalysisConfig config;
    std::optional<QuartileSummary> size_fences;      // over candidate sizes
    std::optional<QuartileSummary> rate_quartiles;   // over kept candidate rates
    std::size_t size_outlier_count = 0;
    bool outlier_filter_skipped = false;  // fewer than 4 candidates
    bool q4_empty = false;                // degenerate rates: nothing above Q3
};

// Step 1: the MCTDR sieve. Absent CTD -> NoCtd, below L -> QuickRemedy,
// inside [L, U] -> ModelCandidate, above U -> Unbound. Bounds are inclusive.
inline void classify_by_ctd(std::span<CommitObservation> observations,
                            const AnalysisConfig& cfg) {
    cfg.validate();
    for (CommitObservation& obs : observations) {
        if (!obs.ctd_hours) {
            obs.contribution_class = ContributionClass::NoCtd;
        } else if (*obs.ctd_hours < cfg.mctdr_lower_hours) {
            obs.contribution_class = ContributionClass::QuickRemedy;
        } else if (*obs.ctd_hours <= cfg.mctdr_upper_hours) {
            obs.contribution_class = ContributionClass::ModelCandidate;
        } else {
            obs.contribution_class = ContributionClass::Unbound;
        }
    }
}

struct OutlierSplit {
    std::vector<CommitObservation> kept;
    std::vector<CommitObservation> rejected;  // re-labeled DisqualifiedCandidate
    std::optional<QuartileSummary> fences;
    bool skipped = false;
};

// Step 2: IQR fences over candidate contribution sizes. Members beyond the
// fences become DisqualifiedCandidate with the size_outlier flag set. With
// fewer than 4 candidates the quartiles are unstable, so nothing is
// rejected and the split is marked skipped.
inline OutlierSplit remove_size_outliers(std::vector<CommitObservation> candidates) {
    OutlierSplit split;
    if (candidates.empty()) {
        return split;
    }
    if (candidates.size() < 4) {
        split.skipped = true;
        split.kept = std::move(candidates);
        return split;
    }
    std::vector<double> sizes;
    sizes.reserve(candidates.size());
    for (const CommitObservation& obs : candidates) {
        sizes.push_back(static_cast<double>(obs.size_words));
    }
    split.fences = iqr_fences(sizes);
    for (CommitObservation& obs : candidates) {
        const double size = static_cast<double>(obs.size_words);
        if (size < split.fences->lower_fence || size > split.fences->upper_fence) {
            obs.contribution_class = ContributionClass::DisqualifiedCandidate;
            obs.size_outlier = true;
            split.rejected.push_back(std::move(obs));
        } else {
            split.kept.push_back(std::move(obs));
        }
    }
    return split;
}

struct ModelSelection {
    std::vector<CommitObservation> model;
    std::vector<CommitObservation> disqualified;
    std::optional<QuartileSummary> rate_quartiles;
};

// Step 3: Q4 selection. Rate quartiles are computed over the kept
// candidates; rates strictly above Q3 become Model, the rest
// DisqualifiedCandidate. When every rate equals Q3 the model set comes out
// empty and the caller falls back per the rate-estimation rules.
inline ModelSelection select_model_contributions(std::vector<CommitObservation> kept) {
    ModelSelection selection;
    if (kept.empty()) {
        return selection;
    }
    std::vector<double> rates;
    rates.reserve(kept.size());
    for (const CommitObservation& obs : kept) {
        rates.push_back(obs.rate_wpm.value_or(0.0));
    }
    selection.rate_quartiles = iqr_fences(rates);
    const double q3 = selection.rate_quartiles->q3;
    for (CommitObservation& obs : kept) {
        if (obs.rate_wpm.value_or(0.0) > q3) {
            obs.contribution_class = ContributionClass::Model;
            selection.model.push_back(std::move(obs));
        } else {
            obs.contribution_class = ContributionClass::DisqualifiedCandidate;
            selection.disqualified.push_back(std::move(obs));
        }
    }
    return selection;
}

inline ClassCounts tally_classes(std::span<const CommitObservation> observations) {
    ClassCounts counts;
    for (const CommitObservation& obs : observations) {
        switch (obs.contribution_class) {
            case ContributionClass::NoCtd: ++counts.no_ctd; break;
            case ContributionClass::QuickRemedy: ++counts.quick_remedy; break;
            case ContributionClass::ModelCandidate: ++counts.model_candidate; break;
            case ContributionClass::Model: ++counts.model; break;
            case ContributionClass::DisqualifiedCandidate: ++counts.disqualified; break;
            case ContributionClass::Unbound: ++counts.unbound; break;
        }
    }
    return counts;
}

// Runs steps 1-3 over a dataset and produces the final partition. Every
// observation ends in exactly one of {NoCtd, QuickRemedy, Model,
// DisqualifiedCandidate, Unbound}; re-running on the result is a no-op.
inline ClassifiedDataset classify_dataset(std::vector<CommitObservation> observations,
                                          const AnalysisConfig& cfg) {
    ClassifiedDataset dataset;
    dataset.config = cfg;
    classify_by_ctd(observations, cfg);

    std::vector<CommitObservation> candidates;
    for (const CommitObservation& obs : observations) {
        if (obs.contribution_class == ContributionClass::ModelCandidate) {
            candidates.push_back(obs);
        }
    }

    OutlierSplit split = remove_size_outliers(std::move(candidates));
    dataset.size_fences = split.fences;
    dataset.outlier_filter_skipped = split.skipped;
    dataset.size_outlier_count = split.rejected.size();

    ModelSelection selection = select_model_contributions(std::move(split.kept));
    dataset.rate_quartiles = selection.rate_quartiles;
    dataset.q4_empty = selection.rate_quartiles.has_value() && selection.model.empty();

    std::unordered_map<std::string_view, const CommitObservation*> final_class;
    for (const auto* group : {&split.rejected, &selection.model, &selection.disqualified}) {
        for (const CommitObservation& obs : *group) {
            final_class.emplace(obs.commit_id, &obs);
        }
    }
    for (CommitObservation& obs : observations) {
        if (const auto it = final_class.find(obs.commit_id); it != final_class.end()) {
            obs.contribution_class = it->second->contribution_class;
            obs.size_outlier = it->second->size_outlier;
        }
    }

    dataset.counts = tally_classes(observations);
    dataset.observations = std::move(observations);
    return dataset;
}

}  // namespace crim

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "crim/classify.hpp"
#include "crim/commit.hpp"
#include "crim/config.hpp"
#include "crim/imputation.hpp"
#include "crim/report.hpp"
#include "crim/timeline.hpp"

namespace crim {

// Everything one analysis run produces. The metrics always cover both rate
// methods (the report shape is a comparison); the median method is run
// additionally when the config selects it.
struct AnalysisResult {
    ClassifiedDataset dataset;
    McrEstimates estimates;
    MethodComparison comparison;
    CrimMetrics metrics;
    std::optional<DatasetStatistics> statistics;
    std::vector<ImputedEffort> efforts_mean;
    std::vector<ImputedEffort> efforts_mean_high;
    std::vector<ImputedEffort> efforts_median;
    std::size_t nonpositive_deltas = 0;
};

inline AnalysisResult run_analysis(std::vector<RawCommit> commits, const AnalysisConfig& cfg) {
    cfg.validate();
    if (cfg.exclude_merges) {
        std::erase_if(commits, [](const RawCommit& c) { return c.is_merge; });
    }

    AnalysisResult result;
    CtdResult ctds = compute_ctds(build_timelines(commits));
    result.nonpositive_deltas = ctds.nonpositive_deltas;

    if (ctds.observations.empty()) {
        result.dataset.config = cfg;
        result.metrics = CrimMetrics{};
        return result;
    }

    result.dataset = classify_dataset(std::move(ctds.observations), cfg);
    result.estimates = compute_mcr(result.dataset);

    result.efforts_mean = impute_effort(result.dataset, result.estimates, RateMethod::Mean);
    evaluate_ure(result.efforts_mean, cfg);
    result.efforts_mean_high =
        impute_effort(result.dataset, result.estimates, RateMethod::MeanHigh);
    evaluate_ure(result.efforts_mean_high, cfg);

    result.comparison = compare_methods(result.efforts_mean, result.efforts_mean_high);
    result.metrics = build_crim_metrics(result.dataset, result.estimates, result.comparison);

    if (cfg.rate_method == RateMethod::Median) {
        result.efforts_median =
            impute_effort(result.dataset, result.estimates, RateMethod::Median);
        evaluate_ure(result.efforts_median, cfg);
        std::size_t ure_median = 0;
        for (const ImputedEffort& e : result.efforts_median) ure_median += e.ure_flag ? 1 : 0;
        result.metrics.median_mcr_wpm = result.estimates.median_mcr_wpm;
        result.metrics.count_ure_median = ure_median;
    }

    bool any_ctd = false;
    for (const CommitObservation& obs : result.dataset.observations) {
        if (obs.ctd_hours) {
            any_ctd = true;
            break;
        }
    }
    if (any_ctd) {
        result.statistics = dataset_statistics(result.dataset.observations);
    }
    return result;
}

}  // namespace crim

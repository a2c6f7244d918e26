#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crim/classify.hpp"
#include "crim/config.hpp"
#include "crim/errors.hpp"
#include "crim/stats.hpp"

namespace crim {

// Words per minute from a word count and an elapsed interval in hours.
inline double contribution_rate(std::uint64_t size_words, double ctd_hours) {
    if (!(ctd_hours > 0.0)) {
        throw NonpositiveCtd("contribution rate requires a positive CTD");
    }
    return static_cast<double>(size_words) / (ctd_hours * 60.0);
}

// The two model contribution rates plus the median variant. mmcr averages
// every outlier-filtered candidate rate; mhmcr averages the Q4 subset. When
// Q4 is empty or the kept set is below the configured minimum, mhmcr falls
// back to the kept mean and fallback_used is set.
struct McrEstimates {
    double mmcr_wpm = 0.0;
    double mhmcr_wpm = 0.0;
    double median_mcr_wpm = 0.0;
    std::size_t q4_count = 0;
    std::size_t kept_count = 0;
    bool fallback_used = false;
};

inline McrEstimates compute_mcr(const ClassifiedDataset& dataset) {
    std::vector<double> kept_rates;
    std::vector<double> q4_rates;
    for (const CommitObservation& obs : dataset.observations) {
        const bool in_mcc = obs.contribution_class == ContributionClass::Model ||
                            obs.contribution_class == ContributionClass::DisqualifiedCandidate;
        if (!in_mcc || obs.size_outlier) {
            continue;
        }
        const double rate = obs.rate_wpm.value_or(0.0);
        kept_rates.push_back(rate);
        if (obs.contribution_class == ContributionClass::Model) {
            q4_rates.push_back(rate);
        }
    }
    if (kept_rates.empty()) {
        throw NoCandidates("no commit inside the model CTD range");
    }

    const auto mean = [](std::span<const double> v) {
        double sum = 0.0;
        for (double x : v) sum += x;
        return sum / static_cast<double>(v.size());
    };

    McrEstimates est;
    est.kept_count = kept_rates.size();
    est.q4_count = q4_rates.size();
    est.mmcr_wpm = mean(kept_rates);
    est.median_mcr_wpm = quantile(kept_rates, 0.5);
    if (q4_rates.empty() || kept_rates.size() < dataset.config.min_candidates_for_quartiles) {
        est.fallback_used = true;
        est.mhmcr_wpm = est.mmcr_wpm;
    } else {
        est.mhmcr_wpm = mean(q4_rates);
    }
    return est;
}

// Resolved effort for one commit under one rate method. Anti-model commits
// (NoCtd, DisqualifiedCandidate, Unbound) get size/rate imputed hours;
// Model and QuickRemedy commits keep their observed CTD.
struct ImputedEffort {
    std::string commit_id;
    RateMethod method = RateMethod::Mean;
    double imputed_rate_wpm = 0.0;
    double reh_hours = 0.0;
    bool was_imputed = false;
    bool ure_flag = false;
    double allowance_hours = 0.0;
    std::optional<double> ctd_hours;
    std::uint64_t size_words = 0;
};

inline double method_rate(const McrEstimates& estimates, RateMethod method) {
    switch (method) {
        case RateMethod::Mean: return estimates.mmcr_wpm;
        case RateMethod::MeanHigh: return estimates.mhmcr_wpm;
        case RateMethod::Median: return estimates.median_mcr_wpm;
        case RateMethod::Both: break;
    }
    throw InvalidConfig("imputation requires a single rate method, not 'both'");
}

inline std::vector<ImputedEffort> impute_effort(const ClassifiedDataset& dataset,
                                                const McrEstimates& estimates,
                                                RateMethod method) {
    const double rate = method_rate(estimates, method);
    std::vector<ImputedEffort> efforts;
    efforts.reserve(dataset.observations.size());
    for (const CommitObservation& obs : dataset.observations) {
        ImputedEffort e;
        e.commit_id = obs.commit_id;
        e.method = method;
        e.imputed_rate_wpm = rate;
        e.ctd_hours = obs.ctd_hours;
        e.size_words = obs.size_words;
        switch (obs.contribution_class) {
            case ContributionClass::NoCtd:
            case ContributionClass::DisqualifiedCandidate:
            case ContributionClass::Unbound:
                e.was_imputed = true;
                if (obs.size_words == 0) {
                    e.reh_hours = 0.0;
                } else if (rate > 0.0) {
                    e.reh_hours = static_cast<double>(obs.size_words) / (rate * 60.0);
                } else {
                    throw ZeroRate("cannot impute a nonzero size with a zero " +
                                   std::string(to_string(method)) + " rate");
                }
                break;
            case ContributionClass::Model:
            case ContributionClass::QuickRemedy:
                e.was_imputed = false;
                e.reh_hours = obs.ctd_hours.value_or(0.0);
                break;
            case ContributionClass::ModelCandidate:
                throw InternalInconsistency("unresolved candidate reached imputation: " +
                                            obs.commit_id);
        }
        efforts.push_back(std::move(e));
    }
    return efforts;
}

// Flags Unlikely Resolved Effort: imputed hours beyond the daily cap scaled
// by the elapsed days of the commit's CTD (single-day cap when CTD is
// absent). The comparison is strict; non-imputed commits never flag.
inline void evaluate_ure(std::vector<ImputedEffort>& efforts, const AnalysisConfig& cfg) {
    const double cap = cfg.ure_daily_cap_hours;
    for (ImputedEffort& e : efforts) {
        e.allowance_hours =
            e.ctd_hours ? cap * std::max(1.0, *e.ctd_hours / 24.0) : cap;
        e.ure_flag = e.was_imputed && e.reh_hours > e.allowance_hours;
    }
}

struct MethodComparison {
    std::size_t ure_mean = 0;
    std::size_t ure_mean_high = 0;
    std::optional<double> improvement_percent;
};

inline std::optional<double> improvement_percent(std::size_t ure_mean,
                                                 std::size_t ure_mean_high) {
    if (ure_mean == 0) {
        return std::nullopt;
    }
    return 100.0 *
           (static_cast<double>(ure_mean) - static_cast<double>(ure_mean_high)) /
           static_cast<double>(ure_mean);
}

// Relative URE reduction of the mean-high method over the mean method.
// Both lists must cover the same commits.
inline MethodComparison compare_methods(std::span<const ImputedEffort> efforts_mean,
                                        std::span<const ImputedEffort> efforts_mean_high) {
    if (efforts_mean.size() != efforts_mean_high.size()) {
        throw MismatchedCommitSets("method effort lists differ in size");
    }
    std::vector<std::string_view> a, b;
    a.reserve(efforts_mean.size());
    b.reserve(efforts_mean_high.size());
    for (const ImputedEffort& e : efforts_mean) a.push_back(e.commit_id);
    for (const ImputedEffort& e : efforts_mean_high) b.push_back(e.commit_id);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
        throw MismatchedCommitSets("method effort lists cover different commits");
    }

    MethodComparison cmp;
    for (const ImputedEffort& e : efforts_mean) cmp.ure_mean += e.ure_flag ? 1 : 0;
    for (const ImputedEffort& e : efforts_mean_high) cmp.ure_mean_high += e.ure_flag ? 1 : 0;
    cmp.improvement_percent = improvement_percent(cmp.ure_mean, cmp.ure_mean_high);
    return cmp;
}

}  // namespace crim

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "crim/classify.hpp"
#include "crim/errors.hpp"
#include "crim/imputation.hpp"
#include "crim/stats.hpp"

namespace crim {

// The aggregate report for one dataset and both rate methods. The count
// identities (imputed = no_ctd + disqualified + unbound, non-imputed =
// quick_remedy + model) are structural and enforced, not just documented.
struct CrimMetrics {
    double mmcr_wpm = 0.0;
    double mhmcr_wpm = 0.0;
    std::size_t count_no_ctd = 0;
    std::size_t count_quick_remedy = 0;
    std::size_t count_model = 0;
    std::size_t count_disqualified = 0;
    std::size_t count_unbound = 0;
    std::size_t count_imputed = 0;
    std::size_t count_non_imputed = 0;
    std::size_t count_ure_mhmcr = 0;
    std::size_t count_ure_mmcr = 0;
    std::optional<double> improvement_percent;

    bool mcr_fallback_used = false;
    std::optional<double> median_mcr_wpm;          // set when rate_method=median
    std::optional<std::size_t> count_ure_median;   // likewise

    void validate() const {
        if (count_imputed != count_no_ctd + count_disqualified + count_unbound) {
            throw InternalInconsistency("imputed count does not match its categories");
        }
        if (count_non_imputed != count_quick_remedy + count_model) {
            throw InternalInconsistency("non-imputed count does not match its categories");
        }
        if (count_ure_mhmcr > count_ure_mmcr) {
            throw InternalInconsistency("mhMCR URE count exceeds mMCR URE count");
        }
    }
};

inline CrimMetrics build_crim_metrics(const ClassifiedDataset& dataset,
                                      const McrEstimates& estimates,
                                      const MethodComparison& comparison) {
    CrimMetrics m;
    m.mmcr_wpm = estimates.mmcr_wpm;
    m.mhmcr_wpm = estimates.mhmcr_wpm;
    m.mcr_fallback_used = estimates.fallback_used;
    m.count_no_ctd = dataset.counts.no_ctd;
    m.count_quick_remedy = dataset.counts.quick_remedy;
    m.count_model = dataset.counts.model;
    m.count_disqualified = dataset.counts.disqualified;
    m.count_unbound = dataset.counts.unbound;
    m.count_imputed = m.count_no_ctd + m.count_disqualified + m.count_unbound;
    m.count_non_imputed = m.count_quick_remedy + m.count_model;
    m.count_ure_mhmcr = comparison.ure_mean_high;
    m.count_ure_mmcr = comparison.ure_mean;
    m.improvement_percent = comparison.improvement_percent;
    if (m.count_imputed + m.count_non_imputed != dataset.counts.total() ||
        dataset.counts.model_candidate != 0) {
        throw InternalInconsistency("classification left unresolved observations");
    }
    m.validate();
    return m;
}

// Descriptive statistics over the observations that carry a CTD (rows
// without one have no rate either).
struct DatasetStatistics {
    DescriptiveStats ctd_hours;
    DescriptiveStats size_words;
    DescriptiveStats rate_wpm;
};

inline DatasetStatistics dataset_statistics(std::span<const CommitObservation> observations) {
    std::vector<double> ctds, sizes, rates;
    for (const CommitObservation& obs : observations) {
        if (!obs.ctd_hours) continue;
        ctds.push_back(*obs.ctd_hours);
        sizes.push_back(static_cast<double>(obs.size_words));
        rates.push_back(obs.rate_wpm.value_or(0.0));
    }
    if (ctds.empty()) {
        throw EmptyInput("no observation carries a CTD");
    }
    return DatasetStatistics{describe(ctds), describe(sizes), describe(rates)};
}

namespace detail {

inline std::string format_sig6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

inline std::string format_fixed3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return std::string(buf);
}

inline nlohmann::ordered_json stats_to_json(const DescriptiveStats& d) {
    return nlohmann::ordered_json{{"count", d.count}, {"mean", d.mean},
                                  {"std", d.std_dev}, {"min", d.min},
                                  {"q1", d.q1},       {"median", d.median},
                                  {"q3", d.q3},       {"max", d.max}};
}

inline void write_text_file(const std::filesystem::path& path, std::string_view body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

}  // namespace detail

// Scatter-chart data: `candidates.csv` holds every observation with a CTD,
// `iq4_model.csv` the Model subset. Rows sort by (ctd_hours, rate_wpm,
// class) and values carry 6 significant digits.
inline void emit_chart_data(const ClassifiedDataset& dataset,
                            const std::filesystem::path& out_dir) {
    struct Point {
        double ctd = 0.0;
        double rate = 0.0;
        std::string_view cls;
    };
    std::vector<Point> points;
    for (const CommitObservation& obs : dataset.observations) {
        if (!obs.ctd_hours) continue;
        points.push_back({*obs.ctd_hours, obs.rate_wpm.value_or(0.0),
                          to_string(obs.contribution_class)});
    }
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        return std::tie(a.ctd, a.rate, a.cls) < std::tie(b.ctd, b.rate, b.cls);
    });

    std::string candidates = "ctd_hours,rate_wpm,class\n";
    std::string iq4 = "ctd_hours,rate_wpm,class\n";
    for (const Point& p : points) {
        std::string row = detail::format_sig6(p.ctd) + "," + detail::format_sig6(p.rate) +
                          "," + std::string(p.cls) + "\n";
        candidates += row;
        if (p.cls == to_string(ContributionClass::Model)) {
            iq4 += row;
        }
    }
    detail::write_text_file(out_dir / "candidates.csv", candidates);
    detail::write_text_file(out_dir / "iq4_model.csv", iq4);
}

enum class ReportFormat { Json, Markdown };

inline nlohmann::ordered_json statistics_json(const std::optional<DatasetStatistics>& stats) {
    nlohmann::ordered_json j;
    if (stats) {
        j["ctd_hours"] = detail::stats_to_json(stats->ctd_hours);
        j["size_words"] = detail::stats_to_json(stats->size_words);
        j["rate_wpm"] = detail::stats_to_json(stats->rate_wpm);
    } else {
        j["ctd_hours"] = nullptr;
        j["size_words"] = nullptr;
        j["rate_wpm"] = nullptr;
    }
    return j;
}

// Serializes the metrics (and the statistics tables) to JSON or markdown.
// JSON keeps full precision; markdown rounds reals to 3 decimals, matching
// the two-column Metric/Value table shape. Output is byte-deterministic.
inline std::string render_report(const CrimMetrics& metrics,
                                 const std::optional<DatasetStatistics>& stats,
                                 ReportFormat format) {
    metrics.validate();
    if (format == ReportFormat::Json) {
        nlohmann::ordered_json j;
        j["mmcr_wpm"] = metrics.mmcr_wpm;
        j["mhmcr_wpm"] = metrics.mhmcr_wpm;
        j["count_no_ctd"] = metrics.count_no_ctd;
        j["count_quick_remedy"] = metrics.count_quick_remedy;
        j["count_model"] = metrics.count_model;
        j["count_disqualified"] = metrics.count_disqualified;
        j["count_unbound"] = metrics.count_unbound;
        j["count_imputed"] = metrics.count_imputed;
        j["count_non_imputed"] = metrics.count_non_imputed;
        j["count_ure_mhmcr"] = metrics.count_ure_mhmcr;
        j["count_ure_mmcr"] = metrics.count_ure_mmcr;
        if (metrics.improvement_percent) {
            j["improvement_percent"] = *metrics.improvement_percent;
        } else {
            j["improvement_percent"] = nullptr;
        }
        j["mcr_fallback_used"] = metrics.mcr_fallback_used;
        if (metrics.median_mcr_wpm) {
            j["median_mcr_wpm"] = *metrics.median_mcr_wpm;
        }
        if (metrics.count_ure_median) {
            j["count_ure_median"] = *metrics.count_ure_median;
        }
        j["statistics"] = statistics_json(stats);
        return j.dump(2) + "\n";
    }

    std::string md;
    md += "# CRIM Metrics\n\n";
    md += "| Metric | Value |\n";
    md += "| --- | --- |\n";
    const auto real_row = [&](std::string_view label, double v) {
        md += "| " + std::string(label) + " | " + detail::format_fixed3(v) + " |\n";
    };
    const auto count_row = [&](std::string_view label, std::size_t v) {
        md += "| " + std::string(label) + " | " + std::to_string(v) + " |\n";
    };
    real_row("Mean Model Contribution Rate (wpm)", metrics.mmcr_wpm);
    real_row("Mean-High Model Contribution Rate (wpm)", metrics.mhmcr_wpm);
    if (metrics.median_mcr_wpm) {
        real_row("Median Model Contribution Rate (wpm)", *metrics.median_mcr_wpm);
    }
    count_row("Count of Commits without a CTD value", metrics.count_no_ctd);
    count_row("Count of Quick Remedy Commits", metrics.count_quick_remedy);
    count_row("Count of Model Contribution Commits", metrics.count_model);
    count_row("Count of Disqualified Model Contribution Commits", metrics.count_disqualified);
    count_row("Count of Unbound Commits", metrics.count_unbound);
    count_row("Count of Imputed Commits", metrics.count_imputed);
    count_row("Count of Non-Imputed Commits", metrics.count_non_imputed);
    count_row("Count of mhMCR Based URE Commits", metrics.count_ure_mhmcr);
    count_row("Count of mMCR Based URE Commits", metrics.count_ure_mmcr);
    if (metrics.count_ure_median) {
        count_row("Count of Median Based URE Commits", *metrics.count_ure_median);
    }
    if (metrics.improvement_percent) {
        real_row("mhMCR over mMCR Improvement Percent", *metrics.improvement_percent);
    } else {
        md += "| mhMCR over mMCR Improvement Percent | n/a |\n";
    }
    if (metrics.mcr_fallback_used) {
        md += "\nNote: the mean-high rate fell back to the kept-candidate mean"
              " (degenerate or undersized Q4).\n";
    }

    if (stats) {
        md += "\n## Dataset Statistics\n\n";
        md += "| | CTD Hours | Levenshtein Word Distance | Contribution Rate (WPM) |\n";
        md += "| --- | --- | --- | --- |\n";
        const auto stat_row = [&](std::string_view label, auto get) {
            md += "| " + std::string(label) + " | " + get(stats->ctd_hours) + " | " +
                  get(stats->size_words) + " | " + get(stats->rate_wpm) + " |\n";
        };
        stat_row("count", [](const DescriptiveStats& d) { return std::to_string(d.count); });
        stat_row("mean", [](const DescriptiveStats& d) { return detail::format_fixed3(d.mean); });
        stat_row("std", [](const DescriptiveStats& d) { return detail::format_fixed3(d.std_dev); });
        stat_row("min", [](const DescriptiveStats& d) { return detail::format_fixed3(d.min); });
        stat_row("25%", [](const DescriptiveStats& d) { return detail::format_fixed3(d.q1); });
        stat_row("50%", [](const DescriptiveStats& d) { return detail::format_fixed3(d.median); });
        stat_row("75%", [](const DescriptiveStats& d) { return detail::format_fixed3(d.q3); });
        stat_row("max", [](const DescriptiveStats& d) { return detail::format_fixed3(d.max); });
    }
    return md;
}

}  // namespace crim

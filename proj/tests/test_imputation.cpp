#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "crim/imputation.hpp"
#include "crim/pipeline.hpp"
#include "support/test_util.hpp"

using Catch::Approx;
using testutil::make_commit;

namespace {

// Eight candidate commits with rates 1..8 wpm, one-hour gaps.
// 60*r words over 1 h = r wpm.
std::vector<crim::RawCommit> ladder_commits() {
    std::vector<crim::RawCommit> commits;
    commits.push_back(make_commit("s0", "a@x.com", 0, 1));
    for (int i = 1; i <= 8; ++i) {
        commits.push_back(make_commit("s" + std::to_string(i), "a@x.com", 3600 * i,
                                      static_cast<std::uint64_t>(60 * i)));
    }
    return commits;
}

crim::ClassifiedDataset classify(std::vector<crim::RawCommit> commits,
                                 crim::AnalysisConfig cfg = {}) {
    crim::CtdResult ctds = crim::compute_ctds(crim::build_timelines(commits));
    return crim::classify_dataset(std::move(ctds.observations), cfg);
}

}  // namespace

TEST_CASE("contribution rate converts hours to words per minute") {
    CHECK(crim::contribution_rate(120, 1.0) == 2.0);
    CHECK(crim::contribution_rate(0, 5.0) == 0.0);
    // Published dataset-1 medians: 10 words over 47.66 h lands in the same
    // order of magnitude as the reported median rate 0.00491.
    const double rate = crim::contribution_rate(10, 47.664444);
    CHECK(rate == Approx(0.003497).margin(1e-5));
    CHECK(rate > 0.0005);
    CHECK(rate < 0.05);
    CHECK_THROWS_AS(crim::contribution_rate(10, 0.0), crim::NonpositiveCtd);
    CHECK_THROWS_AS(crim::contribution_rate(10, -1.0), crim::NonpositiveCtd);
}

TEST_CASE("mcr estimates on the 1..8 rate ladder") {
    crim::AnalysisConfig cfg;
    const crim::ClassifiedDataset dataset = classify(ladder_commits(), cfg);
    REQUIRE(dataset.counts.model == 2);
    const crim::McrEstimates est = crim::compute_mcr(dataset);
    CHECK(est.mmcr_wpm == Approx(4.5));
    CHECK(est.mhmcr_wpm == Approx(7.5));
    CHECK(est.median_mcr_wpm == Approx(4.5));
    CHECK(est.q4_count == 2);
    CHECK(est.kept_count == 8);
    CHECK_FALSE(est.fallback_used);
}

TEST_CASE("all-equal rates collapse both estimates via the fallback") {
    std::vector<crim::RawCommit> commits;
    commits.push_back(make_commit("e0", "a@x.com", 0, 1));
    for (int i = 1; i <= 9; ++i) {
        commits.push_back(
            make_commit("e" + std::to_string(i), "a@x.com", 3600 * i, 120));
    }
    const crim::ClassifiedDataset dataset = classify(std::move(commits));
    const crim::McrEstimates est = crim::compute_mcr(dataset);
    CHECK(est.fallback_used);
    CHECK(est.mmcr_wpm == Approx(2.0));
    CHECK(est.mhmcr_wpm == Approx(2.0));
}

TEST_CASE("undersized kept set triggers the fallback") {
    crim::AnalysisConfig cfg;  // min_candidates_for_quartiles = 8
    std::vector<crim::RawCommit> commits;
    commits.push_back(make_commit("u0", "a@x.com", 0, 1));
    for (int i = 1; i <= 5; ++i) {
        commits.push_back(make_commit("u" + std::to_string(i), "a@x.com", 3600 * i,
                                      static_cast<std::uint64_t>(60 * i)));
    }
    const crim::ClassifiedDataset dataset = classify(std::move(commits), cfg);
    const crim::McrEstimates est = crim::compute_mcr(dataset);
    CHECK(est.fallback_used);
    CHECK(est.mhmcr_wpm == Approx(est.mmcr_wpm));
}

TEST_CASE("no candidates raises NoCandidates") {
    std::vector<crim::RawCommit> commits{
        make_commit("x0", "a@x.com", 0, 10),
        make_commit("x1", "a@x.com", 600, 10),        // 10 min: quick remedy
        make_commit("x2", "a@x.com", 720000, 10),     // huge gap: unbound
    };
    const crim::ClassifiedDataset dataset = classify(std::move(commits));
    CHECK_THROWS_AS(crim::compute_mcr(dataset), crim::NoCandidates);
}

TEST_CASE("imputation assigns size-over-rate hours to anti-model commits") {
    const crim::ClassifiedDataset dataset = classify(ladder_commits());
    crim::McrEstimates est = crim::compute_mcr(dataset);
    est.mmcr_wpm = 2.0;  // pin the rate for arithmetic clarity
    const std::vector<crim::ImputedEffort> efforts =
        crim::impute_effort(dataset, est, crim::RateMethod::Mean);
    REQUIRE(efforts.size() == dataset.observations.size());
    for (std::size_t i = 0; i < efforts.size(); ++i) {
        const crim::ImputedEffort& e = efforts[i];
        const crim::CommitObservation& o = dataset.observations[i];
        switch (o.contribution_class) {
            case crim::ContributionClass::NoCtd:
            case crim::ContributionClass::DisqualifiedCandidate:
            case crim::ContributionClass::Unbound:
                CHECK(e.was_imputed);
                CHECK(e.reh_hours ==
                      Approx(static_cast<double>(o.size_words) / (2.0 * 60.0)));
                break;
            default:
                CHECK_FALSE(e.was_imputed);
                CHECK(e.reh_hours == Approx(o.ctd_hours.value_or(0.0)));
        }
    }
}

TEST_CASE("imputed hours arithmetic: 960 words at 2 wpm is 8 hours") {
    crim::ClassifiedDataset dataset;
    crim::CommitObservation o;
    o.commit_id = "solo";
    o.size_words = 960;
    o.contribution_class = crim::ContributionClass::NoCtd;
    dataset.observations.push_back(o);
    crim::McrEstimates est;
    est.mmcr_wpm = 2.0;
    const auto efforts = crim::impute_effort(dataset, est, crim::RateMethod::Mean);
    CHECK(efforts[0].reh_hours == 8.0);
}

TEST_CASE("zero size imputes zero hours even with a zero rate") {
    crim::ClassifiedDataset dataset;
    crim::CommitObservation o;
    o.commit_id = "z";
    o.size_words = 0;
    o.contribution_class = crim::ContributionClass::Unbound;
    o.ctd_hours = 100.0;
    dataset.observations.push_back(o);
    crim::McrEstimates zero_rate;  // all rates zero
    const auto efforts = crim::impute_effort(dataset, zero_rate, crim::RateMethod::Mean);
    CHECK(efforts[0].reh_hours == 0.0);

    crim::CommitObservation nonzero = o;
    nonzero.commit_id = "nz";
    nonzero.size_words = 5;
    dataset.observations.push_back(nonzero);
    CHECK_THROWS_AS(crim::impute_effort(dataset, zero_rate, crim::RateMethod::Mean),
                    crim::ZeroRate);
}

TEST_CASE("ure evaluation follows the daily allowance") {
    crim::AnalysisConfig cfg;  // 8 h cap
    std::vector<crim::ImputedEffort> efforts(3);

    efforts[0].was_imputed = true;  // no CTD: single-day cap
    efforts[0].reh_hours = 9.0;

    efforts[1].was_imputed = true;  // 72 h elapsed: allowance 24 h
    efforts[1].ctd_hours = 72.0;
    efforts[1].reh_hours = 20.0;

    efforts[2].was_imputed = true;  // exactly at the allowance: not flagged
    efforts[2].ctd_hours = 24.0;
    efforts[2].reh_hours = 8.0;

    crim::evaluate_ure(efforts, cfg);
    CHECK(efforts[0].allowance_hours == 8.0);
    CHECK(efforts[0].ure_flag);
    CHECK(efforts[1].allowance_hours == 24.0);
    CHECK_FALSE(efforts[1].ure_flag);
    CHECK(efforts[2].allowance_hours == 8.0);
    CHECK_FALSE(efforts[2].ure_flag);
}

TEST_CASE("short ctds keep the single-day allowance") {
    crim::AnalysisConfig cfg;
    std::vector<crim::ImputedEffort> efforts(1);
    efforts[0].was_imputed = true;
    efforts[0].ctd_hours = 2.0;  // max(1, 2/24) = 1 day
    efforts[0].reh_hours = 8.5;
    crim::evaluate_ure(efforts, cfg);
    CHECK(efforts[0].allowance_hours == 8.0);
    CHECK(efforts[0].ure_flag);
}

TEST_CASE("non-imputed commits never flag") {
    crim::AnalysisConfig cfg;
    std::vector<crim::ImputedEffort> efforts(1);
    efforts[0].was_imputed = false;
    efforts[0].reh_hours = 1000.0;
    crim::evaluate_ure(efforts, cfg);
    CHECK_FALSE(efforts[0].ure_flag);
}

TEST_CASE("compare_methods reproduces the published improvement percents") {
    const auto build = [](std::size_t total, std::size_t flagged) {
        std::vector<crim::ImputedEffort> efforts(total);
        for (std::size_t i = 0; i < total; ++i) {
            efforts[i].commit_id = "c" + std::to_string(i);
            efforts[i].was_imputed = true;
            efforts[i].ure_flag = i < flagged;
        }
        return efforts;
    };
    const struct {
        std::size_t mean, high;
        double percent;
    } cases[] = {{234, 196, 16.24}, {540, 377, 30.19}, {333, 227, 31.83}};
    for (const auto& c : cases) {
        const auto mean_efforts = build(600, c.mean);
        const auto high_efforts = build(600, c.high);
        const crim::MethodComparison cmp = crim::compare_methods(mean_efforts, high_efforts);
        CHECK(cmp.ure_mean == c.mean);
        CHECK(cmp.ure_mean_high == c.high);
        REQUIRE(cmp.improvement_percent.has_value());
        CHECK(*cmp.improvement_percent == Approx(c.percent).margin(0.005));
    }
}

TEST_CASE("improvement is absent when the mean method flags nothing") {
    CHECK_FALSE(crim::improvement_percent(0, 0).has_value());
    std::vector<crim::ImputedEffort> none(3);
    for (std::size_t i = 0; i < none.size(); ++i) {
        none[i].commit_id = "c" + std::to_string(i);
    }
    const crim::MethodComparison cmp = crim::compare_methods(none, none);
    CHECK_FALSE(cmp.improvement_percent.has_value());
}

TEST_CASE("mismatched commit sets are rejected") {
    std::vector<crim::ImputedEffort> a(2), b(2), c(1);
    a[0].commit_id = "x";
    a[1].commit_id = "y";
    b[0].commit_id = "x";
    b[1].commit_id = "z";
    c[0].commit_id = "x";
    CHECK_THROWS_AS(crim::compare_methods(a, b), crim::MismatchedCommitSets);
    CHECK_THROWS_AS(crim::compare_methods(a, c), crim::MismatchedCommitSets);
}

TEST_CASE("rate dominance: mhMCR never increases the URE count") {
    for (unsigned seed = 100; seed < 120; ++seed) {
        const std::vector<crim::RawCommit> commits = testutil::synthetic_dataset(seed);
        crim::AnalysisConfig cfg;
        crim::AnalysisResult result;
        try {
            result = crim::run_analysis(commits, cfg);
        } catch (const crim::NoCandidates&) {
            continue;
        }
        if (!result.estimates.fallback_used) {
            CHECK(result.estimates.mhmcr_wpm > result.estimates.mmcr_wpm);
        }
        CHECK(result.comparison.ure_mean_high <= result.comparison.ure_mean);
        if (result.comparison.improvement_percent) {
            CHECK(*result.comparison.improvement_percent >= 0.0);
        }
    }
}

TEST_CASE("ure flags are invariant under joint size scaling") {
    // Scaling all sizes by k scales the model rates by k, so every imputed
    // reh is unchanged and so are the flags.
    std::vector<crim::RawCommit> commits = testutil::synthetic_dataset(77);
    crim::AnalysisConfig cfg;
    const crim::AnalysisResult base = crim::run_analysis(commits, cfg);
    for (crim::RawCommit& c : commits) c.size_words *= 3;
    const crim::AnalysisResult scaled = crim::run_analysis(commits, cfg);
    REQUIRE(base.efforts_mean.size() == scaled.efforts_mean.size());
    for (std::size_t i = 0; i < base.efforts_mean.size(); ++i) {
        CHECK(base.efforts_mean[i].ure_flag == scaled.efforts_mean[i].ure_flag);
        CHECK(base.efforts_mean_high[i].ure_flag == scaled.efforts_mean_high[i].ure_flag);
    }
    CHECK(scaled.estimates.mmcr_wpm == Approx(3.0 * base.estimates.mmcr_wpm));
}

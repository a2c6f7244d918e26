// Minimal library walkthrough: build a small commit stream in memory, run
// the pipeline, and print the markdown report.

#include <iostream>
#include <vector>

#include "crim/crim.hpp"

int main() {
    std::vector<crim::RawCommit> commits;
    const auto add = [&](const char* id, const char* author, const char* iso,
                         std::uint64_t words) {
        crim::RawCommit c;
        c.commit_id = id;
        c.author_id = author;
        c.author_timestamp = *crim::parse_iso8601_utc(iso);
        c.size_words = words;
        commits.push_back(std::move(c));
    };

    add("a1", "dev@example.com", "2024-03-04T09:00:00Z", 40);
    add("a2", "dev@example.com", "2024-03-04T10:00:00Z", 120);   // 1 h gap: candidate
    add("a3", "dev@example.com", "2024-03-04T10:10:00Z", 6);     // quick follow-up fix
    add("a4", "dev@example.com", "2024-03-04T14:10:00Z", 480);   // 4 h gap: candidate
    add("a5", "dev@example.com", "2024-03-06T09:00:00Z", 90);    // multi-day gap: unbound
    add("a6", "dev@example.com", "2024-03-06T11:00:00Z", 300);
    add("a7", "dev@example.com", "2024-03-06T12:00:00Z", 150);
    add("a8", "dev@example.com", "2024-03-06T14:00:00Z", 700);
    add("a9", "dev@example.com", "2024-03-06T15:00:00Z", 90);
    add("b1", "peer@example.com", "2024-03-04T09:30:00Z", 55);
    add("b2", "peer@example.com", "2024-03-04T11:30:00Z", 240);
    add("b3", "peer@example.com", "2024-03-04T13:00:00Z", 9000); // mass refactor
    add("b4", "peer@example.com", "2024-03-04T16:00:00Z", 180);
    add("b5", "peer@example.com", "2024-03-05T08:00:00Z", 60);

    crim::AnalysisConfig cfg;
    cfg.min_candidates_for_quartiles = 4;
    const crim::AnalysisResult result = crim::run_analysis(commits, cfg);
    std::cout << crim::render_report(result.metrics, result.statistics,
                                     crim::ReportFormat::Markdown);
    return 0;
}

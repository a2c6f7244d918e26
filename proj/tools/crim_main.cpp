// crim: classify commit contributions, estimate model contribution rates,
// impute effort hours, and report URE statistics for a repository or a
// commit CSV.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crim/crim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct ExtractArgs {
    std::string repo_path;
    std::string out_path;
    bool include_merges = false;
    unsigned jobs = 0;
};

struct AnalyzeArgs {
    std::string repo_path;
    std::string csv_path;
    std::string config_path;
    std::string out_dir;
    unsigned jobs = 0;
};

struct StatsArgs {
    std::string csv_path;
};

crim::AnalysisConfig load_config_or_default(const std::string& path) {
    if (path.empty()) {
        return crim::AnalysisConfig{};
    }
    return crim::load_config(path);
}

std::vector<crim::RawCommit> load_commits(const AnalyzeArgs& args,
                                          const crim::AnalysisConfig& cfg,
                                          std::size_t& dropped_rows) {
    if (!args.csv_path.empty()) {
        crim::CsvReadResult read = crim::read_commit_csv(args.csv_path);
        dropped_rows = read.dropped_rows;
        return std::move(read.commits);
    }
    crim::ExtractResult extracted = crim::extract_commits(args.repo_path, cfg, args.jobs);
    for (const crim::SkippedCommit& s : extracted.skipped) {
        std::cerr << "warning: skipped commit " << s.commit_id << ": " << s.reason << "\n";
    }
    return std::move(extracted.commits);
}

int run_extract(const ExtractArgs& args) {
    crim::AnalysisConfig cfg;
    cfg.exclude_merges = !args.include_merges;
    crim::ExtractResult result = crim::extract_commits(args.repo_path, cfg, args.jobs);
    for (const crim::SkippedCommit& s : result.skipped) {
        std::cerr << "warning: skipped commit " << s.commit_id << ": " << s.reason << "\n";
    }
    crim::write_commit_csv(result.commits, args.out_path);
    std::cout << "wrote " << result.commits.size() << " commits to " << args.out_path;
    if (result.merges_excluded > 0) {
        std::cout << " (" << result.merges_excluded << " merges excluded)";
    }
    std::cout << "\n";
    return kExitOk;
}

int run_analyze(const AnalyzeArgs& args) {
    const crim::AnalysisConfig cfg = load_config_or_default(args.config_path);
    std::size_t dropped_rows = 0;
    std::vector<crim::RawCommit> commits = load_commits(args, cfg, dropped_rows);
    if (dropped_rows > 0) {
        std::cerr << "warning: dropped " << dropped_rows << " malformed CSV rows\n";
    }

    const crim::AnalysisResult result = crim::run_analysis(std::move(commits), cfg);

    const fs::path out_dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw crim::IoError("cannot create output directory: " + out_dir.string());
    }

    crim::detail::write_text_file(
        out_dir / "report.json",
        crim::render_report(result.metrics, result.statistics, crim::ReportFormat::Json));
    crim::detail::write_text_file(
        out_dir / "report.md",
        crim::render_report(result.metrics, result.statistics, crim::ReportFormat::Markdown));
    crim::detail::write_text_file(out_dir / "stats.json",
                                  crim::statistics_json(result.statistics).dump(2) + "\n");
    crim::emit_chart_data(result.dataset, out_dir);

    std::cout << "analyzed " << result.dataset.observations.size() << " commits; report in "
              << out_dir.string() << "\n";
    return kExitOk;
}

int run_stats(const StatsArgs& args) {
    crim::CsvReadResult read = crim::read_commit_csv(args.csv_path);
    if (read.dropped_rows > 0) {
        std::cerr << "warning: dropped " << read.dropped_rows << " malformed CSV rows\n";
    }
    const crim::CtdResult ctds = crim::compute_ctds(crim::build_timelines(read.commits));
    const crim::DatasetStatistics stats = crim::dataset_statistics(ctds.observations);

    std::printf("%-8s %16s %28s %26s\n", "", "CTD Hours", "Levenshtein Word Distance",
                "Contribution Rate (WPM)");
    const auto row = [](const char* label, auto get) {
        std::printf("%-8s %16s %28s %26s\n", label, get.c.c_str(), get.s.c_str(),
                    get.r.c_str());
    };
    struct Cells {
        std::string c, s, r;
    };
    const auto cells = [&](auto fn) {
        return Cells{fn(stats.ctd_hours), fn(stats.size_words), fn(stats.rate_wpm)};
    };
    const auto num = [](const crim::DescriptiveStats& d) { return std::to_string(d.count); };
    const auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    row("count", cells(num));
    row("mean", cells([&](const crim::DescriptiveStats& d) { return fmt(d.mean); }));
    row("std", cells([&](const crim::DescriptiveStats& d) { return fmt(d.std_dev); }));
    row("min", cells([&](const crim::DescriptiveStats& d) { return fmt(d.min); }));
    row("25%", cells([&](const crim::DescriptiveStats& d) { return fmt(d.q1); }));
    row("50%", cells([&](const crim::DescriptiveStats& d) { return fmt(d.median); }));
    row("75%", cells([&](const crim::DescriptiveStats& d) { return fmt(d.q3); }));
    row("max", cells([&](const crim::DescriptiveStats& d) { return fmt(d.max); }));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Commit contribution rate analysis (CRIM)"};
    app.require_subcommand(1);

    ExtractArgs extract_args;
    CLI::App* extract = app.add_subcommand(
        "extract", "Extract commit metadata and word-distance sizes to a canonical CSV");
    extract->add_option("repo_path", extract_args.repo_path, "Path to a git repository")
        ->required();
    extract->add_option("--out", extract_args.out_path, "Output CSV path")->required();
    extract->add_flag("--include-merges", extract_args.include_merges,
                      "Keep merge commits (sized against the first parent)");
    extract->add_option("--jobs", extract_args.jobs, "Sizing worker threads (0 = auto)");

    AnalyzeArgs analyze_args;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Run the full classification/imputation pipeline and write reports");
    analyze->add_option("repo_path", analyze_args.repo_path, "Path to a git repository");
    analyze->add_option("--csv", analyze_args.csv_path, "Analyze a commit CSV instead");
    analyze->add_option("--config", analyze_args.config_path, "Config file (key = value)");
    analyze->add_option("--out-dir", analyze_args.out_dir, "Output directory")->required();
    analyze->add_option("--jobs", analyze_args.jobs, "Sizing worker threads (0 = auto)");

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand(
        "stats", "Print descriptive statistics for a commit CSV");
    stats->add_option("--csv", stats_args.csv_path, "Commit CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (extract->parsed()) {
            return run_extract(extract_args);
        }
        if (analyze->parsed()) {
            if (analyze_args.repo_path.empty() == analyze_args.csv_path.empty()) {
                std::cerr << "error: provide exactly one of <repo_path> or --csv\n";
                return kExitUsage;
            }
            return run_analyze(analyze_args);
        }
        if (stats->parsed()) {
            return run_stats(stats_args);
        }
    } catch (const crim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const crim::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const crim::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compminer/cluster.hpp"
#include "compminer/ingest.hpp"
#include "compminer/log.hpp"
#include "compminer/metrics.hpp"
#include "compminer/model.hpp"
#include "compminer/report.hpp"
#include "compminer/synth.hpp"
#include "compminer/version.hpp"

namespace fs = std::filesystem;
using namespace compminer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitIo = 2;

std::string now_utc() {
    const auto now =
        std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    return format_timestamp(Timestamp{now.time_since_epoch()});
}

struct DetectArgs {
    std::string input;
    std::string format;
    std::string project;
    std::string commit;
    std::string timestamp;
    std::string out_dir = ".";
    std::vector<std::string> emit;
    bool no_default_filters = false;
    bool keep_constructors = false;
    std::vector<std::string> exclude_packages;
    std::size_t min_size = 2;
    std::string pin_timestamp;
};

bool write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

int run_detect(const DetectArgs& args) {
    std::ifstream in(args.input, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open input file: " << args.input << "\n";
        return kExitIo;
    }

    std::vector<RefactoringRecord> records;
    if (args.format == "jsonl") {
        records = parse_jsonl(in);
    } else if (args.format == "csv") {
        OracleCsvResult result = parse_oracle_csv(in);
        if (result.skipped_unselected > 0) {
            log_info(std::to_string(result.skipped_unselected) +
                     " rows skipped (operations outside the selected kinds)");
        }
        records = std::move(result.records);
    } else {  // miner-text
        if (args.project.empty() || args.commit.empty()) {
            std::cerr << "miner-text input requires --project and --commit\n";
            return kExitParse;
        }
        MessageContext ctx;
        ctx.project = args.project;
        ctx.commit = args.commit;
        if (!args.timestamp.empty()) ctx.timestamp = parse_timestamp(args.timestamp);
        MinerTextResult result = parse_miner_text(in, ctx);
        records = std::move(result.records);
    }

    FilterConfig filters;
    if (args.no_default_filters) {
        filters.excluded_package_fragments.clear();
        filters.exclude_constructors = false;
    }
    if (args.keep_constructors) filters.exclude_constructors = false;
    for (const std::string& fragment : args.exclude_packages) {
        std::string lowered = fragment;
        for (char& c : lowered) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        if (!lowered.empty()) filters.excluded_package_fragments.push_back(lowered);
    }

    FilterResult filtered = apply_filters(records, filters);
    if (filtered.dropped_total() > 0) {
        log_info("filters dropped " + std::to_string(filtered.dropped_total()) +
                 " records (package " + std::to_string(filtered.dropped_package) +
                 ", constructor " + std::to_string(filtered.dropped_constructor) +
                 ", project " + std::to_string(filtered.dropped_project) + ")");
    }

    ReportBundle bundle;
    bundle.composites = cluster(filtered.kept, args.min_size);
    bundle.stats = corpus_stats(filtered.kept, bundle.composites);
    bundle.metadata.tool_version = std::string(kToolVersion);
    bundle.metadata.input_digest = input_digest(filtered.kept);
    bundle.metadata.generated_at =
        args.pin_timestamp.empty() ? now_utc()
                                   : format_timestamp(parse_timestamp(args.pin_timestamp));
    bundle.metadata.filters = filters;

    if (!args.emit.empty()) {
        std::error_code ec;
        fs::create_directories(args.out_dir, ec);
        if (ec) {
            std::cerr << "cannot create output directory: " << args.out_dir << "\n";
            return kExitIo;
        }
        for (const std::string& what : args.emit) {
            if (what == "json") {
                if (!write_file(fs::path(args.out_dir) / "report.json", emit_json(bundle))) {
                    std::cerr << "cannot write report.json\n";
                    return kExitIo;
                }
            } else if (what == "markdown") {
                if (!write_file(fs::path(args.out_dir) / "report.md",
                                emit_markdown(bundle))) {
                    std::cerr << "cannot write report.md\n";
                    return kExitIo;
                }
            } else {  // dot
                std::size_t ordinal = 0;
                for (const Composite& composite : bundle.composites) {
                    ++ordinal;
                    const std::string name = dot_file_name(composite, ordinal);
                    const std::string stem = name.substr(0, name.size() - 4);
                    if (!write_file(fs::path(args.out_dir) / name,
                                    emit_dot(composite, stem))) {
                        std::cerr << "cannot write " << name << "\n";
                        return kExitIo;
                    }
                }
            }
        }
    }

    char coverage[16];
    std::snprintf(coverage, sizeof(coverage), "%.1f",
                  bundle.stats.singles_in_composites_percent);
    std::cout << bundle.stats.singles_total << " singles, " << bundle.stats.composites_total
              << " composites, " << coverage << "% coverage\n";
    return kExitOk;
}

int run_stats(const std::string& report_path) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open report file: " << report_path << "\n";
        return kExitIo;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const ParsedReport report = parse_report(buffer.str());
    std::cout << render_frequency_table(report.stats) << "\n"
              << render_distribution_tables(report.stats);
    return kExitOk;
}

struct SynthArgs {
    std::uint64_t seed = 0;
    std::size_t singles = 100;
    std::string mix;
    double noise = 0.0;
    double multi_commit = 0.0;
    std::string project = "synth";
    std::string out_dir = ".";
};

std::map<CompositeKind, double> parse_mix(const std::string& text) {
    std::map<CompositeKind, double> mix;
    std::stringstream stream(text);
    std::string entry;
    while (std::getline(stream, entry, ',')) {
        if (entry.empty()) continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("bad --composite-mix entry '" + entry +
                                        "' (expected kind=weight)");
        }
        const std::string tag = entry.substr(0, eq);
        const auto kind = composite_kind_from_tag(tag);
        if (!kind) throw std::invalid_argument("unknown composite kind '" + tag + "'");
        mix[*kind] = std::stod(entry.substr(eq + 1));
    }
    return mix;
}

int run_synth(const SynthArgs& args) {
    SynthOptions options;
    options.seed = args.seed;
    options.singles = args.singles;
    options.noise = args.noise;
    options.multi_commit = args.multi_commit;
    options.project = args.project;
    if (!args.mix.empty()) options.mix = parse_mix(args.mix);

    const SynthDataset dataset = synthesize(options);

    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec) {
        std::cerr << "cannot create output directory: " << args.out_dir << "\n";
        return kExitIo;
    }
    if (!write_file(fs::path(args.out_dir) / "dataset.jsonl", to_jsonl(dataset.records)) ||
        !write_file(fs::path(args.out_dir) / "ground_truth.json",
                    ground_truth_json(dataset, options))) {
        std::cerr << "cannot write synth outputs\n";
        return kExitIo;
    }
    std::cout << dataset.records.size() << " records, " << dataset.planted.size()
              << " planted composites, " << dataset.noise_ids.size() << " noise\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) +
                 " - detects composite refactorings in streams of single "
                 "refactoring operations"};
    app.require_subcommand(1);

    DetectArgs detect_args;
    CLI::App* detect = app.add_subcommand(
        "detect", "Cluster single refactoring operations into composites");
    detect->add_option("--input", detect_args.input, "Input file")->required();
    detect->add_option("--format", detect_args.format, "Input format")
        ->required()
        ->check(CLI::IsMember({"jsonl", "csv", "miner-text"}));
    detect->add_option("--project", detect_args.project,
                       "Project context (miner-text input)");
    detect->add_option("--commit", detect_args.commit, "Commit context (miner-text input)");
    detect->add_option("--timestamp", detect_args.timestamp,
                       "Commit timestamp, ISO-8601 UTC (miner-text input)");
    detect->add_option("--out", detect_args.out_dir, "Output directory");
    detect->add_option("--emit", detect_args.emit, "Artifacts to write (repeatable)")
        ->check(CLI::IsMember({"json", "markdown", "dot"}));
    detect->add_flag("--no-default-filters", detect_args.no_default_filters,
                     "Start from an empty filter configuration");
    detect->add_option("--exclude-package", detect_args.exclude_packages,
                       "Additional package fragment to exclude (repeatable)");
    detect->add_flag("--keep-constructors", detect_args.keep_constructors,
                     "Do not drop constructor refactorings");
    detect->add_option("--min-size", detect_args.min_size, "Minimum composite size")
        ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(1U << 20)));
    detect->add_option("--pin-timestamp", detect_args.pin_timestamp,
                       "Pin the report generation timestamp (ISO-8601 UTC)");

    std::string report_path;
    CLI::App* stats = app.add_subcommand("stats", "Print tables from a JSON report");
    stats->add_option("--report", report_path, "report.json from a prior detect run")
        ->required();

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand(
        "synth", "Generate a deterministic synthetic dataset with ground truth");
    synth->add_option("--seed", synth_args.seed, "Generator seed");
    synth->add_option("--singles", synth_args.singles, "Number of records to generate");
    synth->add_option("--composite-mix", synth_args.mix,
                      "Weights, e.g. method_composition=3,class_decomposition=1");
    synth->add_option("--noise", synth_args.noise, "Fraction of singleton noise records")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--multi-commit", synth_args.multi_commit,
                      "Fraction of composites spanning multiple commits")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--project", synth_args.project, "Project name for the records");
    synth->add_option("--out", synth_args.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (detect->parsed()) return run_detect(detect_args);
        if (stats->parsed()) return run_stats(report_path);
        if (synth->parsed()) return run_synth(synth_args);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const fs::filesystem_error& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

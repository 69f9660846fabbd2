// signet: signed temporal network analysis CLI.
//
// Subcommands mirror the report groups: ingest-check validates input,
// metrics/triads/dynamics/nullmodel/correlate emit one group each, and
// `all` composes them. Exit codes: 0 ok, 2 parse, 3 validation,
// 4 numerical degeneracy, 5 I/O.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "signet/pipeline.hpp"

namespace {

struct CliOptions {
    std::string input;
    std::string responses;
    std::string out = "reports";
    std::uint64_t seed = 0;
    int replicates = 30;
    std::string method = "pearson";
    std::string missing = "zero_fill";
    bool overwrite = false;
    bool keep_partial = false;
};

signet::RunConfig to_run_config(const CliOptions& opt) {
    signet::RunConfig config;
    config.input_network_path = opt.input;
    if (!opt.responses.empty()) config.input_response_path = opt.responses;
    config.output_directory = opt.out;
    config.seed = opt.seed;
    config.replicates = opt.replicates;
    if (opt.method == "pearson") {
        config.correlation_method = signet::CorrMethod::pearson;
    } else if (opt.method == "spearman") {
        config.correlation_method = signet::CorrMethod::spearman;
    } else {
        throw signet::ValidationError("--method must be pearson or spearman");
    }
    if (opt.missing == "zero_fill") {
        config.missing_policy = signet::MissingPolicy::zero_fill;
    } else if (opt.missing == "mark_missing") {
        config.missing_policy = signet::MissingPolicy::mark_missing;
    } else {
        throw signet::ValidationError("--missing must be zero_fill or mark_missing");
    }
    config.overwrite = opt.overwrite;
    config.keep_partial = opt.keep_partial;
    return config;
}

int run_ingest_check(const CliOptions& opt) {
    std::vector<signet::ParseWarning> warnings;
    signet::EpisodeSeries series = signet::load_network(opt.input, &warnings);
    std::size_t edges = 0;
    for (const auto& g : series.snapshots()) edges += g.edge_count();
    std::cout << "snapshots: " << series.size() << "\n"
              << "entities:  " << series.entity_universe().size() << "\n"
              << "edges:     " << edges << "\n";
    for (const auto& w : warnings) {
        std::cout << "warning (line " << w.line << "): " << w.message << "\n";
    }
    if (!opt.responses.empty()) {
        signet::ResponseSeries responses = signet::load_responses(opt.responses);
        signet::validate_alignment(series, responses);
        std::cout << "responses: " << responses.size() << " rows, aligned\n";
    }
    return 0;
}

int run_stage(const CliOptions& opt, signet::PipelineStage stage) {
    signet::Manifest manifest = signet::run_pipeline(to_run_config(opt), stage);
    std::cout << "wrote " << manifest.artifacts.size() << " report files + manifest.json to "
              << opt.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"signed temporal network analysis"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--input", opt.input, "network edge list (.csv or .json)")->required();
        cmd->add_option("--responses", opt.responses, "viewer response CSV");
        if (needs_out) {
            cmd->add_option("--out", opt.out, "output directory (default: reports)");
            cmd->add_option("--seed", opt.seed, "RNG seed for stochastic outputs");
            cmd->add_option("--replicates", opt.replicates, "null-model replicates (default 30)")
                ->check(CLI::PositiveNumber);
            cmd->add_option("--method", opt.method, "correlation method: pearson|spearman");
            cmd->add_option("--missing", opt.missing,
                            "missing policy: zero_fill|mark_missing");
            cmd->add_flag("--overwrite", opt.overwrite, "overwrite existing report files");
            cmd->add_flag("--keep-partial", opt.keep_partial,
                          "keep partial outputs when a stage fails");
        }
    };

    CLI::App* ingest = app.add_subcommand("ingest-check", "parse and validate inputs");
    add_common(ingest, false);
    CLI::App* metrics = app.add_subcommand("metrics", "degree/betweenness tables, correlations");
    add_common(metrics, true);
    CLI::App* triads = app.add_subcommand("triads", "triad census and balance summary");
    add_common(triads, true);
    CLI::App* dynamics = app.add_subcommand("dynamics", "edge changes, transitions, U series");
    add_common(dynamics, true);
    CLI::App* nullmodel = app.add_subcommand("nullmodel", "sign-shuffle expected imbalance");
    add_common(nullmodel, true);
    CLI::App* correlate = app.add_subcommand("correlate", "viewer-response partial correlations");
    add_common(correlate, true);
    CLI::App* all = app.add_subcommand("all", "run every stage");
    add_common(all, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return run_ingest_check(opt);
        if (metrics->parsed()) return run_stage(opt, signet::PipelineStage::metrics);
        if (triads->parsed()) return run_stage(opt, signet::PipelineStage::triads);
        if (dynamics->parsed()) return run_stage(opt, signet::PipelineStage::dynamics);
        if (nullmodel->parsed()) return run_stage(opt, signet::PipelineStage::nullmodel);
        if (correlate->parsed()) return run_stage(opt, signet::PipelineStage::correlate);
        if (all->parsed()) return run_stage(opt, signet::PipelineStage::all);
    } catch (const signet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signet/correlation.hpp"
#include "signet/dynamics.hpp"
#include "signet/error.hpp"
#include "signet/graph.hpp"
#include "signet/io.hpp"
#include "signet/metrics.hpp"
#include "signet/nullmodel.hpp"
#include "signet/responses.hpp"
#include "signet/triads.hpp"

namespace signet {

// Numbers in report files: fixed 12-significant-digit shortest form, NA for
// the missing marker. Integral values print without an exponent or trailing
// zeros, so re-parsing is loss-free for the magnitudes reports contain.
inline std::string fmt_num(double v) {
    if (is_missing(v)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

// Generic reader for the CSV reports: '#' comment rows, a header row, then
// data rows. Every CSV the pipeline writes round-trips through this.
struct CsvDocument {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline CsvDocument read_csv(std::istream& in) {
    CsvDocument doc;
    std::string line;
    while (std::getline(in, line)) {
        std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        if (stripped[0] == '#') {
            doc.comments.push_back(stripped);
            continue;
        }
        auto fields = detail::split_csv_row(line);
        if (doc.header.empty()) {
            doc.header = std::move(fields);
        } else {
            if (fields.size() != doc.header.size()) {
                throw ParseError("row width " + std::to_string(fields.size()) +
                                 " does not match header width " +
                                 std::to_string(doc.header.size()));
            }
            doc.rows.push_back(std::move(fields));
        }
    }
    if (doc.header.empty()) throw ParseError("CSV report has no header row");
    return doc;
}

struct RunConfig {
    std::filesystem::path input_network_path;
    std::optional<std::filesystem::path> input_response_path;
    std::filesystem::path output_directory;
    std::uint64_t seed = 0;
    int replicates = 30;
    CorrMethod correlation_method = CorrMethod::pearson;
    MissingPolicy missing_policy = MissingPolicy::zero_fill;
    bool overwrite = false;
    bool keep_partial = false;
};

struct ManifestEntry {
    std::string file;
    std::size_t bytes = 0;
    std::string fnv1a64;
};

struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> artifacts;
};

namespace detail {

// Buffers every artifact in memory, hashes it, and only then touches the
// filesystem. On error the files written so far are removed unless the
// config asks to keep them.
class ReportSink {
public:
    ReportSink(const RunConfig& config) : config_(config) {
        std::error_code ec;
        std::filesystem::create_directories(config.output_directory, ec);
        if (ec) {
            throw IoError("cannot create output directory '" +
                          config.output_directory.string() + "': " + ec.message());
        }
    }

    void emit(const std::string& name, const std::string& bytes) {
        auto path = config_.output_directory / name;
        if (!config_.overwrite && std::filesystem::exists(path)) {
            throw IoError("refusing to overwrite existing file '" + path.string() +
                          "' (pass --overwrite)");
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
        out << bytes;
        out.close();
        if (!out) throw IoError("failed writing '" + path.string() + "'");
        written_.push_back(path);
        entries_.push_back({name, bytes.size(), fnv1a64_hex(bytes)});
    }

    void discard_outputs() {
        for (const auto& path : written_) {
            std::error_code ec;
            std::filesystem::remove(path, ec);
        }
        written_.clear();
        entries_.clear();
    }

    const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }

private:
    const RunConfig& config_;
    std::vector<std::filesystem::path> written_;
    std::vector<ManifestEntry> entries_;
};

inline std::string table_csv(const MetricTable& table) {
    std::ostringstream out;
    out << "entity";
    for (const auto& key : table.episodes) out << ',' << key.label();
    out << '\n';
    for (std::size_t i = 0; i < table.entities.size(); ++i) {
        out << table.entities[i];
        for (std::size_t j = 0; j < table.episodes.size(); ++j) {
            out << ',' << fmt_num(table.values[i][j]);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string table_json(const MetricTable& table) {
    nlohmann::ordered_json doc;
    doc["metric"] = table.metric_name;
    doc["missing_policy"] =
        table.missing_policy == MissingPolicy::zero_fill ? "zero_fill" : "mark_missing";
    doc["entities"] = table.entities;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (const auto& key : table.episodes) cols.push_back(key.label());
    doc["episodes"] = std::move(cols);
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (const auto& row : table.values) {
        nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
        for (double v : row) {
            if (is_missing(v)) {
                jrow.push_back(nullptr);
            } else {
                jrow.push_back(v);
            }
        }
        values.push_back(std::move(jrow));
    }
    doc["values"] = std::move(values);
    return doc.dump(2) + "\n";
}

inline std::string correlation_csv(const CorrelationResult& corr) {
    std::ostringstream out;
    out << "label";
    for (const auto& l : corr.labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < corr.labels.size(); ++i) {
        out << corr.labels[i];
        for (std::size_t j = 0; j < corr.labels.size(); ++j) {
            out << ',' << fmt_num(corr.matrix[i][j]);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string correlation_json(const CorrelationResult& corr) {
    nlohmann::ordered_json doc;
    doc["axis"] = axis_name(corr.axis);
    doc["method"] = corr_method_name(corr.method);
    doc["labels"] = corr.labels;
    nlohmann::ordered_json matrix = nlohmann::ordered_json::array();
    for (const auto& row : corr.matrix) {
        nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
        for (double v : row) {
            if (is_missing(v)) {
                jrow.push_back(nullptr);
            } else {
                jrow.push_back(v);
            }
        }
        matrix.push_back(std::move(jrow));
    }
    doc["matrix"] = std::move(matrix);
    doc["leaf_order"] = corr.leaf_order;
    return doc.dump(2) + "\n";
}

inline std::string presence_csv(const PresenceMatrix& m) {
    std::ostringstream out;
    out << "entity";
    for (const auto& key : m.episodes) out << ',' << key.label();
    out << '\n';
    for (std::size_t i = 0; i < m.entities.size(); ++i) {
        out << m.entities[i];
        for (std::size_t j = 0; j < m.episodes.size(); ++j) {
            out << ',' << (m.present[i][j] ? "present" : "absent");
        }
        out << '\n';
    }
    return out.str();
}

inline std::string assortativity_csv(const AssortativitySeries& series) {
    std::ostringstream out;
    out << "season,episode,assortativity_degree,assortativity_betweenness\n";
    for (std::size_t i = 0; i < series.episodes.size(); ++i) {
        out << series.episodes[i].season << ',' << series.episodes[i].episode << ','
            << fmt_num(series.by_degree[i]) << ',' << fmt_num(series.by_betweenness[i]) << '\n';
    }
    return out.str();
}

inline std::string balance_csv(const std::vector<BalanceSummary>& summaries) {
    std::ostringstream out;
    out << "season,episode,type1,type2,type3,type4,imbalanced,fraction\n";
    for (const auto& s : summaries) {
        out << s.key.season << ',' << s.key.episode << ',' << s.type_counts[0] << ','
            << s.type_counts[1] << ',' << s.type_counts[2] << ',' << s.type_counts[3] << ','
            << s.imbalanced_count << ',' << fmt_num(s.imbalanced_fraction) << '\n';
    }
    return out.str();
}

inline std::string edge_changes_csv(const EpisodeSeries& series) {
    // First episode has no predecessor: change columns are NA, U is defined.
    std::ostringstream out;
    out << "season,episode,establishment,flipping,disruption,disruption_eliminated,U\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& key = series.snapshots()[i].key();
        out << key.season << ',' << key.episode << ',';
        if (i == 0) {
            out << "NA,NA,NA,NA";
        } else {
            auto counts = count_changes(
                edge_diff(series.snapshots()[i - 1], series.snapshots()[i]), key);
            out << counts.establishment << ',' << counts.flipping << ',' << counts.disruption
                << ',' << counts.disruption_eliminated;
        }
        out << ',' << fmt_num(unpredictability(series.snapshots()[i])) << '\n';
    }
    return out.str();
}

inline std::string change_summary_json(const ChangeStatistics& stats) {
    nlohmann::ordered_json doc;
    doc["establishment"] = stats.totals.establishment;
    doc["establishment_new_entity"] = stats.totals.establishment_new_entity;
    doc["flipping"] = stats.totals.flipping;
    doc["disruption"] = stats.totals.disruption;
    doc["disruption_eliminated"] = stats.totals.disruption_eliminated;
    if (is_missing(stats.establishment_existing_share)) {
        doc["establishment_existing_share"] = nullptr;
    } else {
        doc["establishment_existing_share"] = stats.establishment_existing_share;
    }
    if (is_missing(stats.disruption_eliminated_share)) {
        doc["disruption_eliminated_share"] = nullptr;
    } else {
        doc["disruption_eliminated_share"] = stats.disruption_eliminated_share;
    }
    return doc.dump(2) + "\n";
}

inline std::string attribution_csv(const AttributionSummary& summary) {
    std::ostringstream out;
    out << "from,to,increase,decrease\n";
    for (const auto& [sig, inc] : summary.increase) {
        out << edge_state_char(sig.from) << ',' << edge_state_char(sig.to) << ',' << inc << ','
            << summary.decrease.at(sig) << '\n';
    }
    return out.str();
}

inline std::string transitions_json(const TransitionMatrix& m) {
    static const char* state_names[5] = {"absent", "type1", "type2", "type3", "type4"};
    nlohmann::ordered_json doc;
    for (std::size_t i = 0; i < 5; ++i) {
        nlohmann::ordered_json row;
        for (std::size_t j = 0; j < 5; ++j) {
            row[state_names[j]] = m.counts[i][j];
        }
        doc[state_names[i]] = std::move(row);
    }
    return doc.dump(2) + "\n";
}

inline std::string null_model_csv(const std::map<std::string, double>& observed,
                                  const std::map<std::string, NullDistribution>& expected,
                                  const ShuffleConfig& config) {
    std::ostringstream out;
    out << "# seed=" << config.seed << " replicates=" << config.replicates << "\n";
    out << "entity,observed_mean,null_mean,null_sd,replicates,seed\n";
    for (const auto& [name, dist] : expected) {
        out << name << ',' << fmt_num(observed.at(name)) << ',' << fmt_num(dist.mean) << ','
            << fmt_num(dist.sd) << ',' << config.replicates << ',' << config.seed << '\n';
    }
    return out.str();
}

inline std::string properties_csv(const PropertyVector& pv) {
    std::ostringstream out;
    out << "season,episode";
    for (const auto& name : PropertyVector::names()) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < pv.keys.size(); ++i) {
        out << pv.keys[i].season << ',' << pv.keys[i].episode;
        for (std::size_t j = 0; j < PropertyVector::names().size(); ++j) {
            out << ',' << fmt_num(pv.column(j)[i]);
        }
        out << '\n';
    }
    return out.str();
}

inline std::string responses_csv(const ResponseSeries& responses) {
    std::ostringstream out;
    out << "season,episode,votes,rating\n";
    for (const auto& rec : responses.records()) {
        out << rec.key.season << ',' << rec.key.episode << ',' << fmt_num(rec.votes) << ','
            << fmt_num(rec.rating) << '\n';
    }
    return out.str();
}

inline std::string partial_correlation_csv(const std::vector<PartialCorrelationRow>& rows,
                                           std::uint64_t seed) {
    std::ostringstream out;
    out << "# seed=" << seed << "\n";
    out << "property,target,coefficient,p_value,n_effective,method\n";
    for (const auto& row : rows) {
        out << row.property << ',' << row.target << ',' << fmt_num(row.coefficient) << ','
            << fmt_num(row.p_value) << ',' << row.n_effective << ',' << row.method << '\n';
    }
    return out.str();
}

} // namespace detail

enum class PipelineStage {
    ingest_check,
    metrics,
    triads,
    dynamics,
    nullmodel,
    correlate,
    all,
};

inline const char* pipeline_stage_name(PipelineStage s) {
    switch (s) {
        case PipelineStage::ingest_check: return "ingest-check";
        case PipelineStage::metrics: return "metrics";
        case PipelineStage::triads: return "triads";
        case PipelineStage::dynamics: return "dynamics";
        case PipelineStage::nullmodel: return "nullmodel";
        case PipelineStage::correlate: return "correlate";
        default: return "all";
    }
}

inline EpisodeSeries load_network(const std::filesystem::path& path,
                                  std::vector<ParseWarning>* warnings = nullptr) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open network file '" + path.string() + "'");
    Format format = path.extension() == ".json" ? Format::json : Format::csv;
    ParsedSeries parsed = parse_edge_list(in, format);
    if (warnings) *warnings = parsed.warnings;
    return std::move(parsed.series);
}

inline ResponseSeries load_responses(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open response file '" + path.string() + "'");
    return parse_responses(in);
}

// Runs the requested stage (or all of them) and writes the report files plus
// a manifest. Outputs are deterministic functions of inputs + config.
inline Manifest run_pipeline(const RunConfig& config, PipelineStage stage = PipelineStage::all) {
    EpisodeSeries series = load_network(config.input_network_path);
    if (series.empty()) throw ValidationError("input network has no snapshots");

    std::optional<ResponseSeries> responses;
    if (config.input_response_path) {
        responses = load_responses(*config.input_response_path);
        validate_alignment(series, *responses);
    }

    detail::ReportSink sink(config);
    bool done = false;
    try {
        bool want_metrics = stage == PipelineStage::metrics || stage == PipelineStage::all;
        bool want_triads = stage == PipelineStage::triads || stage == PipelineStage::all;
        bool want_dynamics = stage == PipelineStage::dynamics || stage == PipelineStage::all;
        bool want_nullmodel = stage == PipelineStage::nullmodel || stage == PipelineStage::all;
        bool want_correlate = stage == PipelineStage::correlate || stage == PipelineStage::all;

        if (want_metrics) {
            for (Metric metric : {Metric::degree, Metric::betweenness}) {
                MetricTable table = metric_table(series, metric, config.missing_policy);
                std::string base = metric_name(metric);
                sink.emit(base + "_table.csv", detail::table_csv(table));
                sink.emit(base + "_table.json", detail::table_json(table));
                for (Axis axis : {Axis::by_entity, Axis::by_episode}) {
                    CorrelationResult corr = correlate(table, axis, config.correlation_method);
                    std::string name = "corr_" + base + "_" + axis_name(axis);
                    sink.emit(name + ".csv", detail::correlation_csv(corr));
                    sink.emit(name + ".json", detail::correlation_json(corr));
                }
            }
            sink.emit("assortativity.csv",
                      detail::assortativity_csv(assortativity_series(series)));
            sink.emit("presence.csv", detail::presence_csv(presence_matrix(series)));
        }

        if (want_triads) {
            sink.emit("balance_summary.csv", detail::balance_csv(balance_series(series)));
        }

        if (want_dynamics) {
            sink.emit("edge_changes.csv", detail::edge_changes_csv(series));
            if (series.size() >= 2) {
                sink.emit("edge_change_summary.json",
                          detail::change_summary_json(change_statistics(series)));
                sink.emit("imbalance_attribution.csv",
                          detail::attribution_csv(attribution_summary(series)));
                sink.emit("triad_transitions.json",
                          detail::transitions_json(transition_matrix(series)));
            }
        }

        if (want_nullmodel) {
            ShuffleConfig shuffle_config{config.replicates, config.seed,
                                         AverageDenominator::presence_episodes};
            auto observed = per_entity_imbalance(series);
            auto expected = expected_imbalance(series, shuffle_config);
            sink.emit("null_model.csv",
                      detail::null_model_csv(observed, expected, shuffle_config));
        }

        if (want_correlate) {
            sink.emit("properties.csv", detail::properties_csv(property_vector(series)));
            if (responses) {
                ResponseSeries normalized = season_normalize(*responses);
                sink.emit("responses_normalized.csv", detail::responses_csv(normalized));

                PropertyVector pv = property_vector(series);
                PartialCorrelationOptions options;
                options.seed = config.seed;
                std::vector<double> votes, rating;
                for (const auto& rec : normalized.records()) {
                    votes.push_back(rec.votes);
                    rating.push_back(rec.rating);
                }
                auto rows = partial_correlation_table(pv, votes, "votes", options);
                auto rating_rows = partial_correlation_table(pv, rating, "rating", options);
                rows.insert(rows.end(), rating_rows.begin(), rating_rows.end());
                sink.emit("partial_correlation.csv",
                          detail::partial_correlation_csv(rows, config.seed));
            }
        }

        done = true;
    } catch (...) {
        if (!config.keep_partial) sink.discard_outputs();
        throw;
    }
    (void)done;

    Manifest manifest;
    manifest.command = pipeline_stage_name(stage);
    manifest.seed = config.seed;
    manifest.artifacts = sink.entries();
    std::sort(manifest.artifacts.begin(), manifest.artifacts.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.file < b.file; });

    nlohmann::ordered_json doc;
    doc["command"] = manifest.command;
    doc["seed"] = manifest.seed;
    doc["replicates"] = config.replicates;
    doc["method"] = corr_method_name(config.correlation_method);
    doc["missing"] =
        config.missing_policy == MissingPolicy::zero_fill ? "zero_fill" : "mark_missing";
    nlohmann::ordered_json artifacts = nlohmann::ordered_json::array();
    for (const auto& entry : manifest.artifacts) {
        artifacts.push_back(
            {{"file", entry.file}, {"bytes", entry.bytes}, {"fnv1a64", entry.fnv1a64}});
    }
    doc["artifacts"] = std::move(artifacts);
    sink.emit("manifest.json", doc.dump(2) + "\n");

    return manifest;
}

} // namespace signet

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "signet/dynamics.hpp"
#include "signet/graph.hpp"
#include "signet/io.hpp"
#include "signet/metrics.hpp"
#include "signet/nullmodel.hpp"
#include "signet/stats.hpp"
#include "signet/triads.hpp"

namespace signet {

struct ResponseRecord {
    EpisodeKey key;
    double votes = 0.0;
    double rating = 0.0;
};

// Per-episode viewer observations, ordered by episode key. The raw-input
// range check on ratings lives in parse_responses; season-normalized copies
// are still ResponseSeries values.
class ResponseSeries {
public:
    ResponseSeries() = default;

    explicit ResponseSeries(std::vector<ResponseRecord> records)
        : records_(std::move(records)) {
        std::sort(records_.begin(), records_.end(),
                  [](const ResponseRecord& a, const ResponseRecord& b) { return a.key < b.key; });
        for (std::size_t i = 0; i < records_.size(); ++i) {
            const auto& r = records_[i];
            if (i > 0 && records_[i - 1].key == r.key) {
                throw ValidationError("duplicate response row for " + r.key.label());
            }
            if (!(r.votes > 0.0)) {
                throw ValidationError("votes must be positive for " + r.key.label());
            }
        }
    }

    const std::vector<ResponseRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

private:
    std::vector<ResponseRecord> records_;
};

// CSV `season,episode,votes,rating`.
inline ResponseSeries parse_responses(std::istream& in) {
    std::vector<ResponseRecord> records;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = detail::split_csv_row(line);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"season", "episode", "votes", "rating"}) {
                throw ParseError("expected header 'season,episode,votes,rating'", lineno);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError("expected 4 columns, got " + std::to_string(fields.size()), lineno);
        }
        ResponseRecord rec;
        rec.key = {detail::parse_positive_int(fields[0], "season", lineno),
                   detail::parse_positive_int(fields[1], "episode", lineno)};
        try {
            rec.votes = std::stod(fields[2]);
            rec.rating = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw ParseError("votes and rating must be numeric", lineno);
        }
        if (!(rec.votes > 0.0)) throw ParseError("votes must be positive", lineno);
        if (rec.rating < 0.0 || rec.rating > 10.0) {
            throw ParseError("rating must lie in [0,10]", lineno);
        }
        records.push_back(rec);
    }
    try {
        return ResponseSeries(std::move(records));
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
}

// Requires the response keys and the network series keys to match exactly.
inline void validate_alignment(const EpisodeSeries& series, const ResponseSeries& responses) {
    std::map<EpisodeKey, int> seen;
    for (const auto& key : series.episode_keys()) seen[key] |= 1;
    for (const auto& rec : responses.records()) seen[rec.key] |= 2;
    for (const auto& [key, mask] : seen) {
        if (mask == 1) {
            throw ValidationError("no response row for episode " + key.label());
        }
        if (mask == 2) {
            throw ValidationError("response row for unknown episode " + key.label());
        }
    }
}

// Divides votes and rating by their arithmetic season means, independently
// per season, so every season's normalized mean is 1.
inline ResponseSeries season_normalize(const ResponseSeries& responses) {
    std::map<int, std::pair<double, int>> votes_acc, rating_acc; // season -> (sum, n)
    for (const auto& rec : responses.records()) {
        votes_acc[rec.key.season].first += rec.votes;
        votes_acc[rec.key.season].second += 1;
        rating_acc[rec.key.season].first += rec.rating;
        rating_acc[rec.key.season].second += 1;
    }
    std::map<int, double> votes_mean, rating_mean;
    for (const auto& [season, acc] : votes_acc) votes_mean[season] = acc.first / acc.second;
    for (const auto& [season, acc] : rating_acc) {
        double m = acc.first / acc.second;
        if (m == 0.0) {
            throw NumericError("season " + std::to_string(season) +
                               " has zero mean rating; cannot normalize");
        }
        rating_mean[season] = m;
    }

    std::vector<ResponseRecord> out;
    out.reserve(responses.size());
    for (const auto& rec : responses.records()) {
        ResponseRecord r = rec;
        r.votes = rec.votes / votes_mean[rec.key.season];
        r.rating = rec.rating / rating_mean[rec.key.season];
        out.push_back(r);
    }
    return ResponseSeries(std::move(out));
}

// (x - min) / (max - min); requires at least two distinct finite values.
// Missing entries pass through untouched.
inline std::vector<double> min_max_scale(const std::vector<double>& values) {
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (double v : values) {
        if (is_missing(v)) continue;
        if (!any) {
            lo = hi = v;
            any = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!any || hi == lo) {
        throw NumericError("min_max_scale: input has no spread (degenerate scale)");
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) {
        out.push_back(is_missing(v) ? v : (v - lo) / (hi - lo));
    }
    return out;
}

// The six per-episode network properties the viewer-response analysis uses,
// in the fixed analysis order.
struct PropertyVector {
    std::vector<EpisodeKey> keys;
    std::vector<double> node_count;
    std::vector<double> edge_count;
    std::vector<double> edge_change_count; // missing for the first episode
    std::vector<double> imbalanced_fraction;
    std::vector<double> triad_count;
    std::vector<double> assortativity_degree;

    static const std::vector<std::string>& names() {
        static const std::vector<std::string> n = {
            "node_count",      "edge_count",  "edge_change_count",
            "imbalanced_fraction", "triad_count", "assortativity_degree",
        };
        return n;
    }

    const std::vector<double>& column(std::size_t i) const {
        switch (i) {
            case 0: return node_count;
            case 1: return edge_count;
            case 2: return edge_change_count;
            case 3: return imbalanced_fraction;
            case 4: return triad_count;
            default: return assortativity_degree;
        }
    }
};

inline PropertyVector property_vector(const EpisodeSeries& series) {
    if (series.empty()) throw ValidationError("property_vector on empty series");
    PropertyVector pv;
    pv.keys = series.episode_keys();
    for (std::size_t i = 0; i < series.size(); ++i) {
        const SignedGraph& g = series.snapshots()[i];
        pv.node_count.push_back(static_cast<double>(g.node_count()));
        pv.edge_count.push_back(static_cast<double>(g.edge_count()));
        if (i == 0) {
            pv.edge_change_count.push_back(missing_value());
        } else {
            pv.edge_change_count.push_back(
                static_cast<double>(edge_diff(series.snapshots()[i - 1], g).size()));
        }
        BalanceSummary bal = balance_summary(g);
        pv.imbalanced_fraction.push_back(bal.imbalanced_fraction);
        pv.triad_count.push_back(static_cast<double>(bal.total()));
        if (g.edge_count() == 0) {
            pv.assortativity_degree.push_back(missing_value());
        } else {
            pv.assortativity_degree.push_back(assortativity_by_degree(g));
        }
    }
    return pv;
}

enum class PValueMethod { t_approximation, permutation };
enum class ControlMode { all_others, none };

struct PartialCorrelationOptions {
    PValueMethod p_value = PValueMethod::t_approximation;
    ControlMode controls = ControlMode::all_others;
    int permutations = 10000;
    std::uint64_t seed = 0;
};

struct PartialCorrelationRow {
    std::string property;
    std::string target;
    double coefficient = 0.0;
    double p_value = 0.0;
    int n_effective = 0;
    std::string method;
};

namespace detail {

inline double permutation_p_value(const std::vector<double>& x, const std::vector<double>& y,
                                  const std::vector<std::vector<double>>& controls,
                                  double observed, int permutations, std::uint64_t seed) {
    rng::Generator gen(rng::splitmix64(seed));
    std::vector<double> shuffled = x;
    int at_least = 0;
    for (int p = 0; p < permutations; ++p) {
        gen.shuffle(shuffled);
        double r = stats::partial_spearman(shuffled, y, controls);
        if (std::fabs(r) >= std::fabs(observed) - 1e-15) ++at_least;
    }
    return static_cast<double>(1 + at_least) / static_cast<double>(1 + permutations);
}

} // namespace detail

// Partial rank correlation of one response variable against each network
// property. Rows with any missing value are dropped (listwise deletion); the
// surviving row count is reported as n_effective.
inline std::vector<PartialCorrelationRow> partial_correlation_table(
    const PropertyVector& properties, const std::vector<double>& response,
    const std::string& target_name, const PartialCorrelationOptions& options = {}) {
    std::size_t episodes = properties.keys.size();
    if (response.size() != episodes) {
        throw ValidationError("response vector length does not match the property table");
    }

    std::size_t property_count = PropertyVector::names().size();
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < episodes; ++i) {
        bool complete = !is_missing(response[i]);
        for (std::size_t j = 0; j < property_count && complete; ++j) {
            complete = !is_missing(properties.column(j)[i]);
        }
        if (complete) rows.push_back(i);
    }

    std::vector<double> y;
    for (std::size_t i : rows) y.push_back(response[i]);
    std::vector<std::vector<double>> cols(property_count);
    for (std::size_t j = 0; j < property_count; ++j) {
        for (std::size_t i : rows) cols[j].push_back(properties.column(j)[i]);
    }

    std::vector<PartialCorrelationRow> out;
    for (std::size_t j = 0; j < property_count; ++j) {
        std::vector<std::vector<double>> controls;
        std::vector<std::string> names = {target_name, PropertyVector::names()[j]};
        if (options.controls == ControlMode::all_others) {
            for (std::size_t c = 0; c < property_count; ++c) {
                if (c != j) {
                    controls.push_back(cols[c]);
                    names.push_back(PropertyVector::names()[c]);
                }
            }
        }
        double r = stats::partial_spearman(y, cols[j], controls, names);

        PartialCorrelationRow row;
        row.property = PropertyVector::names()[j];
        row.target = target_name;
        row.coefficient = r;
        row.n_effective = static_cast<int>(rows.size());
        if (options.p_value == PValueMethod::t_approximation) {
            int df = static_cast<int>(rows.size()) - 2 - static_cast<int>(controls.size());
            row.p_value = stats::correlation_p_value(r, df);
            row.method = "partial_spearman_t";
        } else {
            row.p_value = detail::permutation_p_value(y, cols[j], controls, r,
                                                      options.permutations, options.seed);
            row.method = "partial_spearman_perm";
        }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace signet

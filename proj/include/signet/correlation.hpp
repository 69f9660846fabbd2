#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "signet/metrics.hpp"
#include "signet/stats.hpp"

namespace signet {

enum class Axis { by_entity, by_episode };
enum class CorrMethod { pearson, spearman };

inline const char* axis_name(Axis a) {
    return a == Axis::by_entity ? "by_entity" : "by_episode";
}
inline const char* corr_method_name(CorrMethod m) {
    return m == CorrMethod::pearson ? "pearson" : "spearman";
}

// Pairwise correlation along one table axis plus a display order from
// agglomerative clustering. Undefined entries (zero variance, too little
// pairwise-complete overlap) carry the missing marker.
struct CorrelationResult {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> matrix;
    Axis axis = Axis::by_entity;
    CorrMethod method = CorrMethod::pearson;
    std::vector<std::size_t> leaf_order;
};

namespace detail {

inline double correlate_pair(const std::vector<double>& a, const std::vector<double>& b,
                             CorrMethod method) {
    std::vector<double> ac, bc;
    stats::pairwise_complete(a, b, ac, bc);
    if (ac.size() < 3) return missing_value();
    if (method == CorrMethod::spearman) {
        return stats::pearson(stats::ranks_average_ties(ac), stats::ranks_average_ties(bc));
    }
    return stats::pearson(ac, bc);
}

// Average-linkage agglomerative clustering on distance = 1 - correlation.
// Undefined leaf distances are skipped in the linkage average; cluster pairs
// with no defined leaf distance sort after every defined pair. Merge order
// and the leaf order are fully deterministic: ties on distance pick the
// lexicographically smallest (first-label, first-label) pair, and a merged
// cluster lists the smaller side first (equal sizes: smaller first label
// first).
inline std::vector<std::size_t> cluster_leaf_order(
    const std::vector<std::vector<double>>& corr, const std::vector<std::string>& labels) {
    std::size_t n = labels.size();
    if (n == 0) return {};
    if (n == 1) return {0};

    struct Cluster {
        std::vector<std::size_t> order;
        std::string first_label; // lexicographically smallest member label
        bool alive = true;
    };
    std::size_t max_clusters = 2 * n - 1;
    std::vector<Cluster> clusters;
    clusters.reserve(max_clusters);
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({{i}, labels[i], true});

    // Linkage state between clusters: sum and count of *defined* leaf-pair
    // distances, merged additively (exact average linkage).
    std::vector<std::vector<double>> sum(max_clusters, std::vector<double>(max_clusters, 0.0));
    std::vector<std::vector<std::size_t>> cnt(max_clusters,
                                              std::vector<std::size_t>(max_clusters, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (is_missing(corr[i][j])) continue;
            sum[i][j] = sum[j][i] = 1.0 - corr[i][j];
            cnt[i][j] = cnt[j][i] = 1;
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::size_t alive_count = n;
    while (alive_count > 1) {
        std::size_t bi = 0, bj = 0;
        double best = inf;
        bool have = false;
        std::pair<std::string, std::string> best_key;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (!clusters[i].alive) continue;
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                if (!clusters[j].alive) continue;
                double d = cnt[i][j] ? sum[i][j] / static_cast<double>(cnt[i][j]) : inf;
                auto key = std::minmax(clusters[i].first_label, clusters[j].first_label);
                std::pair<std::string, std::string> key_pair{key.first, key.second};
                if (!have || d < best || (d == best && key_pair < best_key)) {
                    best = d;
                    best_key = key_pair;
                    bi = i;
                    bj = j;
                    have = true;
                }
            }
        }

        Cluster& a = clusters[bi];
        Cluster& b = clusters[bj];
        bool a_first = a.order.size() != b.order.size()
                           ? a.order.size() < b.order.size()
                           : a.first_label < b.first_label;
        Cluster merged;
        const Cluster& head = a_first ? a : b;
        const Cluster& tail = a_first ? b : a;
        merged.order = head.order;
        merged.order.insert(merged.order.end(), tail.order.begin(), tail.order.end());
        merged.first_label = std::min(a.first_label, b.first_label);

        std::size_t m = clusters.size();
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (!clusters[c].alive || c == bi || c == bj) continue;
            sum[m][c] = sum[c][m] = sum[bi][c] + sum[bj][c];
            cnt[m][c] = cnt[c][m] = cnt[bi][c] + cnt[bj][c];
        }
        clusters[bi].alive = false;
        clusters[bj].alive = false;
        clusters.push_back(std::move(merged));
        --alive_count;
    }

    for (auto it = clusters.rbegin(); it != clusters.rend(); ++it) {
        if (it->alive) return it->order;
    }
    return {};
}

} // namespace detail

inline CorrelationResult correlate(const MetricTable& table, Axis axis,
                                   CorrMethod method = CorrMethod::pearson) {
    CorrelationResult result;
    result.axis = axis;
    result.method = method;

    std::vector<std::vector<double>> vectors;
    if (axis == Axis::by_entity) {
        result.labels = table.entities;
        vectors = table.values;
    } else {
        for (const auto& key : table.episodes) result.labels.push_back(key.label());
        vectors.assign(table.episodes.size(), std::vector<double>(table.entities.size()));
        for (std::size_t i = 0; i < table.entities.size(); ++i) {
            for (std::size_t j = 0; j < table.episodes.size(); ++j) {
                vectors[j][i] = table.values[i][j];
            }
        }
    }

    std::size_t n = vectors.size();
    std::size_t len = n ? vectors[0].size() : 0;
    if (n < 2) throw NumericError("correlate: need at least 2 vectors along the axis");
    if (len < 3) throw NumericError("correlate: vectors must have length >= 3");

    // A vector is valid when its non-missing part has nonzero variance.
    std::vector<bool> valid(n, false);
    std::size_t valid_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> clean;
        for (double v : vectors[i]) {
            if (!is_missing(v)) clean.push_back(v);
        }
        if (clean.size() >= 3) {
            double m = stats::mean(clean);
            for (double v : clean) {
                if (v != m) {
                    valid[i] = true;
                    break;
                }
            }
        }
        if (valid[i]) ++valid_count;
    }
    if (valid_count < 2) {
        throw NumericError("correlate: fewer than 2 vectors with usable variance");
    }

    result.matrix.assign(n, std::vector<double>(n, missing_value()));
    for (std::size_t i = 0; i < n; ++i) {
        if (valid[i]) result.matrix[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!valid[i] || !valid[j]) continue;
            double r = detail::correlate_pair(vectors[i], vectors[j], method);
            result.matrix[i][j] = result.matrix[j][i] = r;
        }
    }

    result.leaf_order = detail::cluster_leaf_order(result.matrix, result.labels);
    return result;
}

} // namespace signet

#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "signet/graph.hpp"
#include "signet/stats.hpp"

namespace signet {

// Sign is ignored by every topological metric in this header; only the
// triads/dynamics modules look at it.

inline std::map<std::string, int> degree(const SignedGraph& graph) {
    std::map<std::string, int> deg;
    for (const auto& name : graph.nodes()) deg[name] = 0;
    for (const auto& [pair, sign] : graph.edges()) {
        (void)sign;
        ++deg[pair.first];
        ++deg[pair.second];
    }
    return deg;
}

// Unnormalized betweenness centrality over unordered pairs, fractional
// counting across multiple shortest paths (Brandes accumulation, halved for
// the undirected pair convention). Disconnected pairs contribute nothing.
inline std::map<std::string, double> betweenness(const SignedGraph& graph) {
    std::vector<std::string> names(graph.nodes().begin(), graph.nodes().end());
    std::size_t n = names.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[names[i]] = i;

    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [pair, sign] : graph.edges()) {
        (void)sign;
        adj[index[pair.first]].push_back(index[pair.second]);
        adj[index[pair.second]].push_back(index[pair.first]);
    }

    std::vector<double> score(n, 0.0);
    std::vector<long long> sigma(n);
    std::vector<long long> dist(n);
    std::vector<std::vector<std::size_t>> preds(n);
    std::vector<double> delta(n);
    std::vector<std::size_t> order;
    order.reserve(n);

    for (std::size_t s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0);
        std::fill(dist.begin(), dist.end(), -1);
        for (auto& p : preds) p.clear();
        order.clear();

        sigma[s] = 1;
        dist[s] = 0;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (std::size_t w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }

        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            std::size_t w = *it;
            for (std::size_t v : preds[w]) {
                delta[v] += static_cast<double>(sigma[v]) / static_cast<double>(sigma[w]) *
                            (1.0 + delta[w]);
            }
            if (w != s) score[w] += delta[w];
        }
    }

    std::map<std::string, double> result;
    for (std::size_t i = 0; i < n; ++i) result[names[i]] = score[i] / 2.0;
    return result;
}

// Pearson correlation of a node attribute across edge endpoints, each edge
// contributing both orientations. Zero attribute variance across endpoints
// gives the missing marker, never a silent 0.
inline double assortativity(const SignedGraph& graph,
                            const std::map<std::string, double>& attribute) {
    if (graph.edge_count() == 0) {
        throw ValidationError("assortativity needs at least one edge");
    }
    std::vector<double> x, y;
    x.reserve(graph.edge_count() * 2);
    y.reserve(graph.edge_count() * 2);
    for (const auto& [pair, sign] : graph.edges()) {
        (void)sign;
        auto a = attribute.find(pair.first);
        auto b = attribute.find(pair.second);
        if (a == attribute.end() || b == attribute.end()) {
            throw ValidationError("attribute missing for an edge endpoint");
        }
        x.push_back(a->second);
        y.push_back(b->second);
        x.push_back(b->second);
        y.push_back(a->second);
    }
    return stats::pearson(x, y);
}

inline double assortativity_by_degree(const SignedGraph& graph) {
    std::map<std::string, double> attr;
    for (const auto& [name, d] : degree(graph)) attr[name] = static_cast<double>(d);
    return assortativity(graph, attr);
}

inline double assortativity_by_betweenness(const SignedGraph& graph) {
    return assortativity(graph, betweenness(graph));
}

enum class Metric { degree, betweenness };
enum class MissingPolicy { zero_fill, mark_missing };

inline const char* metric_name(Metric m) {
    return m == Metric::degree ? "degree" : "betweenness";
}

// Entity-by-episode value grid. Rows cover the entity universe
// (lexicographic), columns the episode keys in order.
struct MetricTable {
    std::string metric_name;
    std::vector<std::string> entities;
    std::vector<EpisodeKey> episodes;
    std::vector<std::vector<double>> values; // [entity][episode]
    MissingPolicy missing_policy = MissingPolicy::zero_fill;
};

inline MetricTable metric_table(const EpisodeSeries& series, Metric metric,
                                MissingPolicy policy = MissingPolicy::zero_fill) {
    if (series.empty()) throw ValidationError("metric_table on empty series");
    MetricTable t;
    t.metric_name = metric_name(metric);
    t.entities.assign(series.entity_universe().begin(), series.entity_universe().end());
    t.episodes = series.episode_keys();
    t.missing_policy = policy;
    double fill = policy == MissingPolicy::zero_fill ? 0.0 : missing_value();
    t.values.assign(t.entities.size(), std::vector<double>(t.episodes.size(), fill));

    std::map<std::string, std::size_t> row;
    for (std::size_t i = 0; i < t.entities.size(); ++i) row[t.entities[i]] = i;

    for (std::size_t col = 0; col < series.size(); ++col) {
        const SignedGraph& g = series.snapshots()[col];
        if (metric == Metric::degree) {
            for (const auto& [name, d] : degree(g)) {
                t.values[row[name]][col] = static_cast<double>(d);
            }
        } else {
            for (const auto& [name, b] : betweenness(g)) {
                t.values[row[name]][col] = b;
            }
        }
    }
    return t;
}

// Per-episode assortativity series (degree and betweenness variants).
// Episodes without edges or with degenerate endpoint variance carry the
// missing marker.
struct AssortativitySeries {
    std::vector<EpisodeKey> episodes;
    std::vector<double> by_degree;
    std::vector<double> by_betweenness;
};

inline AssortativitySeries assortativity_series(const EpisodeSeries& series) {
    AssortativitySeries out;
    out.episodes = series.episode_keys();
    for (const auto& g : series.snapshots()) {
        if (g.edge_count() == 0) {
            out.by_degree.push_back(missing_value());
            out.by_betweenness.push_back(missing_value());
            continue;
        }
        out.by_degree.push_back(assortativity_by_degree(g));
        out.by_betweenness.push_back(assortativity_by_betweenness(g));
    }
    return out;
}

} // namespace signet

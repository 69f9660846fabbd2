#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "signet/graph.hpp"
#include "signet/stats.hpp"

namespace signet {

// Triangle classification by negative-edge count: Type1 = 0 negatives through
// Type4 = 3 negatives. Type1/Type3 are balanced (even negative count, sign
// product +1), Type2/Type4 imbalanced.
enum class TriadType : int {
    type1 = 1,
    type2 = 2,
    type3 = 3,
    type4 = 4,
};

inline int negative_count(TriadType t) noexcept { return static_cast<int>(t) - 1; }

inline std::pair<TriadType, bool> classify_triad(const std::array<Sign, 3>& signs) {
    int negatives = 0;
    for (Sign s : signs) {
        if (s == Sign::negative) ++negatives;
    }
    return {static_cast<TriadType>(negatives + 1), negatives % 2 == 0};
}

// A closed triangle. Members are sorted; signs follow the pair order
// (m0,m1), (m0,m2), (m1,m2).
struct TriadRecord {
    std::array<std::string, 3> members;
    std::array<Sign, 3> signs;
    TriadType type;
    bool balanced;

    bool operator==(const TriadRecord&) const = default;
};

// Exactly the closed triangles, each once, ordered by member triple.
// Edge-iterator enumeration: a triangle (u,v,w), u<v<w, is emitted while
// scanning its (u,v) edge.
inline std::vector<TriadRecord> enumerate_triads(const SignedGraph& graph) {
    std::vector<TriadRecord> out;
    auto adjacency = graph.adjacency();
    for (const auto& [pair, sign_uv] : graph.edges()) {
        const auto& u = pair.first;
        const auto& v = pair.second;
        const auto& nu = adjacency[u];
        const auto& nv = adjacency[v];
        std::size_t i = 0, j = 0;
        while (i < nu.size() && j < nv.size()) {
            if (nu[i] < nv[j]) {
                ++i;
            } else if (nv[j] < nu[i]) {
                ++j;
            } else {
                const std::string& w = nu[i];
                if (w > v) {
                    TriadRecord rec;
                    rec.members = {u, v, w};
                    rec.signs = {sign_uv, *graph.sign_of(u, w), *graph.sign_of(v, w)};
                    auto [type, balanced] = classify_triad(rec.signs);
                    rec.type = type;
                    rec.balanced = balanced;
                    out.push_back(std::move(rec));
                }
                ++i;
                ++j;
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const TriadRecord& a, const TriadRecord& b) { return a.members < b.members; });
    return out;
}

struct BalanceSummary {
    EpisodeKey key;
    std::array<int, 4> type_counts{0, 0, 0, 0}; // index = type - 1
    int imbalanced_count = 0;
    double imbalanced_fraction = 0.0; // missing marker when there are no triads

    int total() const noexcept {
        return type_counts[0] + type_counts[1] + type_counts[2] + type_counts[3];
    }
};

inline BalanceSummary balance_summary(const SignedGraph& graph) {
    BalanceSummary s;
    s.key = graph.key();
    for (const auto& rec : enumerate_triads(graph)) {
        ++s.type_counts[static_cast<std::size_t>(static_cast<int>(rec.type) - 1)];
        if (!rec.balanced) ++s.imbalanced_count;
    }
    int total = s.total();
    s.imbalanced_fraction =
        total > 0 ? static_cast<double>(s.imbalanced_count) / total : missing_value();
    return s;
}

inline std::vector<BalanceSummary> balance_series(const EpisodeSeries& series) {
    std::vector<BalanceSummary> out;
    out.reserve(series.size());
    for (const auto& g : series.snapshots()) out.push_back(balance_summary(g));
    return out;
}

inline int imbalanced_count(const SignedGraph& graph) {
    return balance_summary(graph).imbalanced_count;
}

// Per-entity count of imbalanced triangles the entity sits in.
inline std::map<std::string, int> imbalanced_membership(const SignedGraph& graph) {
    std::map<std::string, int> counts;
    for (const auto& name : graph.nodes()) counts[name] = 0;
    for (const auto& rec : enumerate_triads(graph)) {
        if (rec.balanced) continue;
        for (const auto& m : rec.members) ++counts[m];
    }
    return counts;
}

// Which episodes count in the per-entity average: only those where the
// entity is present (default), or every episode of the series.
enum class AverageDenominator { presence_episodes, all_episodes };

inline std::map<std::string, double> per_entity_imbalance(
    const EpisodeSeries& series,
    AverageDenominator denominator = AverageDenominator::presence_episodes) {
    if (series.empty()) throw ValidationError("per_entity_imbalance on empty series");
    std::map<std::string, double> sums;
    std::map<std::string, int> presence;
    for (const auto& name : series.entity_universe()) {
        sums[name] = 0.0;
        presence[name] = 0;
    }
    for (const auto& g : series.snapshots()) {
        auto membership = imbalanced_membership(g);
        for (const auto& name : g.nodes()) {
            sums[name] += membership[name];
            ++presence[name];
        }
    }
    std::map<std::string, double> out;
    for (const auto& [name, total] : sums) {
        double denom = denominator == AverageDenominator::presence_episodes
                           ? static_cast<double>(presence[name])
                           : static_cast<double>(series.size());
        out[name] = total / denom;
    }
    return out;
}

} // namespace signet

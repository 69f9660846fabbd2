#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "signet/error.hpp"

namespace signet {

// Relationship sign. The numeric embedding is +1 / -1; absence of an edge is
// "no interaction" and is not a sign.
enum class Sign : int {
    positive = +1,
    negative = -1,
};

inline int sign_value(Sign s) noexcept { return static_cast<int>(s); }
inline Sign opposite(Sign s) noexcept {
    return s == Sign::positive ? Sign::negative : Sign::positive;
}
inline char sign_char(Sign s) noexcept { return s == Sign::positive ? '+' : '-'; }

// (season, episode), ordered season-first.
struct EpisodeKey {
    int season = 0;
    int episode = 0;

    auto operator<=>(const EpisodeKey&) const = default;

    std::string label() const {
        return "S" + std::to_string(season) + "E" + std::to_string(episode);
    }
};

// Unordered entity pair stored in canonical (lexicographically sorted) form.
struct EntityPair {
    std::string first;
    std::string second;

    static EntityPair of(std::string a, std::string b) {
        if (a == b) {
            throw ValidationError("self-loop on entity '" + a + "'");
        }
        if (b < a) std::swap(a, b);
        return EntityPair{std::move(a), std::move(b)};
    }

    bool contains(const std::string& name) const {
        return first == name || second == name;
    }

    const std::string& other(const std::string& name) const {
        return first == name ? second : first;
    }

    auto operator<=>(const EntityPair&) const = default;
};

struct SignedEdge {
    EntityPair endpoints;
    Sign sign;

    auto operator<=>(const SignedEdge&) const = default;
};

// One episode snapshot: entities present plus the signed relationships among
// them. Immutable after construction; every constructor path validates that
// edge endpoints are members of the node set.
class SignedGraph {
public:
    using EdgeMap = std::map<EntityPair, Sign>;

    SignedGraph(EpisodeKey key, std::set<std::string> nodes, EdgeMap edges)
        : key_(key), nodes_(std::move(nodes)), edges_(std::move(edges)) {
        if (key_.season < 1 || key_.episode < 1) {
            throw ValidationError("episode key must be positive, got " + key_.label());
        }
        for (const auto& name : nodes_) {
            if (name.empty()) throw ValidationError("empty entity name in node set");
        }
        for (const auto& [pair, sign] : edges_) {
            (void)sign;
            if (!nodes_.contains(pair.first) || !nodes_.contains(pair.second)) {
                throw ValidationError("edge endpoint not in node set: " + pair.first +
                                      " -- " + pair.second + " in " + key_.label());
            }
        }
    }

    const EpisodeKey& key() const noexcept { return key_; }
    const std::set<std::string>& nodes() const noexcept { return nodes_; }
    const EdgeMap& edges() const noexcept { return edges_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    bool has_node(const std::string& name) const { return nodes_.contains(name); }

    std::optional<Sign> sign_of(const std::string& a, const std::string& b) const {
        auto it = edges_.find(EntityPair::of(a, b));
        if (it == edges_.end()) return std::nullopt;
        return it->second;
    }

    // Neighbor lists, sorted; isolated nodes map to empty lists.
    std::map<std::string, std::vector<std::string>> adjacency() const {
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& name : nodes_) adj[name];
        for (const auto& [pair, sign] : edges_) {
            (void)sign;
            adj[pair.first].push_back(pair.second);
            adj[pair.second].push_back(pair.first);
        }
        for (auto& [name, nbrs] : adj) {
            (void)name;
            std::sort(nbrs.begin(), nbrs.end());
        }
        return adj;
    }

    bool operator==(const SignedGraph& other) const = default;

private:
    EpisodeKey key_;
    std::set<std::string> nodes_;
    EdgeMap edges_;
};

// Ordered sequence of snapshots, strictly increasing by (season, episode).
class EpisodeSeries {
public:
    EpisodeSeries() = default;

    explicit EpisodeSeries(std::vector<SignedGraph> snapshots)
        : snapshots_(std::move(snapshots)) {
        std::sort(snapshots_.begin(), snapshots_.end(),
                  [](const SignedGraph& a, const SignedGraph& b) { return a.key() < b.key(); });
        for (std::size_t i = 1; i < snapshots_.size(); ++i) {
            if (snapshots_[i - 1].key() == snapshots_[i].key()) {
                throw ValidationError("duplicate episode key " + snapshots_[i].key().label());
            }
        }
        for (const auto& g : snapshots_) {
            universe_.insert(g.nodes().begin(), g.nodes().end());
        }
    }

    const std::vector<SignedGraph>& snapshots() const noexcept { return snapshots_; }
    const std::set<std::string>& entity_universe() const noexcept { return universe_; }

    std::size_t size() const noexcept { return snapshots_.size(); }
    bool empty() const noexcept { return snapshots_.empty(); }

    const SignedGraph* find(EpisodeKey key) const {
        auto it = std::lower_bound(
            snapshots_.begin(), snapshots_.end(), key,
            [](const SignedGraph& g, EpisodeKey k) { return g.key() < k; });
        if (it == snapshots_.end() || !(it->key() == key)) return nullptr;
        return &*it;
    }

    const SignedGraph& at(EpisodeKey key) const {
        const SignedGraph* g = find(key);
        if (!g) throw ValidationError("no snapshot for episode " + key.label());
        return *g;
    }

    std::vector<EpisodeKey> episode_keys() const {
        std::vector<EpisodeKey> keys;
        keys.reserve(snapshots_.size());
        for (const auto& g : snapshots_) keys.push_back(g.key());
        return keys;
    }

    // 1-based position of a key in the series, for flat plotting axes.
    std::size_t flat_index(EpisodeKey key) const {
        auto keys = episode_keys();
        auto it = std::lower_bound(keys.begin(), keys.end(), key);
        if (it == keys.end() || !(*it == key)) {
            throw ValidationError("no snapshot for episode " + key.label());
        }
        return static_cast<std::size_t>(it - keys.begin()) + 1;
    }

    bool operator==(const EpisodeSeries& other) const {
        return snapshots_ == other.snapshots_;
    }

private:
    std::vector<SignedGraph> snapshots_;
    std::set<std::string> universe_;
};

inline const SignedGraph& episode_graph(const EpisodeSeries& series, int season, int episode) {
    return series.at(EpisodeKey{season, episode});
}

// Entity-by-episode presence grid. Rows cover the entity universe in
// lexicographic order, columns the episode keys in series order.
struct PresenceMatrix {
    std::vector<std::string> entities;
    std::vector<EpisodeKey> episodes;
    std::vector<std::vector<bool>> present; // [entity][episode]
};

inline PresenceMatrix presence_matrix(const EpisodeSeries& series) {
    if (series.empty()) throw ValidationError("presence_matrix on empty series");
    PresenceMatrix m;
    m.entities.assign(series.entity_universe().begin(), series.entity_universe().end());
    m.episodes = series.episode_keys();
    m.present.resize(m.entities.size(), std::vector<bool>(m.episodes.size(), false));
    for (std::size_t e = 0; e < m.entities.size(); ++e) {
        for (std::size_t k = 0; k < m.episodes.size(); ++k) {
            m.present[e][k] = series.snapshots()[k].has_node(m.entities[e]);
        }
    }
    return m;
}

} // namespace signet

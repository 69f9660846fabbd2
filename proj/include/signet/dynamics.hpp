#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "signet/graph.hpp"
#include "signet/triads.hpp"

namespace signet {

// Edge state in one snapshot; '0' denotes absence in report signatures.
enum class EdgeState : int { positive, negative, absent };

inline char edge_state_char(EdgeState s) noexcept {
    switch (s) {
        case EdgeState::positive: return '+';
        case EdgeState::negative: return '-';
        default: return '0';
    }
}

inline EdgeState to_edge_state(std::optional<Sign> s) noexcept {
    if (!s) return EdgeState::absent;
    return *s == Sign::positive ? EdgeState::positive : EdgeState::negative;
}

enum class ChangeCategory { establishment, flipping, disruption };

inline const char* change_category_name(ChangeCategory c) {
    switch (c) {
        case ChangeCategory::establishment: return "establishment";
        case ChangeCategory::flipping: return "flipping";
        default: return "disruption";
    }
}

// Endpoint fate across the transition. Disruptions caused by an entity
// leaving the destination snapshot are node_eliminated; establishments whose
// endpoint did not exist in the source snapshot are node_introduced.
enum class NodeContext { both_persist, node_eliminated, node_introduced };

inline const char* node_context_name(NodeContext c) {
    switch (c) {
        case NodeContext::both_persist: return "both_persist";
        case NodeContext::node_eliminated: return "node_eliminated";
        default: return "node_introduced";
    }
}

struct EdgeChange {
    EntityPair pair;
    EdgeState from = EdgeState::absent;
    EdgeState to = EdgeState::absent;
    ChangeCategory category = ChangeCategory::establishment;
    NodeContext context = NodeContext::both_persist;

    bool operator==(const EdgeChange&) const = default;
};

inline ChangeCategory classify_change(EdgeState from, EdgeState to) {
    if (from == to) throw ValidationError("edge change requires from != to");
    if (from == EdgeState::absent) return ChangeCategory::establishment;
    if (to == EdgeState::absent) return ChangeCategory::disruption;
    return ChangeCategory::flipping;
}

// One change per pair whose state differs, in lexicographic pair order.
inline std::vector<EdgeChange> edge_diff(const SignedGraph& before, const SignedGraph& after) {
    std::map<EntityPair, std::pair<EdgeState, EdgeState>> states;
    for (const auto& [pair, sign] : before.edges()) {
        states[pair].first = sign == Sign::positive ? EdgeState::positive : EdgeState::negative;
        states[pair].second = EdgeState::absent;
    }
    for (const auto& [pair, sign] : after.edges()) {
        auto& st = states.try_emplace(pair, EdgeState::absent, EdgeState::absent).first->second;
        st.second = sign == Sign::positive ? EdgeState::positive : EdgeState::negative;
    }

    std::vector<EdgeChange> out;
    for (const auto& [pair, st] : states) {
        auto [from, to] = st;
        if (from == to) continue;
        EdgeChange change;
        change.pair = pair;
        change.from = from;
        change.to = to;
        change.category = classify_change(from, to);
        change.context = NodeContext::both_persist;
        if (change.category == ChangeCategory::disruption) {
            if (!after.has_node(pair.first) || !after.has_node(pair.second)) {
                change.context = NodeContext::node_eliminated;
            }
        } else if (change.category == ChangeCategory::establishment) {
            if (!before.has_node(pair.first) || !before.has_node(pair.second)) {
                change.context = NodeContext::node_introduced;
            }
        }
        out.push_back(std::move(change));
    }
    return out;
}

struct ChangeCounts {
    EpisodeKey key; // destination episode of the transition
    int establishment = 0;
    int establishment_new_entity = 0;
    int flipping = 0;
    int disruption = 0;
    int disruption_eliminated = 0;

    int total() const noexcept { return establishment + flipping + disruption; }
};

struct ChangeStatistics {
    std::vector<ChangeCounts> per_episode;
    ChangeCounts totals; // key is meaningless here
    // Share of establishments between entities already present, and of
    // disruptions caused by entity elimination. Missing when the
    // denominator is zero.
    double establishment_existing_share = 0.0;
    double disruption_eliminated_share = 0.0;
};

inline ChangeCounts count_changes(const std::vector<EdgeChange>& changes, EpisodeKey key) {
    ChangeCounts c;
    c.key = key;
    for (const auto& ch : changes) {
        switch (ch.category) {
            case ChangeCategory::establishment:
                ++c.establishment;
                if (ch.context == NodeContext::node_introduced) ++c.establishment_new_entity;
                break;
            case ChangeCategory::flipping:
                ++c.flipping;
                break;
            case ChangeCategory::disruption:
                ++c.disruption;
                if (ch.context == NodeContext::node_eliminated) ++c.disruption_eliminated;
                break;
        }
    }
    return c;
}

inline ChangeStatistics change_statistics(const EpisodeSeries& series) {
    if (series.size() < 2) {
        throw ValidationError("change_statistics needs at least 2 snapshots");
    }
    ChangeStatistics stats;
    for (std::size_t i = 1; i < series.size(); ++i) {
        auto changes = edge_diff(series.snapshots()[i - 1], series.snapshots()[i]);
        auto counts = count_changes(changes, series.snapshots()[i].key());
        stats.totals.establishment += counts.establishment;
        stats.totals.establishment_new_entity += counts.establishment_new_entity;
        stats.totals.flipping += counts.flipping;
        stats.totals.disruption += counts.disruption;
        stats.totals.disruption_eliminated += counts.disruption_eliminated;
        stats.per_episode.push_back(std::move(counts));
    }
    stats.establishment_existing_share =
        stats.totals.establishment > 0
            ? static_cast<double>(stats.totals.establishment -
                                  stats.totals.establishment_new_entity) /
                  stats.totals.establishment
            : missing_value();
    stats.disruption_eliminated_share =
        stats.totals.disruption > 0
            ? static_cast<double>(stats.totals.disruption_eliminated) / stats.totals.disruption
            : missing_value();
    return stats;
}

// --- Triad transitions ------------------------------------------------------

struct TriadTransition {
    enum class Kind { formation, disappearance, state_change };

    std::array<std::string, 3> members;
    std::optional<TriadType> from; // nullopt = triangle absent
    std::optional<TriadType> to;
    Kind kind = Kind::formation;

    bool operator==(const TriadTransition&) const = default;
};

inline const char* transition_kind_name(TriadTransition::Kind k) {
    switch (k) {
        case TriadTransition::Kind::formation: return "formation";
        case TriadTransition::Kind::disappearance: return "disappearance";
        default: return "state_change";
    }
}

// Triads matched by member triple across consecutive snapshots; unchanged
// triads are omitted. Triads are not tracked across gaps.
inline std::vector<TriadTransition> triad_transitions(const SignedGraph& before,
                                                      const SignedGraph& after) {
    std::map<std::array<std::string, 3>, TriadType> from_types, to_types;
    for (const auto& rec : enumerate_triads(before)) from_types[rec.members] = rec.type;
    for (const auto& rec : enumerate_triads(after)) to_types[rec.members] = rec.type;

    std::vector<TriadTransition> out;
    auto fi = from_types.begin();
    auto ti = to_types.begin();
    while (fi != from_types.end() || ti != to_types.end()) {
        TriadTransition tr;
        if (ti == to_types.end() || (fi != from_types.end() && fi->first < ti->first)) {
            tr.members = fi->first;
            tr.from = fi->second;
            tr.kind = TriadTransition::Kind::disappearance;
            ++fi;
        } else if (fi == from_types.end() || ti->first < fi->first) {
            tr.members = ti->first;
            tr.to = ti->second;
            tr.kind = TriadTransition::Kind::formation;
            ++ti;
        } else {
            if (fi->second == ti->second) {
                ++fi;
                ++ti;
                continue;
            }
            tr.members = fi->first;
            tr.from = fi->second;
            tr.to = ti->second;
            tr.kind = TriadTransition::Kind::state_change;
            ++fi;
            ++ti;
        }
        out.push_back(std::move(tr));
    }
    return out;
}

// 5x5 transition counts over {Absent, Type1..Type4}, index 0 = Absent.
struct TransitionMatrix {
    std::array<std::array<int, 5>, 5> counts{};

    static std::size_t index(std::optional<TriadType> t) {
        return t ? static_cast<std::size_t>(static_cast<int>(*t)) : 0;
    }

    void add(const TriadTransition& tr) { ++counts[index(tr.from)][index(tr.to)]; }
};

inline TransitionMatrix transition_matrix(const EpisodeSeries& series) {
    TransitionMatrix m;
    for (std::size_t i = 1; i < series.size(); ++i) {
        for (const auto& tr : triad_transitions(series.snapshots()[i - 1], series.snapshots()[i])) {
            m.add(tr);
        }
    }
    return m;
}

// --- Imbalance attribution --------------------------------------------------

struct ChangeSignature {
    EdgeState from = EdgeState::absent;
    EdgeState to = EdgeState::absent;

    std::string label() const {
        return std::string(1, edge_state_char(from)) + ">" + edge_state_char(to);
    }

    auto operator<=>(const ChangeSignature&) const = default;
};

struct AttributionEntry {
    EntityPair pair;
    ChangeSignature signature;
    int delta_imbalanced = 0;
};

namespace detail {

// Imbalanced triangles through (u,v) in an edge map; 0 when the edge is
// absent. Only triangles containing the pair can react to its mutation.
inline int imbalanced_through(const SignedGraph::EdgeMap& edges, const EntityPair& pair) {
    auto it = edges.find(pair);
    if (it == edges.end()) return 0;
    int negatives_uv = it->second == Sign::negative ? 1 : 0;

    std::map<std::string, Sign> nbr_u, nbr_v;
    for (const auto& [p, s] : edges) {
        if (p.contains(pair.first)) nbr_u[p.other(pair.first)] = s;
        if (p.contains(pair.second)) nbr_v[p.other(pair.second)] = s;
    }
    int count = 0;
    for (const auto& [w, su] : nbr_u) {
        if (w == pair.second) continue;
        auto jv = nbr_v.find(w);
        if (jv == nbr_v.end()) continue;
        int negatives = negatives_uv + (su == Sign::negative ? 1 : 0) +
                        (jv->second == Sign::negative ? 1 : 0);
        if (negatives % 2 == 1) ++count;
    }
    return count;
}

} // namespace detail

// Credits every edge change with the imbalanced-triangle delta observed when
// the changes are applied one at a time in lexicographic pair order. The
// per-step deltas telescope, so they sum exactly to
// imbalanced(after) - imbalanced(before).
inline std::vector<AttributionEntry> imbalance_attribution(const SignedGraph& before,
                                                           const SignedGraph& after) {
    auto changes = edge_diff(before, after);
    SignedGraph::EdgeMap working = before.edges();

    std::vector<AttributionEntry> out;
    out.reserve(changes.size());
    for (const auto& change : changes) {
        int prior = detail::imbalanced_through(working, change.pair);
        if (change.to == EdgeState::absent) {
            working.erase(change.pair);
        } else {
            working[change.pair] =
                change.to == EdgeState::positive ? Sign::positive : Sign::negative;
        }
        int current = detail::imbalanced_through(working, change.pair);
        out.push_back({change.pair, ChangeSignature{change.from, change.to}, current - prior});
    }
    return out;
}

// Aggregate positive deltas (increase of imbalance) and negative deltas
// (decrease) per change signature.
struct AttributionSummary {
    std::map<ChangeSignature, int> increase;
    std::map<ChangeSignature, int> decrease;
};

inline AttributionSummary attribution_summary(const EpisodeSeries& series) {
    AttributionSummary summary;
    for (EdgeState from : {EdgeState::positive, EdgeState::negative, EdgeState::absent}) {
        for (EdgeState to : {EdgeState::positive, EdgeState::negative, EdgeState::absent}) {
            if (from == to) continue;
            summary.increase[{from, to}] = 0;
            summary.decrease[{from, to}] = 0;
        }
    }
    for (std::size_t i = 1; i < series.size(); ++i) {
        for (const auto& entry :
             imbalance_attribution(series.snapshots()[i - 1], series.snapshots()[i])) {
            if (entry.delta_imbalanced > 0) {
                summary.increase[entry.signature] += entry.delta_imbalanced;
            } else if (entry.delta_imbalanced < 0) {
                summary.decrease[entry.signature] += -entry.delta_imbalanced;
            }
        }
    }
    return summary;
}

// --- Unpredictability ---------------------------------------------------------

// U = (T2 + T3) / total triads: the share of triads that can move to two
// distinct states by a single edge-sign change. Missing when there are no
// triads.
inline double unpredictability(const SignedGraph& graph) {
    BalanceSummary s = balance_summary(graph);
    int total = s.total();
    if (total == 0) return missing_value();
    return static_cast<double>(s.type_counts[1] + s.type_counts[2]) / total;
}

struct UnpredictabilitySeries {
    std::vector<EpisodeKey> episodes;
    std::vector<double> values;
};

inline UnpredictabilitySeries unpredictability_series(const EpisodeSeries& series) {
    UnpredictabilitySeries out;
    for (const auto& g : series.snapshots()) {
        out.episodes.push_back(g.key());
        out.values.push_back(unpredictability(g));
    }
    return out;
}

} // namespace signet

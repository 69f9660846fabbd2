#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "signet/error.hpp"
#include "signet/graph.hpp"

namespace signet {

enum class Format { csv, json };

struct ParseWarning {
    std::size_t line = 0; // 0 when the source has no line notion (JSON)
    std::string message;
};

struct ParsedSeries {
    EpisodeSeries series;
    std::vector<ParseWarning> warnings;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline int parse_positive_int(const std::string& token, const char* what, std::size_t line) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(token, &pos);
        if (pos != token.size() || v < 1) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + " must be a positive integer, got '" + token + "'",
                         line);
    }
}

inline Sign parse_sign_token(const std::string& token, std::size_t line) {
    if (token == "+" || token == "+1") return Sign::positive;
    if (token == "-" || token == "-1") return Sign::negative;
    throw ParseError("unknown sign token '" + token + "'", line);
}

// Accumulates rows per episode, then materializes validated snapshots.
struct SeriesBuilder {
    std::map<EpisodeKey, std::set<std::string>> nodes;
    std::map<EpisodeKey, SignedGraph::EdgeMap> edges;
    std::vector<ParseWarning> warnings;

    void add_node(EpisodeKey key, const std::string& name) {
        nodes[key].insert(name);
        edges[key]; // make the episode exist even if it stays edgeless
    }

    void add_edge(EpisodeKey key, const std::string& a, const std::string& b, Sign sign,
                  std::size_t line) {
        EntityPair pair = EntityPair::of(a, b);
        auto& emap = edges[key];
        auto it = emap.find(pair);
        if (it != emap.end()) {
            if (it->second != sign) {
                throw ConflictError("conflicting sign for " + pair.first + " -- " + pair.second +
                                        " in " + key.label(),
                                    line);
            }
            warnings.push_back({line, "duplicate edge " + pair.first + " -- " + pair.second +
                                          " in " + key.label() + " (deduplicated)"});
            return;
        }
        emap.emplace(pair, sign);
        nodes[key].insert(a);
        nodes[key].insert(b);
    }

    ParsedSeries build() {
        std::vector<SignedGraph> snaps;
        snaps.reserve(edges.size());
        for (auto& [key, emap] : edges) {
            snaps.emplace_back(key, std::move(nodes[key]), std::move(emap));
        }
        return ParsedSeries{EpisodeSeries(std::move(snaps)), std::move(warnings)};
    }
};

inline ParsedSeries parse_csv(std::istream& in) {
    SeriesBuilder builder;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = split_csv_row(line);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"season", "episode", "source", "target", "sign"}) {
                throw ParseError("expected header 'season,episode,source,target,sign'", lineno);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 5) {
            throw ParseError("expected 5 columns, got " + std::to_string(fields.size()), lineno);
        }
        EpisodeKey key{parse_positive_int(fields[0], "season", lineno),
                       parse_positive_int(fields[1], "episode", lineno)};
        const std::string& source = fields[2];
        const std::string& target = fields[3];
        const std::string& sign = fields[4];
        if (source.empty()) throw ParseError("empty source entity name", lineno);
        if (target.empty() && sign.empty()) {
            builder.add_node(key, source); // explicit isolated-node row
            continue;
        }
        if (target.empty()) throw ParseError("empty target entity name", lineno);
        if (sign.empty()) throw ParseError("missing sign", lineno);
        builder.add_edge(key, source, target, parse_sign_token(sign, lineno), lineno);
    }
    return builder.build();
}

inline ParsedSeries parse_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("top-level JSON value must be an array of snapshots");

    SeriesBuilder builder;
    for (const auto& snap : doc) {
        if (!snap.is_object() || !snap.contains("season") || !snap.contains("episode")) {
            throw ParseError("snapshot object must carry 'season' and 'episode'");
        }
        if (!snap["season"].is_number_integer() || !snap["episode"].is_number_integer()) {
            throw ParseError("'season' and 'episode' must be integers");
        }
        EpisodeKey key{snap["season"].get<int>(), snap["episode"].get<int>()};
        if (key.season < 1 || key.episode < 1) {
            throw ParseError("episode key must be positive, got " + key.label());
        }
        if (snap.contains("nodes")) {
            for (const auto& n : snap["nodes"]) {
                if (!n.is_string() || trim(n.get<std::string>()).empty()) {
                    throw ParseError("node names must be non-empty strings in " + key.label());
                }
                builder.add_node(key, trim(n.get<std::string>()));
            }
        }
        builder.edges[key]; // snapshot exists even with no edges
        if (!snap.contains("edges")) continue;
        for (const auto& e : snap["edges"]) {
            if (!e.contains("source") || !e.contains("target") || !e.contains("sign")) {
                throw ParseError("edge object must carry source/target/sign in " + key.label());
            }
            std::string a = trim(e["source"].get<std::string>());
            std::string b = trim(e["target"].get<std::string>());
            if (a.empty() || b.empty()) throw ParseError("empty entity name in " + key.label());
            int sv = e["sign"].is_number_integer() ? e["sign"].get<int>() : 0;
            if (sv != 1 && sv != -1) {
                throw ParseError("edge sign must be 1 or -1 in " + key.label());
            }
            builder.add_edge(key, a, b, sv == 1 ? Sign::positive : Sign::negative, 0);
        }
    }
    return builder.build();
}

} // namespace detail

inline ParsedSeries parse_edge_list(std::istream& in, Format format) {
    return format == Format::csv ? detail::parse_csv(in) : detail::parse_json(in);
}

// Canonical CSV: snapshots by key, isolated-node rows first (lexicographic),
// then edges by lexicographic pair. Parsing the output reproduces the series.
inline void serialize_csv(const EpisodeSeries& series, std::ostream& out) {
    out << "season,episode,source,target,sign\n";
    for (const auto& g : series.snapshots()) {
        std::set<std::string> connected;
        for (const auto& [pair, sign] : g.edges()) {
            (void)sign;
            connected.insert(pair.first);
            connected.insert(pair.second);
        }
        for (const auto& name : g.nodes()) {
            if (!connected.contains(name)) {
                out << g.key().season << ',' << g.key().episode << ',' << name << ",,\n";
            }
        }
        for (const auto& [pair, sign] : g.edges()) {
            out << g.key().season << ',' << g.key().episode << ',' << pair.first << ','
                << pair.second << ',' << sign_char(sign) << '\n';
        }
    }
}

inline nlohmann::ordered_json to_json(const EpisodeSeries& series) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& g : series.snapshots()) {
        nlohmann::ordered_json snap;
        snap["season"] = g.key().season;
        snap["episode"] = g.key().episode;
        snap["nodes"] = g.nodes();
        nlohmann::ordered_json edges = nlohmann::ordered_json::array();
        for (const auto& [pair, sign] : g.edges()) {
            edges.push_back({{"source", pair.first},
                             {"target", pair.second},
                             {"sign", sign_value(sign)}});
        }
        snap["edges"] = std::move(edges);
        arr.push_back(std::move(snap));
    }
    return arr;
}

inline void serialize_json(const EpisodeSeries& series, std::ostream& out) {
    out << to_json(series).dump(2) << '\n';
}

} // namespace signet

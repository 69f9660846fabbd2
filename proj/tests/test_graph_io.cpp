#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "signet/graph.hpp"
#include "signet/io.hpp"
#include "signet/metrics.hpp"
#include "support/testutil.hpp"

using namespace signet;
using testutil::make_graph;

static ParsedSeries parse_csv_text(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in, Format::csv);
}

TEST_CASE("CSV parsing builds snapshots with implied and explicit nodes") {
    auto parsed = parse_csv_text(
        "season,episode,source,target,sign\n"
        "1,1,Stark,Lannister,+\n"
        "1,1,Stark,Baratheon_Stannis,-\n");
    REQUIRE(parsed.warnings.empty());
    const auto& series = parsed.series;
    REQUIRE(series.size() == 1);
    const SignedGraph& g = series.snapshots()[0];
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.sign_of("Stark", "Lannister") == Sign::positive);
    CHECK(g.sign_of("Stark", "Baratheon_Stannis") == Sign::negative);

    SECTION("endpoint order does not matter") {
        CHECK(g.sign_of("Lannister", "Stark") == Sign::positive);
    }
}

TEST_CASE("empty input gives an empty series") {
    auto parsed = parse_csv_text("season,episode,source,target,sign\n");
    CHECK(parsed.series.empty());
    CHECK(parse_csv_text("").series.empty());
}

TEST_CASE("node-only rows produce isolated nodes") {
    auto parsed = parse_csv_text(
        "season,episode,source,target,sign\n"
        "1,1,Greyjoy,,\n"
        "1,1,Stark,Lannister,+\n");
    const SignedGraph& g = parsed.series.snapshots()[0];
    CHECK(g.node_count() == 3);
    CHECK(g.has_node("Greyjoy"));
    CHECK(g.edge_count() == 1);
}

TEST_CASE("conflicting duplicate edges are an error, identical ones a warning") {
    CHECK_THROWS_AS(parse_csv_text("season,episode,source,target,sign\n"
                                   "1,1,A,B,+\n"
                                   "1,1,B,A,-\n"),
                    ConflictError);

    auto parsed = parse_csv_text(
        "season,episode,source,target,sign\n"
        "1,1,A,B,+\n"
        "1,1,B,A,+1\n");
    REQUIRE(parsed.warnings.size() == 1);
    CHECK(parsed.warnings[0].line == 3);
    CHECK(parsed.series.snapshots()[0].edge_count() == 1);
}

TEST_CASE("malformed rows carry line numbers") {
    SECTION("wrong column count") {
        try {
            parse_csv_text("season,episode,source,target,sign\n1,1,A,B\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SECTION("unknown sign token") {
        try {
            parse_csv_text("season,episode,source,target,sign\n1,1,A,B,?\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
            CHECK(std::string(e.what()).find("sign") != std::string::npos);
        }
    }
    SECTION("empty entity name") {
        CHECK_THROWS_AS(parse_csv_text("season,episode,source,target,sign\n1,1,,B,+\n"),
                        ParseError);
    }
    SECTION("non-positive season") {
        CHECK_THROWS_AS(parse_csv_text("season,episode,source,target,sign\n0,1,A,B,+\n"),
                        ParseError);
    }
    SECTION("bad header") {
        CHECK_THROWS_AS(parse_csv_text("a,b,c,d,e\n"), ParseError);
    }
}

TEST_CASE("self-loops are rejected") {
    CHECK_THROWS(parse_csv_text("season,episode,source,target,sign\n1,1,A,A,+\n"));
}

TEST_CASE("JSON parsing matches the schema") {
    std::istringstream in(R"([
      {"season": 1, "episode": 1,
       "nodes": ["A", "B", "C", "Lonely"],
       "edges": [{"source": "A", "target": "B", "sign": 1},
                  {"source": "B", "target": "C", "sign": -1}]}
    ])");
    auto parsed = parse_edge_list(in, Format::json);
    const SignedGraph& g = parsed.series.snapshots()[0];
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_node("Lonely"));
    CHECK(g.sign_of("B", "C") == Sign::negative);

    SECTION("invalid sign value") {
        std::istringstream bad(R"([{"season":1,"episode":1,
            "edges":[{"source":"A","target":"B","sign":0}]}])");
        CHECK_THROWS_AS(parse_edge_list(bad, Format::json), ParseError);
    }
    SECTION("structurally invalid JSON") {
        std::istringstream bad("{not json");
        CHECK_THROWS_AS(parse_edge_list(bad, Format::json), ParseError);
    }
}

TEST_CASE("episode_graph finds snapshots and names missing keys") {
    auto parsed = parse_csv_text(
        "season,episode,source,target,sign\n"
        "6,10,A,B,+\n");
    CHECK(episode_graph(parsed.series, 6, 10).edge_count() == 1);
    try {
        episode_graph(parsed.series, 7, 1);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("S7E1") != std::string::npos);
    }
}

TEST_CASE("series ordering and duplicate keys") {
    auto parsed = parse_csv_text(
        "season,episode,source,target,sign\n"
        "2,1,A,B,+\n"
        "1,10,A,B,+\n"
        "1,2,A,B,-\n");
    auto keys = parsed.series.episode_keys();
    REQUIRE(keys.size() == 3);
    CHECK(keys[0] == EpisodeKey{1, 2});
    CHECK(keys[1] == EpisodeKey{1, 10});
    CHECK(keys[2] == EpisodeKey{2, 1});
    CHECK(parsed.series.flat_index({2, 1}) == 3);

    std::vector<SignedGraph> dup;
    dup.push_back(make_graph({1, 1}, {}, {{"A", "B", '+'}}));
    dup.push_back(make_graph({1, 1}, {}, {{"A", "C", '+'}}));
    CHECK_THROWS_AS(EpisodeSeries(std::move(dup)), ValidationError);
}

TEST_CASE("presence matrix covers the universe in order") {
    std::vector<SignedGraph> snaps;
    snaps.push_back(make_graph({1, 1}, {"C"}, {{"A", "B", '+'}}));
    snaps.push_back(make_graph({1, 2}, {}, {{"A", "B", '-'}}));
    EpisodeSeries series(std::move(snaps));

    PresenceMatrix m = presence_matrix(series);
    REQUIRE(m.entities == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(m.episodes.size() == 2);
    CHECK(m.present[0] == std::vector<bool>{true, true});
    CHECK(m.present[1] == std::vector<bool>{true, true});
    CHECK(m.present[2] == std::vector<bool>{true, false});

    SECTION("row sums equal the number of snapshots containing the entity") {
        for (std::size_t i = 0; i < m.entities.size(); ++i) {
            int row_sum = 0;
            for (bool p : m.present[i]) row_sum += p ? 1 : 0;
            int presence = 0;
            for (const auto& g : series.snapshots()) {
                presence += g.has_node(m.entities[i]) ? 1 : 0;
            }
            CHECK(row_sum == presence);
        }
    }
}

TEST_CASE("validation rejects edges with endpoints outside the node set") {
    SignedGraph::EdgeMap edges;
    edges.emplace(EntityPair::of("A", "B"), Sign::positive);
    CHECK_THROWS_AS(SignedGraph(EpisodeKey{1, 1}, std::set<std::string>{"A"}, edges),
                    ValidationError);
}

TEST_CASE("round-trip: serialize then parse reproduces the series") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        EpisodeSeries original = testutil::random_series(rng, 6, 8);

        std::ostringstream csv;
        serialize_csv(original, csv);
        std::istringstream csv_in(csv.str());
        auto csv_back = parse_edge_list(csv_in, Format::csv);
        REQUIRE(csv_back.warnings.empty());
        CHECK(csv_back.series == original);

        // degree-sum identity on every parsed snapshot
        for (const auto& g : csv_back.series.snapshots()) {
            int total = 0;
            for (const auto& [name, d] : degree(g)) {
                (void)name;
                total += d;
            }
            CHECK(total == 2 * static_cast<int>(g.edge_count()));
        }

        std::ostringstream json;
        serialize_json(original, json);
        std::istringstream json_in(json.str());
        auto json_back = parse_edge_list(json_in, Format::json);
        CHECK(json_back.series == original);
    }
}

TEST_CASE("canonical serialization is deterministic") {
    auto parsed = parse_csv_text(
        "season,episode,source,target,sign\n"
        "1,2,Z,Y,-\n"
        "1,1,B,A,+\n"
        "1,1,C,A,-\n");
    std::ostringstream first, second;
    serialize_csv(parsed.series, first);
    serialize_csv(parsed.series, second);
    CHECK(first.str() == second.str());
    // snapshots ordered by key, edges by lexicographic pair
    CHECK(first.str() ==
          "season,episode,source,target,sign\n"
          "1,1,A,B,+\n"
          "1,1,A,C,-\n"
          "1,2,Y,Z,-\n");
}

// Acceptance suite: one line per criterion, [PASS]/[FAIL]/[SKIP].
//
// Criteria 1-10 are self-contained property checks. Criteria 11-15 reproduce
// published statistics and need the external dataset: point SIGNET_DATA (or
// ./data) at a directory holding network.csv and responses.csv in the
// formats this project documents. Without the dataset they are skipped.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "signet/correlation.hpp"
#include "signet/dynamics.hpp"
#include "signet/io.hpp"
#include "signet/metrics.hpp"
#include "signet/nullmodel.hpp"
#include "signet/pipeline.hpp"
#include "signet/responses.hpp"
#include "signet/triads.hpp"
#include "support/testutil.hpp"

using namespace signet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum Kind { pass, fail, skip } kind = pass;
    std::string detail;
};

Outcome ok() { return {Outcome::pass, ""}; }
Outcome failed(const std::string& why) { return {Outcome::fail, why}; }
Outcome skipped(const std::string& why) { return {Outcome::skip, why}; }

#define EXPECT(cond, why)                      \
    do {                                       \
        if (!(cond)) return failed(why);       \
    } while (0)

// ---- criteria 1-10: property suite ------------------------------------------

Outcome criterion_1_triad_classification() {
    for (int bits = 0; bits < 8; ++bits) {
        std::array<Sign, 3> signs;
        int product = 1, negatives = 0;
        for (int i = 0; i < 3; ++i) {
            signs[i] = (bits >> i) & 1 ? Sign::negative : Sign::positive;
            product *= sign_value(signs[i]);
            negatives += signs[i] == Sign::negative ? 1 : 0;
        }
        auto [type, balanced] = classify_triad(signs);
        EXPECT(static_cast<int>(type) == negatives + 1, "type does not track negative count");
        EXPECT(balanced == (product == 1), "balance disagrees with the sign product");
        EXPECT(balanced == (negatives % 2 == 0), "balance disagrees with negative parity");
    }
    return ok();
}

Outcome criterion_2_triangle_enumeration() {
    std::mt19937 rng(1601);
    std::uniform_int_distribution<std::size_t> size(3, 12);
    std::uniform_real_distribution<double> prob(0.1, 0.8);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = testutil::random_graph(rng, size(rng), prob(rng));
        auto fast = enumerate_triads(g);
        auto slow = testutil::brute_force_triangles(g);
        EXPECT(fast.size() == slow.size(), "triangle count mismatch");
        for (std::size_t i = 0; i < fast.size(); ++i) {
            EXPECT(fast[i].members == slow[i], "triangle membership mismatch");
        }
    }
    return ok();
}

Outcome criterion_3_betweenness() {
    auto path = testutil::make_graph({1, 1}, {}, {{"A", "B", '+'}, {"B", "C", '+'}});
    auto pb = betweenness(path);
    EXPECT(pb["A"] == 0.0 && pb["B"] == 1.0 && pb["C"] == 0.0, "path A-B-C should give (0,1,0)");

    auto cycle = testutil::make_graph(
        {1, 1}, {}, {{"A", "B", '+'}, {"B", "C", '+'}, {"C", "D", '+'}, {"A", "D", '+'}});
    for (const auto& [name, v] : betweenness(cycle)) {
        EXPECT(std::fabs(v - 0.5) < 1e-12, "4-cycle node " + name + " should score 0.5");
    }

    std::mt19937 rng(1701);
    std::uniform_int_distribution<std::size_t> size(3, 10);
    std::uniform_real_distribution<double> prob(0.15, 0.8);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = testutil::random_graph(rng, size(rng), prob(rng));
        auto fast = betweenness(g);
        auto slow = testutil::brute_force_betweenness(g);
        for (const auto& [name, expected] : slow) {
            EXPECT(std::fabs(fast.at(name) - expected) <= 1e-9,
                   "betweenness differs from the oracle");
        }
    }
    return ok();
}

Outcome criterion_4_assortativity() {
    for (int leaves = 2; leaves <= 10; ++leaves) {
        std::vector<testutil::EdgeSpec> edges;
        for (int i = 0; i < leaves; ++i) {
            edges.push_back({"Hub", "L" + std::to_string(i), '+'});
        }
        auto star = testutil::make_graph({1, 1}, {}, edges);
        double r = assortativity_by_degree(star);
        EXPECT(std::fabs(r + 1.0) <= 1e-9, "star assortativity should be -1");
    }

    std::mt19937 rng(1801);
    std::uniform_real_distribution<double> attr_dist(0.0, 5.0);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 50; ++trial) {
        auto g = testutil::random_graph(rng, 8, 0.45);
        if (g.edge_count() == 0) continue;
        std::map<std::string, double> attr;
        for (const auto& name : g.nodes()) attr[name] = attr_dist(rng);
        double base = assortativity(g, attr);
        if (is_missing(base)) continue;
        std::map<std::string, double> affine;
        for (const auto& [name, v] : attr) affine[name] = 2.25 * v + 7.0;
        EXPECT(std::fabs(assortativity(g, affine) - base) <= 1e-9,
               "assortativity is not affine-invariant");
        ++checked;
    }
    EXPECT(checked >= 50, "not enough usable random graphs");
    return ok();
}

Outcome criterion_5_attribution_conservation() {
    std::mt19937 rng(1901);
    for (int trial = 0; trial < 200; ++trial) {
        EpisodeSeries pair = testutil::random_series(rng, 2, 4 + trial % 9, 0.5);
        const SignedGraph& before = pair.snapshots()[0];
        const SignedGraph& after = pair.snapshots()[1];
        int attributed = 0;
        for (const auto& entry : imbalance_attribution(before, after)) {
            attributed += entry.delta_imbalanced;
        }
        EXPECT(attributed == imbalanced_count(after) - imbalanced_count(before),
               "attributed deltas do not telescope");
    }
    return ok();
}

Outcome criterion_6_sign_shuffle() {
    std::mt19937 seed_rng(2001);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = testutil::random_graph(seed_rng, 8, 0.5);
        rng::Generator gen(trial);
        SignedGraph s = shuffle_signs(g, gen);
        EXPECT(s.nodes() == g.nodes(), "shuffle changed the node set");
        int neg_a = 0, neg_b = 0;
        auto it = g.edges().begin();
        auto jt = s.edges().begin();
        for (; it != g.edges().end(); ++it, ++jt) {
            EXPECT(it->first == jt->first, "shuffle changed the unsigned edge set");
            neg_a += it->second == Sign::negative;
            neg_b += jt->second == Sign::negative;
        }
        EXPECT(neg_a == neg_b, "shuffle changed the negative-edge count");
    }

    auto g = testutil::make_graph({1, 1}, {},
                                  {{"A", "B", '+'},
                                   {"B", "C", '-'},
                                   {"A", "C", '+'},
                                   {"C", "D", '-'},
                                   {"B", "D", '+'},
                                   {"A", "D", '+'}});
    auto exact = testutil::exhaustive_shuffle_expectation(g);
    std::vector<SignedGraph> snaps{g};
    EpisodeSeries series(std::move(snaps));
    const int replicates = 10000;
    auto mc = expected_imbalance(series, {replicates, 613, AverageDenominator::presence_episodes});
    for (const auto& [name, dist] : mc) {
        double se = dist.sd / std::sqrt(static_cast<double>(replicates));
        EXPECT(std::fabs(dist.mean - exact.at(name)) <= 3 * se + 1e-12,
               "Monte Carlo mean outside 3 standard errors for " + name);
    }

    auto again = expected_imbalance(series, {replicates, 613, AverageDenominator::presence_episodes});
    for (const auto& [name, dist] : mc) {
        EXPECT(dist.mean == again.at(name).mean && dist.sd == again.at(name).sd,
               "fixed seed did not reproduce bit-identical results");
    }
    return ok();
}

Outcome criterion_7_unpredictability() {
    std::mt19937 rng(2101);
    for (int trial = 0; trial < 500; ++trial) {
        auto g = testutil::random_graph(rng, 4 + trial % 9, 0.5);
        double u = unpredictability(g);
        if (is_missing(u)) continue;
        EXPECT(u >= 0.0 && u <= 1.0, "U left [0,1]");
    }
    auto mixed = testutil::make_graph({1, 1}, {},
                                      {{"A", "B", '+'}, {"B", "C", '+'}, {"A", "C", '-'},
                                       {"D", "E", '+'}, {"E", "F", '-'}, {"D", "F", '-'}});
    EXPECT(unpredictability(mixed) == 1.0, "one- and two-negative triads should give U = 1");
    auto friendly = testutil::make_graph(
        {1, 1}, {}, {{"A", "B", '+'}, {"B", "C", '+'}, {"A", "C", '+'}});
    EXPECT(unpredictability(friendly) == 0.0, "all-positive graph should give U = 0");
    return ok();
}

Outcome criterion_8_spearman() {
    EXPECT(stats::spearman({1, 2, 3, 4}, {1, 3, 2, 4}) == 0.8,
           "spearman((1,2,3,4),(1,3,2,4)) must equal 0.8 exactly");

    std::mt19937 rng(2201);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 12; ++i) {
            x.push_back(dist(rng));
            y.push_back(dist(rng));
        }
        double plain = stats::spearman(x, y);
        double partial = stats::partial_spearman(x, y, {});
        EXPECT(std::fabs(partial - plain) <= 1e-12, "zero-control partial differs from spearman");

        std::vector<double> fx;
        for (double v : x) fx.push_back(std::exp(v));
        EXPECT(stats::spearman(fx, y) == plain, "rank invariance under exp failed");
        std::vector<double> gy;
        for (double v : y) gy.push_back(v * v * v + 2.0 * v);
        EXPECT(stats::spearman(x, gy) == plain, "rank invariance under cubic failed");

        std::vector<double> control;
        for (int i = 0; i < 12; ++i) control.push_back(dist(rng));
        double controlled = stats::partial_spearman(x, y, {control});
        EXPECT(stats::partial_spearman(fx, y, {control}) == controlled,
               "partial rank invariance failed");
    }
    return ok();
}

Outcome criterion_9_season_normalize() {
    std::mt19937 rng(2301);
    std::uniform_real_distribution<double> votes(100.0, 100000.0);
    std::uniform_real_distribution<double> rating(1.0, 9.9);
    std::vector<ResponseRecord> records;
    for (int season = 1; season <= 6; ++season) {
        for (int episode = 1; episode <= 10; ++episode) {
            records.push_back({{season, episode}, votes(rng), rating(rng)});
        }
    }
    ResponseSeries normalized = season_normalize(ResponseSeries(std::move(records)));
    std::map<int, std::pair<double, double>> sums;
    std::map<int, int> counts;
    for (const auto& rec : normalized.records()) {
        sums[rec.key.season].first += rec.votes;
        sums[rec.key.season].second += rec.rating;
        counts[rec.key.season] += 1;
    }
    for (const auto& [season, sum] : sums) {
        EXPECT(std::fabs(sum.first / counts[season] - 1.0) <= 1e-12,
               "votes mean for season " + std::to_string(season) + " is not 1");
        EXPECT(std::fabs(sum.second / counts[season] - 1.0) <= 1e-12,
               "rating mean for season " + std::to_string(season) + " is not 1");
    }
    return ok();
}

Outcome criterion_10_pipeline_determinism() {
    fs::path dir = fs::temp_directory_path() / "signet_acceptance_c10";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::mt19937 rng(20240602);
    EpisodeSeries series = testutil::random_series(rng, 60, 25, 0.4);
    fs::path net = dir / "network.csv";
    {
        std::ofstream out(net);
        serialize_csv(series, out);
    }
    std::uniform_real_distribution<double> votes(1000.0, 50000.0);
    std::uniform_real_distribution<double> rating(4.0, 9.5);
    fs::path resp = dir / "responses.csv";
    {
        std::ofstream out(resp);
        out << "season,episode,votes,rating\n";
        for (const auto& key : series.episode_keys()) {
            out << key.season << ',' << key.episode << ',' << votes(rng) << ',' << rating(rng)
                << '\n';
        }
    }

    auto run_into = [&](const fs::path& out_dir) {
        RunConfig config;
        config.input_network_path = net;
        config.input_response_path = resp;
        config.output_directory = out_dir;
        config.seed = 31415;
        config.replicates = 30;
        return run_pipeline(config);
    };

    auto start = std::chrono::steady_clock::now();
    Manifest a = run_into(dir / "run_a");
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT(seconds < 5.0,
           "pipeline took " + std::to_string(seconds) + " s, budget is 5 s");

    Manifest b = run_into(dir / "run_b");
    EXPECT(a.artifacts.size() == b.artifacts.size(), "artifact inventories differ");
    for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
        EXPECT(a.artifacts[i].file == b.artifacts[i].file, "artifact names differ");
        EXPECT(a.artifacts[i].fnv1a64 == b.artifacts[i].fnv1a64,
               "artifact bytes differ for " + a.artifacts[i].file);
    }
    fs::remove_all(dir);
    return ok();
}

// ---- criteria 11-15: dataset reproduction ------------------------------------

struct Dataset {
    EpisodeSeries series;
    ResponseSeries responses;
    bool has_responses = false;
};

std::optional<fs::path> dataset_root() {
    if (const char* env = std::getenv("SIGNET_DATA")) {
        fs::path p(env);
        if (fs::exists(p / "network.csv")) return p;
    }
    fs::path local("data");
    if (fs::exists(local / "network.csv")) return local;
    return std::nullopt;
}

std::optional<Dataset> load_dataset() {
    auto root = dataset_root();
    if (!root) return std::nullopt;
    Dataset d;
    d.series = load_network(*root / "network.csv");
    if (fs::exists(*root / "responses.csv")) {
        d.responses = load_responses(*root / "responses.csv");
        d.has_responses = true;
    }
    return d;
}

const char* dataset_hint =
    "dataset not found (set SIGNET_DATA to a directory with network.csv"
    " and responses.csv)";

Outcome criterion_11_mean_imbalance(const std::optional<Dataset>& data) {
    if (!data) return skipped(dataset_hint);
    auto summaries = balance_series(data->series);
    double count_sum = 0.0, fraction_sum = 0.0;
    int fraction_n = 0;
    for (const auto& s : summaries) {
        count_sum += s.imbalanced_count;
        if (!is_missing(s.imbalanced_fraction)) {
            fraction_sum += s.imbalanced_fraction;
            ++fraction_n;
        }
    }
    double mean_count = count_sum / static_cast<double>(summaries.size());
    double mean_fraction = fraction_sum / fraction_n;
    EXPECT(std::fabs(mean_count - 4.75) <= 0.05,
           "mean imbalanced triads per episode = " + std::to_string(mean_count));
    EXPECT(std::fabs(mean_fraction - 0.30) <= 0.02,
           "mean imbalanced fraction = " + std::to_string(mean_fraction));
    return ok();
}

Outcome criterion_12_establishment(const std::optional<Dataset>& data) {
    if (!data) return skipped(dataset_hint);
    ChangeStatistics stats = change_statistics(data->series);
    EXPECT(stats.totals.establishment > stats.totals.flipping &&
               stats.totals.establishment > stats.totals.disruption,
           "establishment is not the most frequent change");
    EXPECT(std::fabs(stats.establishment_existing_share - 0.875) <= 0.005,
           "existing-entity establishment share = " +
               std::to_string(stats.establishment_existing_share));
    return ok();
}

Outcome criterion_13_type3_involvement(const std::optional<Dataset>& data) {
    if (!data) return skipped(dataset_hint);
    TransitionMatrix m = transition_matrix(data->series);
    auto idx = [](int type) { return static_cast<std::size_t>(type); };

    int formations = 0, formations_t3 = 0;
    int disappearances = 0, disappearances_t3 = 0;
    int state_changes = 0, state_changes_t3 = 0;
    for (int t = 1; t <= 4; ++t) {
        formations += m.counts[0][idx(t)];
        disappearances += m.counts[idx(t)][0];
        for (int u = 1; u <= 4; ++u) {
            if (t == u) continue;
            state_changes += m.counts[idx(t)][idx(u)];
            if (t == 3 || u == 3) state_changes_t3 += m.counts[idx(t)][idx(u)];
        }
    }
    formations_t3 = m.counts[0][3];
    disappearances_t3 = m.counts[3][0];

    EXPECT(formations > 0 && disappearances > 0 && state_changes > 0, "no transitions found");
    EXPECT(static_cast<double>(formations_t3) / formations > 0.47,
           "type-3 formation share too small");
    EXPECT(static_cast<double>(state_changes_t3) / state_changes > 0.86,
           "type-3 state-change share too small");
    EXPECT(static_cast<double>(disappearances_t3) / disappearances > 0.40,
           "type-3 disappearance share too small");
    return ok();
}

Outcome criterion_14_partial_correlations(const std::optional<Dataset>& data) {
    if (!data) return skipped(dataset_hint);
    if (!data->has_responses) return skipped("dataset has no responses.csv");
    validate_alignment(data->series, data->responses);
    ResponseSeries normalized = season_normalize(data->responses);
    PropertyVector pv = property_vector(data->series);

    std::vector<double> votes, rating;
    for (const auto& rec : normalized.records()) {
        votes.push_back(rec.votes);
        rating.push_back(rec.rating);
    }
    const std::vector<double> votes_expected = {-0.059, 0.00041, -0.036, 0.14, -0.056, 0.41};
    const std::vector<double> rating_expected = {-0.25, 0.11, 0.020, -0.0033, 0.011, 0.20};

    auto votes_rows = partial_correlation_table(pv, votes, "votes");
    auto rating_rows = partial_correlation_table(pv, rating, "rating");
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT(std::fabs(votes_rows[i].coefficient - votes_expected[i]) <= 0.03,
               "votes coefficient " + votes_rows[i].property + " = " +
                   std::to_string(votes_rows[i].coefficient));
        EXPECT(std::fabs(rating_rows[i].coefficient - rating_expected[i]) <= 0.03,
               "rating coefficient " + rating_rows[i].property + " = " +
                   std::to_string(rating_rows[i].coefficient));
    }
    EXPECT(votes_rows[5].p_value < 0.01,
           "assortativity p-value = " + std::to_string(votes_rows[5].p_value));
    return ok();
}

Outcome criterion_15_u_peak(const std::optional<Dataset>& data) {
    if (!data) return skipped(dataset_hint);
    UnpredictabilitySeries u = unpredictability_series(data->series);
    double best = -1.0;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        if (!is_missing(u.values[i]) && u.values[i] > best) {
            best = u.values[i];
            best_index = i;
        }
    }
    EXPECT(best >= 0.0, "U series is entirely missing");
    EXPECT(u.episodes[best_index].season == 2,
           "U peaks at " + u.episodes[best_index].label() + ", not in season 2");
    return ok();
}

} // namespace

int main() {
    std::optional<Dataset> data;
    try {
        data = load_dataset();
    } catch (const Error& e) {
        std::cerr << "dataset load failed: " << e.what() << "\n";
        data.reset();
    }

    struct Entry {
        int id;
        std::string name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria = {
        {1, "triad classification matches the sign-product oracle",
         criterion_1_triad_classification},
        {2, "triangle enumeration matches brute force", criterion_2_triangle_enumeration},
        {3, "betweenness matches the all-shortest-paths oracle", criterion_3_betweenness},
        {4, "assortativity: stars at -1, affine invariance", criterion_4_assortativity},
        {5, "imbalance attribution conserves the delta", criterion_5_attribution_conservation},
        {6, "sign shuffle: invariants, Monte Carlo vs exhaustive, determinism",
         criterion_6_sign_shuffle},
        {7, "unpredictability bounds and fixed points", criterion_7_unpredictability},
        {8, "spearman fixed point, zero-control partial, rank invariance", criterion_8_spearman},
        {9, "season normalization gives unit season means", criterion_9_season_normalize},
        {10, "full pipeline under 5 s and byte-deterministic", criterion_10_pipeline_determinism},
        {11, "dataset: mean imbalanced triads 4.75, fraction ~30%",
         [&] { return criterion_11_mean_imbalance(data); }},
        {12, "dataset: establishment dominates, 87.5% between existing entities",
         [&] { return criterion_12_establishment(data); }},
        {13, "dataset: type-3 involvement in transitions",
         [&] { return criterion_13_type3_involvement(data); }},
        {14, "dataset: partial-correlation coefficients reproduce",
         [&] { return criterion_14_partial_correlations(data); }},
        {15, "dataset: U peaks in season 2", [&] { return criterion_15_u_peak(data); }},
    };

    int failures = 0;
    for (const auto& entry : criteria) {
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome = failed(std::string("exception: ") + e.what());
        }
        const char* tag = outcome.kind == Outcome::pass   ? "[PASS]"
                          : outcome.kind == Outcome::skip ? "[SKIP]"
                                                          : "[FAIL]";
        std::cout << tag << " criterion " << entry.id << ": " << entry.name;
        if (!outcome.detail.empty()) std::cout << " -- " << outcome.detail;
        std::cout << "\n";
        if (outcome.kind == Outcome::fail) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

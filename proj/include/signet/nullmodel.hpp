#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "signet/graph.hpp"
#include "signet/stats.hpp"
#include "signet/triads.hpp"

namespace signet {

namespace rng {

// SplitMix64 mix step, used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Substream seed for (base seed, replicate, episode index). Replicates and
// episodes are independent, so parallel execution order cannot matter.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replicate,
                                    std::uint64_t episode_index) noexcept {
    return splitmix64(splitmix64(splitmix64(seed) ^ replicate) ^ episode_index);
}

// mt19937_64 with a rejection-sampled bounded draw. Both the generator and
// the draw are fully specified, so identical seeds give identical streams on
// every platform.
class Generator {
public:
    explicit Generator(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::uint64_t next_below(std::uint64_t bound) {
        // bound >= 1; uniform over [0, bound)
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % bound;
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace rng

// Uniform random permutation of the sign multiset over the fixed edge set.
// Topology (node set, unsigned edges, hence all degrees) and the
// positive/negative counts are preserved exactly.
inline SignedGraph shuffle_signs(const SignedGraph& graph, rng::Generator& gen) {
    std::vector<Sign> signs;
    signs.reserve(graph.edge_count());
    for (const auto& [pair, sign] : graph.edges()) {
        (void)pair;
        signs.push_back(sign);
    }
    gen.shuffle(signs);

    SignedGraph::EdgeMap shuffled;
    std::size_t i = 0;
    for (const auto& [pair, sign] : graph.edges()) {
        (void)sign;
        shuffled.emplace(pair, signs[i++]);
    }
    return SignedGraph(graph.key(), graph.nodes(), std::move(shuffled));
}

// Sensitivity alternative to shuffle_signs: redraw every sign independently
// with the episode's observed negative fraction. Topology is preserved, the
// per-episode sign counts only in expectation.
inline SignedGraph resample_signs(const SignedGraph& graph, rng::Generator& gen) {
    std::size_t negatives = 0;
    for (const auto& [pair, sign] : graph.edges()) {
        (void)pair;
        if (sign == Sign::negative) ++negatives;
    }
    std::size_t m = graph.edge_count();

    SignedGraph::EdgeMap resampled;
    for (const auto& [pair, sign] : graph.edges()) {
        (void)sign;
        // negative iff draw < negatives/m, computed in integers
        bool negative = m > 0 && gen.next_below(m) < negatives;
        resampled.emplace(pair, negative ? Sign::negative : Sign::positive);
    }
    return SignedGraph(graph.key(), graph.nodes(), std::move(resampled));
}

enum class ShuffleMode { permute_multiset, resample_bernoulli };

struct ShuffleConfig {
    int replicates = 30;
    std::uint64_t seed = 0;
    AverageDenominator denominator = AverageDenominator::presence_episodes;
    ShuffleMode mode = ShuffleMode::permute_multiset;
};

struct NullDistribution {
    double mean = 0.0;
    double sd = 0.0; // sample SD, divisor N-1
};

// Expected per-entity imbalanced-triad involvement under the sign-shuffle
// null model: every episode is shuffled independently per replicate, the
// per-entity average is computed with the same denominator rule as the
// observed statistic, and mean/SD are taken across replicates.
inline std::map<std::string, NullDistribution> expected_imbalance(const EpisodeSeries& series,
                                                                  const ShuffleConfig& config) {
    if (config.replicates < 2) {
        throw ValidationError("expected_imbalance needs at least 2 replicates");
    }
    if (series.empty()) throw ValidationError("expected_imbalance on empty series");

    std::map<std::string, std::vector<double>> replicate_values;
    for (const auto& name : series.entity_universe()) {
        replicate_values[name].reserve(static_cast<std::size_t>(config.replicates));
    }

    for (int r = 0; r < config.replicates; ++r) {
        std::vector<SignedGraph> shuffled;
        shuffled.reserve(series.size());
        for (std::size_t e = 0; e < series.size(); ++e) {
            rng::Generator gen(rng::substream_seed(config.seed, static_cast<std::uint64_t>(r),
                                                   static_cast<std::uint64_t>(e)));
            shuffled.push_back(config.mode == ShuffleMode::permute_multiset
                                   ? shuffle_signs(series.snapshots()[e], gen)
                                   : resample_signs(series.snapshots()[e], gen));
        }
        EpisodeSeries replicate(std::move(shuffled));
        for (const auto& [name, value] : per_entity_imbalance(replicate, config.denominator)) {
            replicate_values[name].push_back(value);
        }
    }

    std::map<std::string, NullDistribution> out;
    for (const auto& [name, values] : replicate_values) {
        out[name] = {stats::mean(values), stats::sample_sd(values)};
    }
    return out;
}

} // namespace signet

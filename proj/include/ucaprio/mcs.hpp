#pragma once

#include "ucaprio/domain.hpp"
#include "ucaprio/ej.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace ucaprio {

// Classification limits for the post-simulation review. A UCA is Stable
// when |mean_rank - initial_rank| < max_mean_shift and rank_std <= max_rank_std.
struct StabilityThresholds {
    double max_mean_shift = 1.0;
    double max_rank_std = 0.5;
};

struct SimulationConfig {
    int num_simulations = 1000;
    double variation_range = 0.10;  // u ~ U[-range, +range)
    std::uint64_t seed = 0;
    unsigned threads = 1;  // 0 = one per hardware thread
    StabilityThresholds stability;

    // Throws ConfigError when a field is out of range.
    void validate() const;
};

struct RankDistribution {
    std::string uca_id;
    std::vector<int> ranks;  // one entry per iteration

    bool operator==(const RankDistribution&) const = default;
};

// Seed of the random stream used by one iteration. Depends only on
// (seed, iteration) so any schedule of iterations draws the same numbers.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t iteration);

// mt19937_64 stream with a fixed, library-independent mapping to doubles.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t iteration) : engine_(substream_seed(seed, iteration)) {}

    // 53-bit uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // Uniform in [-range, +range).
    double symmetric(double range) { return range * (2.0 * unit() - 1.0); }

private:
    std::mt19937_64 engine_;
};

// Draws one perturbation u for a (UCA, criterion) cell. Tests substitute
// their own to force degenerate draws.
using PerturbationDraw = std::function<double(RandomStream&, double range)>;

inline double uniform_draw(RandomStream& stream, double range) { return stream.symmetric(range); }

constexpr double perturb(double f, double u) { return f * (1.0 + u); }

// Per iteration: perturb every raw cell, re-normalize, recompute SAW and
// competition-rank. Draw order within an iteration is row-major (UCA, then
// criterion). Results are in matrix row order.
std::vector<RankDistribution> run_mcs(const ScoreMatrix& raw, const SimulationConfig& config);
std::vector<RankDistribution> run_mcs(const ScoreMatrix& raw, const SimulationConfig& config,
                                      const PerturbationDraw& draw);

// Mean rank, population std, EJ-Score = mean + std, upper 95% CI bound and
// stability. N is the length of the rank vector. Throws EmptyInput.
MonteCarloStats summarize(const RankDistribution& dist, int initial_rank, const SimulationConfig& config);

Stability classify_stability(const MonteCarloStats& stats, const StabilityThresholds& thresholds = {});

struct FinalEntry {
    MonteCarloStats stats;
    int final_rank = 1;
};

// Ascending by ci_upper, then ej_score, then uca_id. Ranks are competition
// ranks over (ci_upper, ej_score); the id only fixes the listing order.
std::vector<FinalEntry> final_ej_ordering(std::vector<MonteCarloStats> stats);

} // namespace ucaprio

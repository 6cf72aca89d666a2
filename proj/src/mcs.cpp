#include "ucaprio/mcs.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace ucaprio {

void SimulationConfig::validate() const {
    if (num_simulations < 1) {
        throw ConfigError("num_simulations must be >= 1, got " + std::to_string(num_simulations));
    }
    if (!(variation_range > 0.0 && variation_range <= 1.0)) {
        throw ConfigError("variation_range must be in (0, 1], got " + std::to_string(variation_range));
    }
    if (!(stability.max_mean_shift > 0.0) || !(stability.max_rank_std >= 0.0)) {
        throw ConfigError("stability thresholds must be positive");
    }
}

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void run_iteration(const ScoreMatrix& raw, const SimulationConfig& config, const PerturbationDraw& draw,
                   std::uint64_t iteration, ScoreMatrix& scratch, std::vector<RankDistribution>& out) {
    RandomStream stream(config.seed, iteration);
    for (std::size_t r = 0; r < raw.size(); ++r) {
        for (std::size_t k = 0; k < kCriterionCount; ++k) {
            scratch.rows[r][k] = perturb(raw.rows[r][k], draw(stream, config.variation_range));
        }
    }
    auto scores = saw(normalize(scratch));
    auto ranks = rank_competition(scores);
    for (std::size_t r = 0; r < raw.size(); ++r) out[r].ranks[iteration] = ranks[r];
}

} // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t iteration) {
    return mix64(mix64(seed) ^ mix64(iteration + 0x9E3779B97F4A7C15ULL));
}

std::vector<RankDistribution> run_mcs(const ScoreMatrix& raw, const SimulationConfig& config) {
    return run_mcs(raw, config, uniform_draw);
}

std::vector<RankDistribution> run_mcs(const ScoreMatrix& raw, const SimulationConfig& config,
                                      const PerturbationDraw& draw) {
    config.validate();
    if (raw.empty()) throw EmptyInput("monte carlo simulation needs at least one UCA");

    const auto n = static_cast<std::size_t>(config.num_simulations);
    std::vector<RankDistribution> out(raw.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        out[r].uca_id = raw.ids[r];
        out[r].ranks.assign(n, 0);
    }

    unsigned workers = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

    if (workers <= 1) {
        ScoreMatrix scratch = raw;
        for (std::size_t i = 0; i < n; ++i) run_iteration(raw, config, draw, i, scratch, out);
        return out;
    }

    // Each worker owns a contiguous block of iterations; blocks write disjoint
    // slots of the rank vectors.
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        const std::size_t block = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * block;
            const std::size_t end = std::min(n, begin + block);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    ScoreMatrix scratch = raw;
                    for (std::size_t i = begin; i < end; ++i) run_iteration(raw, config, draw, i, scratch, out);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

MonteCarloStats summarize(const RankDistribution& dist, int initial_rank, const SimulationConfig& config) {
    if (dist.ranks.empty()) throw EmptyInput(dist.uca_id + ": empty rank distribution");
    const double n = static_cast<double>(dist.ranks.size());

    double sum = 0.0;
    for (int r : dist.ranks) sum += r;
    const double mean = sum / n;
    double sq = 0.0;
    for (int r : dist.ranks) sq += (r - mean) * (r - mean);
    const double sigma = std::sqrt(sq / n);

    MonteCarloStats s;
    s.uca_id = dist.uca_id;
    s.initial_rank = initial_rank;
    s.mean_rank = mean;
    s.rank_std = sigma;
    s.ej_score = mean + sigma;
    s.ci_upper = mean + 1.96 * sigma / std::sqrt(n);
    s.stability = classify_stability(s, config.stability);
    return s;
}

Stability classify_stability(const MonteCarloStats& stats, const StabilityThresholds& thresholds) {
    const bool kept_rank = std::abs(stats.mean_rank - stats.initial_rank) < thresholds.max_mean_shift;
    const bool narrow = stats.rank_std <= thresholds.max_rank_std;
    return kept_rank && narrow ? Stability::Stable : Stability::Sensitive;
}

std::vector<FinalEntry> final_ej_ordering(std::vector<MonteCarloStats> stats) {
    std::sort(stats.begin(), stats.end(), [](const MonteCarloStats& a, const MonteCarloStats& b) {
        if (a.ci_upper != b.ci_upper) return a.ci_upper < b.ci_upper;
        if (a.ej_score != b.ej_score) return a.ej_score < b.ej_score;
        return a.uca_id < b.uca_id;
    });
    std::vector<FinalEntry> out;
    out.reserve(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
        int rank = static_cast<int>(i) + 1;
        if (i > 0 && stats[i].ci_upper == stats[i - 1].ci_upper && stats[i].ej_score == stats[i - 1].ej_score) {
            rank = out.back().final_rank;
        }
        out.push_back({std::move(stats[i]), rank});
    }
    return out;
}

} // namespace ucaprio

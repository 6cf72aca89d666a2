#include "ucaprio/ej.hpp"

#include "ucaprio/ingestion.hpp"

#include <algorithm>
#include <numeric>

namespace ucaprio {

ScoreMatrix score_matrix(const Dataset& dataset) {
    ScoreMatrix m;
    for (const auto& uca : dataset.ucas()) {
        if (uca.expert_scores.empty()) throw NoExperts(uca.id + " has no expert score sheets");
        m.add(uca.id, aggregate_experts(uca.expert_scores));
    }
    return m;
}

ScoreMatrix expert_score_matrix(const Dataset& dataset, const std::string& expert_id) {
    ScoreMatrix m;
    for (const auto& uca : dataset.ucas()) {
        auto it = uca.expert_scores.find(expert_id);
        if (it == uca.expert_scores.end()) continue;
        CriterionValues row{};
        for (std::size_t k = 0; k < kCriterionCount; ++k) row[k] = it->second[kCriteria[k]];
        m.add(uca.id, row);
    }
    return m;
}

ScoreMatrix normalize(const ScoreMatrix& raw) {
    ScoreMatrix out = raw;
    if (raw.empty()) return out;
    for (std::size_t k = 0; k < kCriterionCount; ++k) {
        double lo = raw.rows.front()[k];
        double hi = lo;
        for (const auto& row : raw.rows) {
            lo = std::min(lo, row[k]);
            hi = std::max(hi, row[k]);
        }
        const double span = hi - lo;
        for (auto& row : out.rows) row[k] = span > 0.0 ? (row[k] - lo) / span : 0.0;
    }
    return out;
}

std::vector<double> saw(const ScoreMatrix& normalized) {
    std::vector<double> out;
    out.reserve(normalized.size());
    for (const auto& row : normalized.rows) out.push_back(std::accumulate(row.begin(), row.end(), 0.0));
    return out;
}

std::vector<int> rank_competition(std::span<const double> scores, RankDirection direction) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto better = [&](std::size_t a, std::size_t b) {
        return direction == RankDirection::HigherIsBetter ? scores[a] > scores[b] : scores[a] < scores[b];
    };
    std::stable_sort(order.begin(), order.end(), better);

    std::vector<int> ranks(scores.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto i = order[pos];
        if (pos > 0 && scores[i] == scores[order[pos - 1]]) {
            ranks[i] = ranks[order[pos - 1]];
        } else {
            ranks[i] = static_cast<int>(pos) + 1;
        }
    }
    return ranks;
}

SawRanking initial_ranking(const ScoreMatrix& raw) {
    SawRanking r;
    r.ids = raw.ids;
    r.scores = saw(normalize(raw));
    r.ranks = rank_competition(r.scores);
    return r;
}

} // namespace ucaprio

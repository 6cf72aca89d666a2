#pragma once

#include "ucaprio/domain.hpp"

#include <span>
#include <string>
#include <vector>

namespace ucaprio {

// UCA x criterion table of raw (f) or min-max normalized (f_norm) scores.
struct ScoreMatrix {
    std::vector<std::string> ids;
    std::vector<CriterionValues> rows;

    std::size_t size() const { return rows.size(); }
    bool empty() const { return rows.empty(); }
    void add(std::string id, const CriterionValues& values) {
        ids.push_back(std::move(id));
        rows.push_back(values);
    }

    bool operator==(const ScoreMatrix&) const = default;
};

// Raw matrix of a dataset with expert sheets averaged per UCA, in dataset
// order. Throws NoExperts if a UCA has no sheet.
ScoreMatrix score_matrix(const Dataset& dataset);

// Raw matrix of one expert's sheets; UCAs that expert did not score are left out.
ScoreMatrix expert_score_matrix(const Dataset& dataset, const std::string& expert_id);

// Column-wise min-max normalization. A constant column maps to 0.0.
ScoreMatrix normalize(const ScoreMatrix& raw);

// Unweighted sum of each normalized row.
std::vector<double> saw(const ScoreMatrix& normalized);

enum class RankDirection { HigherIsBetter, LowerIsBetter };

// Competition ("1-1-3") ranking: rank = 1 + number of strictly better
// scores. Ties are exact double equality.
std::vector<int> rank_competition(std::span<const double> scores,
                                  RankDirection direction = RankDirection::HigherIsBetter);

struct SawRanking {
    std::vector<std::string> ids;
    std::vector<double> scores;
    std::vector<int> ranks;
};

// normalize -> saw -> rank_competition.
SawRanking initial_ranking(const ScoreMatrix& raw);

} // namespace ucaprio

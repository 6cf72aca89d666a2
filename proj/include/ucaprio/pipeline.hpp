#pragma once

#include "ucaprio/domain.hpp"
#include "ucaprio/ej.hpp"
#include "ucaprio/matrix.hpp"
#include "ucaprio/mcs.hpp"
#include "ucaprio/sif.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ucaprio {

// Where the EJ axis of the matrix comes from: this run's simulation, or
// the ej column supplied with the dataset.
enum class EjSource { Mcs, Given };

const char* to_string(EjSource source);
EjSource parse_ej_source(std::string_view text);  // throws ConfigError

struct PipelineOptions {
    SimulationConfig simulation;
    AxisLimits axes;
    EjSource ej_source = EjSource::Mcs;
};

struct ExpertRanking {
    std::string expert_id;
    SawRanking ranking;  // only the UCAs this expert scored
};

struct PipelineResult {
    std::vector<SifResult> sif;                  // dataset order
    SawRanking initial;                          // dataset order; empty without scores
    std::vector<RankDistribution> distributions; // dataset order
    std::vector<MonteCarloStats> stats;          // dataset order
    std::vector<FinalEntry> ordering;            // final EJ order
    std::vector<ExpertRanking> expert_rankings;
    PriorityMatrix matrix;

    bool simulated() const { return !stats.empty(); }
};

// SIF -> SAW -> MCS -> final ordering -> matrix. With EjSource::Given the
// simulation still runs when every UCA has expert scores, but the matrix
// uses the supplied ej values.
PipelineResult run_pipeline(const Dataset& dataset, const PipelineOptions& options);

} // namespace ucaprio

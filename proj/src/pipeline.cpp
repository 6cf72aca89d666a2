#include "ucaprio/pipeline.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <unordered_map>

namespace ucaprio {

const char* to_string(EjSource source) { return source == EjSource::Mcs ? "mcs" : "given"; }

EjSource parse_ej_source(std::string_view text) {
    auto t = detail::to_lower(detail::trim(text));
    if (t == "mcs") return EjSource::Mcs;
    if (t == "given") return EjSource::Given;
    throw ConfigError("ej source must be \"mcs\" or \"given\", got \"" + std::string(text) + "\"");
}

PipelineResult run_pipeline(const Dataset& dataset, const PipelineOptions& options) {
    options.simulation.validate();
    if (dataset.ucas().empty()) throw EmptyInput("dataset contains no UCAs");

    PipelineResult result;
    result.sif = compute_sif_table(dataset);

    const bool all_scored = std::all_of(dataset.ucas().begin(), dataset.ucas().end(),
                                        [](const UcaRecord& u) { return !u.expert_scores.empty(); });
    if (options.ej_source == EjSource::Mcs || all_scored) {
        const auto raw = score_matrix(dataset);  // NoExperts when a sheet is missing
        result.initial = initial_ranking(raw);
        result.distributions = run_mcs(raw, options.simulation);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            result.stats.push_back(summarize(result.distributions[i], result.initial.ranks[i], options.simulation));
        }
        result.ordering = final_ej_ordering(result.stats);
        for (const auto& expert : dataset.expert_ids()) {
            result.expert_rankings.push_back({expert, initial_ranking(expert_score_matrix(dataset, expert))});
        }
    }

    std::unordered_map<std::string, const FinalEntry*> final_by_id;
    for (const auto& entry : result.ordering) final_by_id.emplace(entry.stats.uca_id, &entry);

    std::vector<MatrixInput> inputs;
    for (std::size_t i = 0; i < dataset.ucas().size(); ++i) {
        const auto& uca = dataset.ucas()[i];
        const auto& sif = result.sif[i];
        MatrixInput in{uca.id, sif.pms, sif.cif, sif.sif, 0.0, std::nullopt, std::nullopt};
        if (auto it = final_by_id.find(uca.id); it != final_by_id.end()) {
            in.ej = it->second->stats.ej_score;
            in.final_rank = it->second->final_rank;
            in.stability = it->second->stats.stability;
        }
        if (options.ej_source == EjSource::Given) {
            if (!uca.given_ej) throw ConfigError(uca.id + " has no ej value but the ej source is \"given\"");
            in.ej = *uca.given_ej;
        }
        inputs.push_back(std::move(in));
    }
    result.matrix = build_matrix(inputs, options.axes);
    return result;
}

} // namespace ucaprio

#pragma once

#include "ucaprio/domain.hpp"

#include <json.hpp>

#include <string>

namespace ucaprio {

// Field names match the CSV column names of the corresponding files.
void to_json(nlohmann::json& j, const SubLoss& v);
void from_json(const nlohmann::json& j, SubLoss& v);
void to_json(nlohmann::json& j, const Controller& v);
void from_json(const nlohmann::json& j, Controller& v);
void to_json(nlohmann::json& j, const CriterionScores& v);
void from_json(const nlohmann::json& j, CriterionScores& v);
void to_json(nlohmann::json& j, const UcaRecord& v);
void from_json(const nlohmann::json& j, UcaRecord& v);
void to_json(nlohmann::json& j, const MonteCarloStats& v);
void from_json(const nlohmann::json& j, MonteCarloStats& v);
void to_json(nlohmann::json& j, const PriorityRecord& v);
void from_json(const nlohmann::json& j, PriorityRecord& v);

// dataset.json document: losses, controllers, ucas (without scores) and a
// flat scores array. Readable by read_dataset_json.
nlohmann::json dataset_to_json(const Dataset& dataset);

} // namespace ucaprio

#pragma once

#include "ucaprio/domain.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ucaprio {

// Input files for one dataset. Either the CSV set (losses, controllers, ucas
// and optionally scores) or a single dataset.json embedding all four arrays.
struct DatasetManifest {
    std::filesystem::path losses_path;
    std::filesystem::path controllers_path;
    std::filesystem::path ucas_path;
    std::optional<std::filesystem::path> scores_path;
    std::optional<std::filesystem::path> json_path;

    static DatasetManifest csv(std::filesystem::path losses, std::filesystem::path controllers,
                               std::filesystem::path ucas,
                               std::optional<std::filesystem::path> scores = std::nullopt);
    static DatasetManifest json(std::filesystem::path dataset);

    // Every file this manifest reads, in a fixed order.
    std::vector<std::filesystem::path> files() const;
};

// Rows as read from disk, before cross-linking. Violations found while
// attaching score sheets (unknown uca, duplicate sheet) are kept in
// `pending` so that a validator can report them with everything else.
struct RawDataset {
    std::vector<SubLoss> losses;
    std::vector<Controller> controllers;
    std::vector<UcaRecord> ucas;
    SourceLocations locations;
    std::vector<Violation> pending;
    std::vector<std::string> warnings;
};

// Throws FileError or FormatError; never throws for cross-reference problems.
RawDataset read_dataset(const DatasetManifest& manifest);

// All violations of a raw dataset, in file order.
std::vector<Violation> check(const RawDataset& raw);

// Reads, validates and cross-links. Throws FileError, FormatError, LinkError
// (dangling id) or ValidationError. Warnings are appended to `warnings`.
Dataset parse_dataset(const DatasetManifest& manifest, std::vector<std::string>* warnings = nullptr);

// Parses an in-memory dataset.json document; `source` labels errors.
RawDataset read_dataset_json(std::string_view text, const std::string& source);

// Canonical intensity label -> concern-ordered score (3 = worst, likelihood
// 1 = not mitigated). Matching is case-insensitive and whitespace-tolerant.
// Throws UnknownIntensity for any other label.
int score_intensity(Criterion criterion, std::string_view label);

// Canonical labels of a criterion, best (lowest score) first.
std::vector<std::string> intensity_labels(Criterion criterion);

// Per-criterion arithmetic mean across expert sheets. Throws NoExperts when empty.
CriterionValues aggregate_experts(const std::map<std::string, CriterionScores>& scores);

} // namespace ucaprio

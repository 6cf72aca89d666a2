#pragma once

#include "ucaprio/errors.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ucaprio {

// DAL severity guidewords. "No Effect" is deliberately not representable.
enum class DalLevel { Catastrophic, Hazardous, Major, Minor };

const char* to_string(DalLevel level);
std::optional<DalLevel> parse_dal_level(std::string_view text);

// The five expert-judgment criteria, in canonical column order.
enum class Criterion {
    OperationalDisruption,
    Criticality,
    Detectability,
    StakeholderEffect,
    Likelihood,
};

inline constexpr std::size_t kCriterionCount = 5;

inline constexpr std::array<Criterion, kCriterionCount> kCriteria = {
    Criterion::OperationalDisruption, Criterion::Criticality, Criterion::Detectability,
    Criterion::StakeholderEffect, Criterion::Likelihood,
};

// snake_case column name, e.g. "operational_disruption".
const char* column_name(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view column);
int min_score(Criterion c);
int max_score(Criterion c);

struct SubLoss {
    std::string id;           // "L1.1"
    std::string parent_loss;  // "L1"
    DalLevel dal_level = DalLevel::Minor;
    std::string description;
    int pms = 0;

    bool operator==(const SubLoss&) const = default;
};

struct Controller {
    std::string id;
    std::string name;
    int cif = 0;
    int hierarchy_level = 0;  // 1 = top of the control structure

    bool operator==(const Controller&) const = default;
};

// One expert's integer scores for a UCA. Concern-ordered: higher = worse.
struct CriterionScores {
    int operational_disruption = 1;
    int criticality = 1;
    int detectability = 1;
    int stakeholder_effect = 1;
    int likelihood = 0;

    int operator[](Criterion c) const;
    int& operator[](Criterion c);
    bool in_range() const;

    bool operator==(const CriterionScores&) const = default;
};

// Real-valued criterion vector, indexed by Criterion order.
using CriterionValues = std::array<double, kCriterionCount>;

inline double at(const CriterionValues& v, Criterion c) { return v[static_cast<std::size_t>(c)]; }

struct UcaRecord {
    std::string id;
    std::string controller_id;
    std::string description;
    std::set<std::string> loss_links;
    std::map<std::string, CriterionScores> expert_scores;  // expert id -> sheet
    // EJ value supplied with the dataset (e.g. from an earlier, larger cohort run).
    std::optional<double> given_ej;

    bool operator==(const UcaRecord&) const = default;
};

enum class Stability { Stable, Sensitive };

const char* to_string(Stability s);
std::optional<Stability> parse_stability(std::string_view text);

struct MonteCarloStats {
    std::string uca_id;
    int initial_rank = 1;
    double mean_rank = 0.0;
    double rank_std = 0.0;
    double ej_score = 0.0;  // mean_rank + rank_std
    double ci_upper = 0.0;  // mean_rank + 1.96 * rank_std / sqrt(N)
    Stability stability = Stability::Stable;

    bool operator==(const MonteCarloStats&) const = default;
};

enum class Priority { P1 = 1, P2, P3, P4, P5 };

inline constexpr std::array<Priority, 5> kPriorities = {
    Priority::P1, Priority::P2, Priority::P3, Priority::P4, Priority::P5,
};

const char* to_string(Priority p);
std::optional<Priority> parse_priority(std::string_view text);
// Colour name of the matrix legend: "Darkred" for P1 down to "Green" for P5.
const char* colour_name(Priority p);

struct PriorityRecord {
    std::string uca_id;
    int pms = 0;
    int cif = 0;
    int sif = 0;
    double ej = 0.0;
    double ej_inverted = 0.0;
    int sif_scaled = 0;
    int ej_scaled = 0;
    Priority priority = Priority::P5;
    std::optional<int> final_rank;
    std::optional<Stability> stability;

    bool operator==(const PriorityRecord&) const = default;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

// Where each input row came from, used to label violations. Entries may be
// missing, in which case the record id is used.
struct SourceLocations {
    std::vector<std::string> losses;
    std::vector<std::string> controllers;
    std::vector<std::string> ucas;
};

// Validated aggregate of losses, controllers and UCAs. Immutable once built.
class Dataset {
public:
    Dataset() = default;

    // Throws LinkError when any id is dangling, ValidationError for any other
    // invariant violation.
    static Dataset build(std::vector<SubLoss> losses, std::vector<Controller> controllers,
                         std::vector<UcaRecord> ucas, const SourceLocations* locations = nullptr);

    const std::vector<SubLoss>& losses() const { return losses_; }
    const std::vector<Controller>& controllers() const { return controllers_; }
    const std::vector<UcaRecord>& ucas() const { return ucas_; }

    const SubLoss* find_loss(std::string_view id) const;
    const Controller* find_controller(std::string_view id) const;
    const UcaRecord* find_uca(std::string_view id) const;

    // Sorted, de-duplicated ids of every expert with at least one sheet.
    std::vector<std::string> expert_ids() const;

    bool operator==(const Dataset& other) const {
        return losses_ == other.losses_ && controllers_ == other.controllers_ && ucas_ == other.ucas_;
    }

private:
    std::vector<SubLoss> losses_;
    std::vector<Controller> controllers_;
    std::vector<UcaRecord> ucas_;
    std::unordered_map<std::string, std::size_t> loss_index_;
    std::unordered_map<std::string, std::size_t> controller_index_;
    std::unordered_map<std::string, std::size_t> uca_index_;
};

// Every invariant violation across the three tables; never stops early.
std::vector<Violation> check_dataset(const std::vector<SubLoss>& losses,
                                     const std::vector<Controller>& controllers,
                                     const std::vector<UcaRecord>& ucas,
                                     const SourceLocations* locations = nullptr);

// Checks one record against the losses and controllers of a dataset.
ValidationResult validate_record(const UcaRecord& record, const Dataset& dataset);

} // namespace ucaprio

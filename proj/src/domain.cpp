#include "ucaprio/domain.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ucaprio {

const char* to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::NoLossLink: return "no loss link";
    case ViolationKind::UnresolvedLossLink: return "unresolved loss link";
    case ViolationKind::UnresolvedController: return "unresolved controller";
    case ViolationKind::UnresolvedUca: return "unresolved uca";
    case ViolationKind::DuplicateId: return "duplicate id";
    case ViolationKind::DuplicatePms: return "duplicate pms";
    case ViolationKind::DuplicateCif: return "duplicate cif";
    case ViolationKind::CifOrdering: return "cif ordering";
    case ViolationKind::DuplicateLevel: return "duplicate hierarchy level";
    case ViolationKind::ScoreOutOfRange: return "score out of range";
    case ViolationKind::InvalidValue: return "invalid value";
    }
    return "unknown";
}

std::string Violation::describe() const {
    return where + ": " + to_string(kind) + ": " + message;
}

bool is_link_violation(ViolationKind kind) {
    return kind == ViolationKind::UnresolvedLossLink || kind == ViolationKind::UnresolvedController ||
           kind == ViolationKind::UnresolvedUca;
}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << violations.size() << " violation(s)";
    for (const auto& v : violations) os << "\n  " << v.describe();
    return os.str();
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

const char* to_string(DalLevel level) {
    switch (level) {
    case DalLevel::Catastrophic: return "Catastrophic";
    case DalLevel::Hazardous: return "Hazardous";
    case DalLevel::Major: return "Major";
    case DalLevel::Minor: return "Minor";
    }
    return "?";
}

std::optional<DalLevel> parse_dal_level(std::string_view text) {
    auto t = detail::trim(text);
    for (auto level : {DalLevel::Catastrophic, DalLevel::Hazardous, DalLevel::Major, DalLevel::Minor}) {
        if (detail::iequals(t, to_string(level))) return level;
    }
    return std::nullopt;
}

const char* column_name(Criterion c) {
    switch (c) {
    case Criterion::OperationalDisruption: return "operational_disruption";
    case Criterion::Criticality: return "criticality";
    case Criterion::Detectability: return "detectability";
    case Criterion::StakeholderEffect: return "stakeholder_effect";
    case Criterion::Likelihood: return "likelihood";
    }
    return "?";
}

std::optional<Criterion> parse_criterion(std::string_view column) {
    auto t = detail::trim(column);
    for (auto c : kCriteria) {
        if (detail::iequals(t, column_name(c))) return c;
    }
    return std::nullopt;
}

int min_score(Criterion c) { return c == Criterion::Likelihood ? 0 : 1; }
int max_score(Criterion c) { return c == Criterion::Likelihood ? 1 : 3; }

int CriterionScores::operator[](Criterion c) const {
    return const_cast<CriterionScores&>(*this)[c];
}

int& CriterionScores::operator[](Criterion c) {
    switch (c) {
    case Criterion::OperationalDisruption: return operational_disruption;
    case Criterion::Criticality: return criticality;
    case Criterion::Detectability: return detectability;
    case Criterion::StakeholderEffect: return stakeholder_effect;
    case Criterion::Likelihood: return likelihood;
    }
    return likelihood;
}

bool CriterionScores::in_range() const {
    return std::all_of(kCriteria.begin(), kCriteria.end(), [this](Criterion c) {
        int v = (*this)[c];
        return v >= min_score(c) && v <= max_score(c);
    });
}

const char* to_string(Stability s) { return s == Stability::Stable ? "Stable" : "Sensitive"; }

std::optional<Stability> parse_stability(std::string_view text) {
    auto t = detail::trim(text);
    if (detail::iequals(t, "Stable")) return Stability::Stable;
    if (detail::iequals(t, "Sensitive")) return Stability::Sensitive;
    return std::nullopt;
}

const char* to_string(Priority p) {
    switch (p) {
    case Priority::P1: return "P1";
    case Priority::P2: return "P2";
    case Priority::P3: return "P3";
    case Priority::P4: return "P4";
    case Priority::P5: return "P5";
    }
    return "?";
}

std::optional<Priority> parse_priority(std::string_view text) {
    auto t = detail::trim(text);
    for (auto p : kPriorities) {
        if (detail::iequals(t, to_string(p))) return p;
    }
    return std::nullopt;
}

const char* colour_name(Priority p) {
    switch (p) {
    case Priority::P1: return "Darkred";
    case Priority::P2: return "Red";
    case Priority::P3: return "Orange";
    case Priority::P4: return "Yellow";
    case Priority::P5: return "Green";
    }
    return "?";
}

namespace {

using Index = std::unordered_map<std::string, std::size_t>;

std::string location(const std::vector<std::string>* labels, std::size_t i, const std::string& id) {
    if (labels && i < labels->size() && !(*labels)[i].empty()) return (*labels)[i];
    return id;
}

void check_record(const UcaRecord& record, const std::string& where, const Index& loss_index,
                  const Index& controller_index, std::vector<Violation>& out) {
    if (record.loss_links.empty()) {
        out.push_back({where, ViolationKind::NoLossLink, record.id + " links to no sub-loss"});
    }
    for (const auto& link : record.loss_links) {
        if (!loss_index.contains(link)) {
            out.push_back({where, ViolationKind::UnresolvedLossLink,
                           record.id + " links to unknown sub-loss \"" + link + "\""});
        }
    }
    if (!controller_index.contains(record.controller_id)) {
        out.push_back({where, ViolationKind::UnresolvedController,
                       record.id + " names unknown controller \"" + record.controller_id + "\""});
    }
    for (const auto& [expert, sheet] : record.expert_scores) {
        for (auto c : kCriteria) {
            int v = sheet[c];
            if (v < min_score(c) || v > max_score(c)) {
                out.push_back({where, ViolationKind::ScoreOutOfRange,
                               record.id + " expert " + expert + " " + column_name(c) + " = " +
                                   std::to_string(v) + " outside " + std::to_string(min_score(c)) +
                                   ".." + std::to_string(max_score(c))});
            }
        }
    }
    if (record.given_ej && !std::isfinite(*record.given_ej)) {
        out.push_back({where, ViolationKind::InvalidValue, record.id + " has a non-finite ej"});
    }
}

Index index_losses(const std::vector<SubLoss>& losses) {
    Index idx;
    for (std::size_t i = 0; i < losses.size(); ++i) idx.emplace(losses[i].id, i);
    return idx;
}

Index index_controllers(const std::vector<Controller>& controllers) {
    Index idx;
    for (std::size_t i = 0; i < controllers.size(); ++i) idx.emplace(controllers[i].id, i);
    return idx;
}

} // namespace

std::vector<Violation> check_dataset(const std::vector<SubLoss>& losses,
                                     const std::vector<Controller>& controllers,
                                     const std::vector<UcaRecord>& ucas,
                                     const SourceLocations* locations) {
    std::vector<Violation> out;
    const auto* loss_where = locations ? &locations->losses : nullptr;
    const auto* ctrl_where = locations ? &locations->controllers : nullptr;
    const auto* uca_where = locations ? &locations->ucas : nullptr;

    Index loss_ids;
    std::unordered_map<int, std::string> pms_owner;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        const auto& loss = losses[i];
        auto where = location(loss_where, i, loss.id);
        if (!loss_ids.emplace(loss.id, i).second) {
            out.push_back({where, ViolationKind::DuplicateId, "sub-loss " + loss.id + " defined twice"});
        }
        if (loss.pms < 1) {
            out.push_back({where, ViolationKind::InvalidValue,
                           "sub-loss " + loss.id + " has pms " + std::to_string(loss.pms) + " < 1"});
        }
        auto [it, inserted] = pms_owner.emplace(loss.pms, loss.id);
        if (!inserted) {
            out.push_back({where, ViolationKind::DuplicatePms,
                           "pms " + std::to_string(loss.pms) + " used by both " + it->second + " and " +
                               loss.id});
        }
    }

    Index ctrl_ids;
    std::unordered_map<int, std::string> cif_owner;
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        const auto& ctrl = controllers[i];
        auto where = location(ctrl_where, i, ctrl.id);
        if (!ctrl_ids.emplace(ctrl.id, i).second) {
            out.push_back({where, ViolationKind::DuplicateId, "controller " + ctrl.id + " defined twice"});
        }
        if (ctrl.cif < 1) {
            out.push_back({where, ViolationKind::InvalidValue,
                           "controller " + ctrl.id + " has cif " + std::to_string(ctrl.cif) + " < 1"});
        }
        if (ctrl.hierarchy_level < 1) {
            out.push_back({where, ViolationKind::InvalidValue,
                           "controller " + ctrl.id + " has hierarchy level " +
                               std::to_string(ctrl.hierarchy_level) + " < 1"});
        }
        auto [it, inserted] = cif_owner.emplace(ctrl.cif, ctrl.id);
        if (!inserted) {
            out.push_back({where, ViolationKind::DuplicateCif,
                           "cif " + std::to_string(ctrl.cif) + " used by both " + it->second + " and " +
                               ctrl.id});
        }
    }
    // cif must strictly decrease going down the hierarchy.
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        for (std::size_t j = 0; j < controllers.size(); ++j) {
            const auto& upper = controllers[i];
            const auto& lower = controllers[j];
            if (upper.hierarchy_level < lower.hierarchy_level && upper.cif <= lower.cif) {
                out.push_back({location(ctrl_where, j, lower.id), ViolationKind::CifOrdering,
                               "controller " + lower.id + " (level " + std::to_string(lower.hierarchy_level) +
                                   ", cif " + std::to_string(lower.cif) + ") is not below " + upper.id +
                                   " (level " + std::to_string(upper.hierarchy_level) + ", cif " +
                                   std::to_string(upper.cif) + ")"});
            }
        }
    }

    Index uca_ids;
    for (std::size_t i = 0; i < ucas.size(); ++i) {
        const auto& uca = ucas[i];
        auto where = location(uca_where, i, uca.id);
        if (!uca_ids.emplace(uca.id, i).second) {
            out.push_back({where, ViolationKind::DuplicateId, "uca " + uca.id + " defined twice"});
        }
        check_record(uca, where, loss_ids, ctrl_ids, out);
    }
    return out;
}

Dataset Dataset::build(std::vector<SubLoss> losses, std::vector<Controller> controllers,
                       std::vector<UcaRecord> ucas, const SourceLocations* locations) {
    auto violations = check_dataset(losses, controllers, ucas, locations);
    if (!violations.empty()) {
        bool dangling = std::any_of(violations.begin(), violations.end(),
                                    [](const Violation& v) { return is_link_violation(v.kind); });
        if (dangling) throw LinkError(std::move(violations));
        throw ValidationError(std::move(violations));
    }
    Dataset ds;
    ds.losses_ = std::move(losses);
    ds.controllers_ = std::move(controllers);
    ds.ucas_ = std::move(ucas);
    ds.loss_index_ = index_losses(ds.losses_);
    ds.controller_index_ = index_controllers(ds.controllers_);
    for (std::size_t i = 0; i < ds.ucas_.size(); ++i) ds.uca_index_.emplace(ds.ucas_[i].id, i);
    return ds;
}

const SubLoss* Dataset::find_loss(std::string_view id) const {
    auto it = loss_index_.find(std::string(id));
    return it == loss_index_.end() ? nullptr : &losses_[it->second];
}

const Controller* Dataset::find_controller(std::string_view id) const {
    auto it = controller_index_.find(std::string(id));
    return it == controller_index_.end() ? nullptr : &controllers_[it->second];
}

const UcaRecord* Dataset::find_uca(std::string_view id) const {
    auto it = uca_index_.find(std::string(id));
    return it == uca_index_.end() ? nullptr : &ucas_[it->second];
}

std::vector<std::string> Dataset::expert_ids() const {
    std::set<std::string> ids;
    for (const auto& uca : ucas_) {
        for (const auto& [expert, _] : uca.expert_scores) ids.insert(expert);
    }
    return {ids.begin(), ids.end()};
}

ValidationResult validate_record(const UcaRecord& record, const Dataset& dataset) {
    ValidationResult result;
    check_record(record, record.id, index_losses(dataset.losses()),
                 index_controllers(dataset.controllers()), result.violations);
    return result;
}

} // namespace ucaprio

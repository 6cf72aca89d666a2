#include "ucaprio/ingestion.hpp"

#include "ucaprio/csv.hpp"
#include "ucaprio/sif.hpp"
#include "text_util.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace ucaprio {

using nlohmann::json;

DatasetManifest DatasetManifest::csv(std::filesystem::path losses, std::filesystem::path controllers,
                                     std::filesystem::path ucas,
                                     std::optional<std::filesystem::path> scores) {
    DatasetManifest m;
    m.losses_path = std::move(losses);
    m.controllers_path = std::move(controllers);
    m.ucas_path = std::move(ucas);
    m.scores_path = std::move(scores);
    return m;
}

DatasetManifest DatasetManifest::json(std::filesystem::path dataset) {
    DatasetManifest m;
    m.json_path = std::move(dataset);
    return m;
}

std::vector<std::filesystem::path> DatasetManifest::files() const {
    if (json_path) return {*json_path};
    std::vector<std::filesystem::path> out{losses_path, controllers_path, ucas_path};
    if (scores_path) out.push_back(*scores_path);
    return out;
}

// ---------------------------------------------------------------------------
// Intensities

namespace {

struct Intensity {
    Criterion criterion;
    const char* label;
    int score;
};

// Concern-ordered: the worst intensity of each criterion scores highest.
constexpr std::array<Intensity, 14> kIntensities = {{
    {Criterion::OperationalDisruption, "Low Impact", 1},
    {Criterion::OperationalDisruption, "Medium Impact", 2},
    {Criterion::OperationalDisruption, "High Impact", 3},
    {Criterion::Criticality, "Low Risk", 1},
    {Criterion::Criticality, "Moderate Risk", 2},
    {Criterion::Criticality, "High Risk", 3},
    {Criterion::Detectability, "High Detectability", 1},
    {Criterion::Detectability, "Moderate Detectability", 2},
    {Criterion::Detectability, "Low Detectability", 3},
    {Criterion::StakeholderEffect, "Minimal Impact", 1},
    {Criterion::StakeholderEffect, "Moderate Impact", 2},
    {Criterion::StakeholderEffect, "Significant Impact", 3},
    {Criterion::Likelihood, "Mitigated by pre-existing regulations and unlikely to occur", 0},
    {Criterion::Likelihood, "Not mitigated by pre-existing regulations and likely to occur", 1},
}};

std::string canonical_label(std::string_view label) {
    auto s = detail::squeeze_spaces(label);
    while (!s.empty() && s.back() == '.') s.pop_back();
    return detail::to_lower(s);
}

} // namespace

int score_intensity(Criterion criterion, std::string_view label) {
    const auto key = canonical_label(label);
    for (const auto& i : kIntensities) {
        if (i.criterion == criterion && canonical_label(i.label) == key) return i.score;
    }
    throw UnknownIntensity("\"" + std::string(label) + "\" is not an intensity of " + column_name(criterion));
}

std::vector<std::string> intensity_labels(Criterion criterion) {
    std::vector<std::string> out;
    for (const auto& i : kIntensities) {
        if (i.criterion == criterion) out.emplace_back(i.label);
    }
    return out;
}

CriterionValues aggregate_experts(const std::map<std::string, CriterionScores>& scores) {
    if (scores.empty()) throw NoExperts("no expert score sheets");
    CriterionValues sum{};
    for (const auto& [_, sheet] : scores) {
        for (std::size_t k = 0; k < kCriterionCount; ++k) sum[k] += sheet[kCriteria[k]];
    }
    for (auto& v : sum) v /= static_cast<double>(scores.size());
    return sum;
}

// ---------------------------------------------------------------------------
// Readers

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw FileError(path.string(), "read failed");
    return ss.str();
}

std::optional<long long> parse_integer(std::string_view text) {
    auto t = detail::trim(text);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_real(std::string_view text) {
    auto t = detail::trim(text);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

int require_int(std::string_view cell, const std::string& column, const std::string& source,
                std::size_t line) {
    auto v = parse_integer(cell);
    if (!v || *v < INT32_MIN || *v > INT32_MAX) {
        throw FormatError(source, line, column + " must be an integer, got \"" + std::string(cell) + "\"");
    }
    return static_cast<int>(*v);
}

DalLevel require_dal(std::string_view cell, const std::string& source, std::size_t line) {
    auto v = parse_dal_level(cell);
    if (!v) {
        throw FormatError(source, line,
                          "dal must be Catastrophic, Hazardous, Major or Minor, got \"" +
                              std::string(cell) + "\"");
    }
    return *v;
}

// Numeric score or canonical intensity label.
int score_cell(Criterion c, std::string_view cell, const std::string& source, std::size_t line) {
    if (auto v = parse_integer(cell)) {
        if (*v < INT32_MIN || *v > INT32_MAX) {
            throw FormatError(source, line, std::string(column_name(c)) + " out of integer range");
        }
        return static_cast<int>(*v);
    }
    try {
        return score_intensity(c, cell);
    } catch (const UnknownIntensity& e) {
        throw FormatError(source, line, e.what());
    }
}

std::set<std::string> parse_links(std::string_view cell) {
    std::set<std::string> links;
    for (const auto& part : detail::split(cell, ';')) {
        auto id = detail::trim(part);
        // "N/A" is the absence of a link, not a link.
        if (id.empty() || detail::iequals(id, "N/A")) continue;
        links.emplace(id);
    }
    return links;
}

std::string where(const std::string& source, std::size_t line) {
    return source + ":" + std::to_string(line);
}

struct ControllerRow {
    Controller controller;
    bool cif_given = false;
};

// Fills missing cif values from the hierarchy and reports disagreements.
void resolve_cif(std::vector<ControllerRow>& rows, RawDataset& raw) {
    std::vector<Controller> plain;
    bool any_missing = false;
    for (const auto& r : rows) {
        plain.push_back(r.controller);
        any_missing = any_missing || !r.cif_given;
    }
    std::vector<Controller> derived;
    try {
        derived = derive_cif_ranking(plain);
    } catch (const DuplicateLevel& e) {
        if (any_missing) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (!rows[i].cif_given) {
                    raw.pending.push_back({raw.locations.controllers[i], ViolationKind::DuplicateLevel,
                                           std::string("cannot derive cif for ") + rows[i].controller.id +
                                               ": " + e.what()});
                }
            }
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& row = rows[i];
        if (derived.empty()) {
            raw.controllers.push_back(row.controller);
            continue;
        }
        if (!row.cif_given) {
            row.controller.cif = derived[i].cif;
        } else if (row.controller.cif != derived[i].cif) {
            raw.warnings.push_back(raw.locations.controllers[i] + ": controller " + row.controller.id +
                                   " has explicit cif " + std::to_string(row.controller.cif) +
                                   " but its hierarchy level implies " + std::to_string(derived[i].cif) +
                                   "; keeping the explicit value");
        }
        raw.controllers.push_back(row.controller);
    }
}

void attach_scores(RawDataset& raw, const std::string& uca_id, const std::string& expert,
                   const CriterionScores& sheet, const std::string& at) {
    auto it = std::find_if(raw.ucas.begin(), raw.ucas.end(),
                           [&](const UcaRecord& u) { return u.id == uca_id; });
    if (it == raw.ucas.end()) {
        raw.pending.push_back({at, ViolationKind::UnresolvedUca, "score sheet for unknown uca \"" + uca_id + "\""});
        return;
    }
    if (!it->expert_scores.emplace(expert, sheet).second) {
        raw.pending.push_back({at, ViolationKind::DuplicateId,
                               "expert " + expert + " scored " + uca_id + " more than once"});
    }
}

void finish(RawDataset& raw) {
    if (raw.ucas.empty()) raw.warnings.push_back("dataset contains no UCAs");
    for (std::size_t i = 0; i < raw.ucas.size(); ++i) {
        if (raw.ucas[i].expert_scores.empty()) {
            raw.warnings.push_back(raw.locations.ucas[i] + ": " + raw.ucas[i].id + " has no expert scores");
        }
    }
}

csv::Table load_table(const std::filesystem::path& path, std::initializer_list<const char*> required) {
    auto source = path.string();
    auto table = csv::parse(read_file(path), source);
    if (table.header.empty()) return table;
    for (const char* name : required) {
        if (!table.column(name)) throw FormatError(source, 1, std::string("missing column \"") + name + "\"");
    }
    return table;
}

void read_losses_csv(const std::filesystem::path& path, RawDataset& raw) {
    auto t = load_table(path, {"sub_loss_id", "parent", "dal", "description", "pms"});
    if (t.header.empty()) {
        raw.warnings.push_back(t.source + ": empty file");
        return;
    }
    auto c_id = *t.column("sub_loss_id"), c_parent = *t.column("parent"), c_dal = *t.column("dal"),
         c_desc = *t.column("description"), c_pms = *t.column("pms");
    for (const auto& row : t.rows) {
        SubLoss loss;
        loss.id = std::string(detail::trim(row.fields[c_id]));
        loss.parent_loss = std::string(detail::trim(row.fields[c_parent]));
        loss.dal_level = require_dal(row.fields[c_dal], t.source, row.line);
        loss.description = std::string(detail::trim(row.fields[c_desc]));
        loss.pms = require_int(row.fields[c_pms], "pms", t.source, row.line);
        if (loss.id.empty()) throw FormatError(t.source, row.line, "empty sub_loss_id");
        raw.losses.push_back(std::move(loss));
        raw.locations.losses.push_back(where(t.source, row.line));
    }
}

void read_controllers_csv(const std::filesystem::path& path, RawDataset& raw) {
    auto t = load_table(path, {"controller_id", "name", "hierarchy_level"});
    if (t.header.empty()) {
        raw.warnings.push_back(t.source + ": empty file");
        return;
    }
    auto c_id = *t.column("controller_id"), c_name = *t.column("name"), c_level = *t.column("hierarchy_level");
    auto c_cif = t.column("cif");
    std::vector<ControllerRow> rows;
    for (const auto& row : t.rows) {
        ControllerRow r;
        r.controller.id = std::string(detail::trim(row.fields[c_id]));
        r.controller.name = std::string(detail::trim(row.fields[c_name]));
        r.controller.hierarchy_level = require_int(row.fields[c_level], "hierarchy_level", t.source, row.line);
        if (c_cif && !detail::trim(row.fields[*c_cif]).empty()) {
            r.controller.cif = require_int(row.fields[*c_cif], "cif", t.source, row.line);
            r.cif_given = true;
        }
        if (r.controller.id.empty()) throw FormatError(t.source, row.line, "empty controller_id");
        rows.push_back(std::move(r));
        raw.locations.controllers.push_back(where(t.source, row.line));
    }
    resolve_cif(rows, raw);
}

void read_ucas_csv(const std::filesystem::path& path, RawDataset& raw) {
    auto t = load_table(path, {"uca_id", "controller_id", "description", "loss_links"});
    if (t.header.empty()) return;
    auto c_id = *t.column("uca_id"), c_ctrl = *t.column("controller_id"), c_desc = *t.column("description"),
         c_links = *t.column("loss_links");
    auto c_ej = t.column("ej");
    for (const auto& row : t.rows) {
        UcaRecord uca;
        uca.id = std::string(detail::trim(row.fields[c_id]));
        uca.controller_id = std::string(detail::trim(row.fields[c_ctrl]));
        uca.description = std::string(detail::trim(row.fields[c_desc]));
        uca.loss_links = parse_links(row.fields[c_links]);
        if (c_ej && !detail::trim(row.fields[*c_ej]).empty()) {
            auto ej = parse_real(row.fields[*c_ej]);
            if (!ej) {
                throw FormatError(t.source, row.line,
                                  "ej must be a real number, got \"" + row.fields[*c_ej] + "\"");
            }
            uca.given_ej = *ej;
        }
        if (uca.id.empty()) throw FormatError(t.source, row.line, "empty uca_id");
        raw.ucas.push_back(std::move(uca));
        raw.locations.ucas.push_back(where(t.source, row.line));
    }
}

void read_scores_csv(const std::filesystem::path& path, RawDataset& raw) {
    auto t = load_table(path, {"uca_id", "expert_id", "operational_disruption", "criticality", "detectability",
                               "stakeholder_effect", "likelihood"});
    if (t.header.empty()) return;
    auto c_uca = *t.column("uca_id"), c_expert = *t.column("expert_id");
    for (const auto& row : t.rows) {
        CriterionScores sheet;
        for (auto c : kCriteria) {
            sheet[c] = score_cell(c, row.fields[*t.column(column_name(c))], t.source, row.line);
        }
        auto expert = std::string(detail::trim(row.fields[c_expert]));
        if (expert.empty()) throw FormatError(t.source, row.line, "empty expert_id");
        attach_scores(raw, std::string(detail::trim(row.fields[c_uca])), expert, sheet, where(t.source, row.line));
    }
}

// JSON ---------------------------------------------------------------------

std::string json_where(const std::string& source, const char* array, std::size_t i) {
    return source + ":" + array + "[" + std::to_string(i) + "]";
}

const json& require_field(const json& obj, const char* key, const std::string& at) {
    if (!obj.is_object()) throw FormatError(at, 0, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(at, 0, std::string("missing field \"") + key + "\"");
    return *it;
}

std::string json_string(const json& obj, const char* key, const std::string& at) {
    const auto& v = require_field(obj, key, at);
    if (!v.is_string()) throw FormatError(at, 0, std::string(key) + " must be a string");
    return std::string(detail::trim(v.get<std::string>()));
}

int json_int(const json& v, const char* key, const std::string& at) {
    if (v.is_number_integer()) {
        auto x = v.get<long long>();
        if (x >= INT32_MIN && x <= INT32_MAX) return static_cast<int>(x);
    }
    if (v.is_string()) return require_int(v.get<std::string>(), key, at, 0);
    throw FormatError(at, 0, std::string(key) + " must be an integer");
}

const json& json_array(const json& doc, const char* key, const std::string& source, bool required) {
    static const json empty = json::array();
    auto it = doc.find(key);
    if (it == doc.end()) {
        if (required) throw FormatError(source, 0, std::string("missing array \"") + key + "\"");
        return empty;
    }
    if (!it->is_array()) throw FormatError(source, 0, std::string("\"") + key + "\" must be an array");
    return *it;
}

} // namespace

RawDataset read_dataset_json(std::string_view text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(source, 0, e.what());
    }
    if (!doc.is_object()) throw FormatError(source, 0, "top level must be an object");

    RawDataset raw;
    const auto& losses = json_array(doc, "losses", source, true);
    for (std::size_t i = 0; i < losses.size(); ++i) {
        auto at = json_where(source, "losses", i);
        const auto& o = losses[i];
        SubLoss loss;
        loss.id = json_string(o, "sub_loss_id", at);
        loss.parent_loss = json_string(o, "parent", at);
        loss.dal_level = require_dal(json_string(o, "dal", at), at, 0);
        loss.description = json_string(o, "description", at);
        loss.pms = json_int(require_field(o, "pms", at), "pms", at);
        raw.losses.push_back(std::move(loss));
        raw.locations.losses.push_back(at);
    }

    const auto& controllers = json_array(doc, "controllers", source, true);
    std::vector<ControllerRow> rows;
    for (std::size_t i = 0; i < controllers.size(); ++i) {
        auto at = json_where(source, "controllers", i);
        const auto& o = controllers[i];
        ControllerRow r;
        r.controller.id = json_string(o, "controller_id", at);
        r.controller.name = json_string(o, "name", at);
        r.controller.hierarchy_level = json_int(require_field(o, "hierarchy_level", at), "hierarchy_level", at);
        if (auto it = o.find("cif"); it != o.end() && !it->is_null()) {
            r.controller.cif = json_int(*it, "cif", at);
            r.cif_given = true;
        }
        rows.push_back(std::move(r));
        raw.locations.controllers.push_back(at);
    }
    resolve_cif(rows, raw);

    const auto& ucas = json_array(doc, "ucas", source, true);
    for (std::size_t i = 0; i < ucas.size(); ++i) {
        auto at = json_where(source, "ucas", i);
        const auto& o = ucas[i];
        UcaRecord uca;
        uca.id = json_string(o, "uca_id", at);
        uca.controller_id = json_string(o, "controller_id", at);
        uca.description = json_string(o, "description", at);
        const auto& links = require_field(o, "loss_links", at);
        if (links.is_string()) {
            uca.loss_links = parse_links(links.get<std::string>());
        } else if (links.is_array()) {
            for (const auto& l : links) {
                if (!l.is_string()) throw FormatError(at, 0, "loss_links entries must be strings");
                auto joined = parse_links(l.get<std::string>());
                uca.loss_links.insert(joined.begin(), joined.end());
            }
        } else {
            throw FormatError(at, 0, "loss_links must be a string or an array of strings");
        }
        if (auto it = o.find("ej"); it != o.end() && !it->is_null()) {
            if (!it->is_number() || !std::isfinite(it->get<double>())) {
                throw FormatError(at, 0, "ej must be a real number");
            }
            uca.given_ej = it->get<double>();
        }
        raw.ucas.push_back(std::move(uca));
        raw.locations.ucas.push_back(at);
    }

    const auto& scores = json_array(doc, "scores", source, false);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        auto at = json_where(source, "scores", i);
        const auto& o = scores[i];
        CriterionScores sheet;
        for (auto c : kCriteria) {
            const auto& v = require_field(o, column_name(c), at);
            if (v.is_string()) {
                sheet[c] = score_cell(c, v.get<std::string>(), at, 0);
            } else {
                sheet[c] = json_int(v, column_name(c), at);
            }
        }
        attach_scores(raw, json_string(o, "uca_id", at), json_string(o, "expert_id", at), sheet, at);
    }
    finish(raw);
    return raw;
}

RawDataset read_dataset(const DatasetManifest& manifest) {
    if (manifest.json_path) {
        return read_dataset_json(read_file(*manifest.json_path), manifest.json_path->string());
    }
    RawDataset raw;
    read_losses_csv(manifest.losses_path, raw);
    read_controllers_csv(manifest.controllers_path, raw);
    read_ucas_csv(manifest.ucas_path, raw);
    if (manifest.scores_path) read_scores_csv(*manifest.scores_path, raw);
    finish(raw);
    return raw;
}

std::vector<Violation> check(const RawDataset& raw) {
    auto out = check_dataset(raw.losses, raw.controllers, raw.ucas, &raw.locations);
    out.insert(out.end(), raw.pending.begin(), raw.pending.end());
    return out;
}

Dataset parse_dataset(const DatasetManifest& manifest, std::vector<std::string>* warnings) {
    auto raw = read_dataset(manifest);
    if (warnings) warnings->insert(warnings->end(), raw.warnings.begin(), raw.warnings.end());
    auto violations = check(raw);
    if (!violations.empty()) {
        bool dangling = std::any_of(violations.begin(), violations.end(),
                                    [](const Violation& v) { return is_link_violation(v.kind); });
        if (dangling) throw LinkError(std::move(violations));
        throw ValidationError(std::move(violations));
    }
    return Dataset::build(std::move(raw.losses), std::move(raw.controllers), std::move(raw.ucas), &raw.locations);
}

} // namespace ucaprio

#include "ucaprio/json_io.hpp"

namespace ucaprio {

using nlohmann::json;

namespace {

template <typename Enum, typename Parser>
Enum parse_enum(const json& j, const char* key, Parser parse) {
    auto text = j.at(key).get<std::string>();
    auto v = parse(text);
    if (!v) throw FormatError("json", 0, std::string(key) + ": unknown value \"" + text + "\"");
    return *v;
}

} // namespace

void to_json(json& j, const SubLoss& v) {
    j = json{{"sub_loss_id", v.id},
             {"parent", v.parent_loss},
             {"dal", to_string(v.dal_level)},
             {"description", v.description},
             {"pms", v.pms}};
}

void from_json(const json& j, SubLoss& v) {
    v.id = j.at("sub_loss_id").get<std::string>();
    v.parent_loss = j.at("parent").get<std::string>();
    v.dal_level = parse_enum<DalLevel>(j, "dal", parse_dal_level);
    v.description = j.at("description").get<std::string>();
    v.pms = j.at("pms").get<int>();
}

void to_json(json& j, const Controller& v) {
    j = json{{"controller_id", v.id}, {"name", v.name}, {"hierarchy_level", v.hierarchy_level}, {"cif", v.cif}};
}

void from_json(const json& j, Controller& v) {
    v.id = j.at("controller_id").get<std::string>();
    v.name = j.at("name").get<std::string>();
    v.hierarchy_level = j.at("hierarchy_level").get<int>();
    v.cif = j.at("cif").get<int>();
}

void to_json(json& j, const CriterionScores& v) {
    j = json::object();
    for (auto c : kCriteria) j[column_name(c)] = v[c];
}

void from_json(const json& j, CriterionScores& v) {
    for (auto c : kCriteria) v[c] = j.at(column_name(c)).get<int>();
}

void to_json(json& j, const UcaRecord& v) {
    j = json{{"uca_id", v.id},
             {"controller_id", v.controller_id},
             {"description", v.description},
             {"loss_links", v.loss_links},
             {"expert_scores", v.expert_scores}};
    j["ej"] = v.given_ej ? json(*v.given_ej) : json(nullptr);
}

void from_json(const json& j, UcaRecord& v) {
    v.id = j.at("uca_id").get<std::string>();
    v.controller_id = j.at("controller_id").get<std::string>();
    v.description = j.at("description").get<std::string>();
    v.loss_links = j.at("loss_links").get<std::set<std::string>>();
    v.expert_scores = j.value("expert_scores", std::map<std::string, CriterionScores>{});
    v.given_ej.reset();
    if (j.contains("ej") && !j["ej"].is_null()) v.given_ej = j["ej"].get<double>();
}

void to_json(json& j, const MonteCarloStats& v) {
    j = json{{"uca_id", v.uca_id},       {"initial_rank", v.initial_rank}, {"mean_rank", v.mean_rank},
             {"rank_std", v.rank_std},   {"ej_score", v.ej_score},         {"ci_upper", v.ci_upper},
             {"stability", to_string(v.stability)}};
}

void from_json(const json& j, MonteCarloStats& v) {
    v.uca_id = j.at("uca_id").get<std::string>();
    v.initial_rank = j.at("initial_rank").get<int>();
    v.mean_rank = j.at("mean_rank").get<double>();
    v.rank_std = j.at("rank_std").get<double>();
    v.ej_score = j.at("ej_score").get<double>();
    v.ci_upper = j.at("ci_upper").get<double>();
    v.stability = parse_enum<Stability>(j, "stability", parse_stability);
}

void to_json(json& j, const PriorityRecord& v) {
    j = json{{"uca_id", v.uca_id},
             {"pms", v.pms},
             {"cif", v.cif},
             {"sif", v.sif},
             {"ej", v.ej},
             {"ej_inverted", v.ej_inverted},
             {"sif_scaled", v.sif_scaled},
             {"ej_scaled", v.ej_scaled},
             {"priority", to_string(v.priority)}};
    j["final_rank"] = v.final_rank ? json(*v.final_rank) : json(nullptr);
    j["stability"] = v.stability ? json(to_string(*v.stability)) : json(nullptr);
}

void from_json(const json& j, PriorityRecord& v) {
    v.uca_id = j.at("uca_id").get<std::string>();
    v.pms = j.at("pms").get<int>();
    v.cif = j.at("cif").get<int>();
    v.sif = j.at("sif").get<int>();
    v.ej = j.at("ej").get<double>();
    v.ej_inverted = j.at("ej_inverted").get<double>();
    v.sif_scaled = j.at("sif_scaled").get<int>();
    v.ej_scaled = j.at("ej_scaled").get<int>();
    v.priority = parse_enum<Priority>(j, "priority", parse_priority);
    v.final_rank.reset();
    v.stability.reset();
    if (j.contains("final_rank") && !j["final_rank"].is_null()) v.final_rank = j["final_rank"].get<int>();
    if (j.contains("stability") && !j["stability"].is_null()) {
        v.stability = parse_enum<Stability>(j, "stability", parse_stability);
    }
}

json dataset_to_json(const Dataset& dataset) {
    json ucas = json::array();
    json scores = json::array();
    for (const auto& uca : dataset.ucas()) {
        json u = {{"uca_id", uca.id},
                  {"controller_id", uca.controller_id},
                  {"description", uca.description},
                  {"loss_links", uca.loss_links}};
        if (uca.given_ej) u["ej"] = *uca.given_ej;
        ucas.push_back(std::move(u));
        for (const auto& [expert, sheet] : uca.expert_scores) {
            json s = sheet;
            s["uca_id"] = uca.id;
            s["expert_id"] = expert;
            scores.push_back(std::move(s));
        }
    }
    return json{{"losses", dataset.losses()},
                {"controllers", dataset.controllers()},
                {"ucas", std::move(ucas)},
                {"scores", std::move(scores)}};
}

} // namespace ucaprio

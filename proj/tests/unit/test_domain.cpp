#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "ucaprio/json_io.hpp"

#include <algorithm>

using namespace ucaprio;

namespace {

std::vector<SubLoss> two_losses() {
    return {{"L1.1", "L1", DalLevel::Catastrophic, "fatalities", 20}, {"L2.1", "L2", DalLevel::Catastrophic, "hull", 17}};
}

std::vector<Controller> two_controllers() { return {{"A", "Top", 2, 1}, {"B", "Bottom", 1, 2}}; }

UcaRecord uca(std::string id, std::string ctrl, std::set<std::string> links) {
    UcaRecord u;
    u.id = std::move(id);
    u.controller_id = std::move(ctrl);
    u.description = "d";
    u.loss_links = std::move(links);
    return u;
}

bool has_kind(const std::vector<Violation>& vs, ViolationKind k) {
    return std::any_of(vs.begin(), vs.end(), [k](const Violation& v) { return v.kind == k; });
}

} // namespace

TEST_CASE("validate_record reports a missing loss link", "[domain]") {
    auto ds = Dataset::build(two_losses(), two_controllers(), {uca("U1", "A", {"L1.1"})});
    auto result = validate_record(uca("U2", "A", {}), ds);
    REQUIRE_FALSE(result.ok());
    REQUIRE(has_kind(result.violations, ViolationKind::NoLossLink));
}

TEST_CASE("validate_record reports an unknown controller", "[domain]") {
    auto ds = Dataset::build(two_losses(), two_controllers(), {uca("U1", "A", {"L1.1"})});
    auto result = validate_record(uca("U2", "Ghost", {"L1.1"}), ds);
    REQUIRE(has_kind(result.violations, ViolationKind::UnresolvedController));
}

TEST_CASE("validate_record collects every violation of one record", "[domain]") {
    auto ds = Dataset::build(two_losses(), two_controllers(), {uca("U1", "A", {"L1.1"})});
    auto result = validate_record(uca("U2", "Ghost", {}), ds);
    REQUIRE(result.violations.size() >= 2);
}

TEST_CASE("fixture UCA-21.5.1 validates cleanly", "[domain]") {
    auto ds = testing::evtol();
    const auto* u = ds.find_uca("UCA-21.5.1");
    REQUIRE(u != nullptr);
    REQUIRE(validate_record(*u, ds).ok());
}

TEST_CASE("duplicate pms values are rejected", "[domain]") {
    auto losses = two_losses();
    losses[1].pms = 20;
    REQUIRE_THROWS_AS(Dataset::build(losses, two_controllers(), {}), ValidationError);
    auto vs = check_dataset(losses, two_controllers(), {});
    REQUIRE(has_kind(vs, ViolationKind::DuplicatePms));
}

TEST_CASE("cif must decrease down the hierarchy", "[domain]") {
    std::vector<Controller> ctrls{{"A", "Top", 1, 1}, {"B", "Bottom", 2, 2}};
    auto vs = check_dataset(two_losses(), ctrls, {});
    REQUIRE(has_kind(vs, ViolationKind::CifOrdering));
}

TEST_CASE("duplicate cif values are rejected", "[domain]") {
    std::vector<Controller> ctrls{{"A", "Top", 2, 1}, {"B", "Bottom", 2, 2}};
    REQUIRE(has_kind(check_dataset(two_losses(), ctrls, {}), ViolationKind::DuplicateCif));
}

TEST_CASE("dangling ids raise LinkError", "[domain]") {
    REQUIRE_THROWS_AS(Dataset::build(two_losses(), two_controllers(), {uca("U1", "A", {"L9.9"})}), LinkError);
    REQUIRE_THROWS_AS(Dataset::build(two_losses(), two_controllers(), {uca("U1", "Z", {"L1.1"})}), LinkError);
}

TEST_CASE("out-of-range scores are violations", "[domain]") {
    auto u = uca("U1", "A", {"L1.1"});
    CriterionScores s{3, 3, 3, 3, 2};
    u.expert_scores["E"] = s;
    REQUIRE(has_kind(check_dataset(two_losses(), two_controllers(), {u}), ViolationKind::ScoreOutOfRange));
}

TEST_CASE("ids are case-sensitive", "[domain]") {
    REQUIRE_THROWS_AS(Dataset::build(two_losses(), two_controllers(), {uca("U1", "a", {"L1.1"})}), LinkError);
}

TEST_CASE("domain types round-trip through JSON", "[domain][json]") {
    auto ds = testing::evtol();
    for (const auto& l : ds.losses()) {
        nlohmann::json j = l;
        REQUIRE(j.get<SubLoss>() == l);
        REQUIRE(nlohmann::json(j.get<SubLoss>()).dump() == j.dump());
    }
    for (const auto& c : ds.controllers()) {
        nlohmann::json j = c;
        REQUIRE(j.get<Controller>() == c);
    }
    for (const auto& u : ds.ucas()) {
        nlohmann::json j = u;
        REQUIRE(j.get<UcaRecord>() == u);
        REQUIRE(nlohmann::json(j.get<UcaRecord>()).dump() == j.dump());
    }

    MonteCarloStats s{"UCA-1", 2, 2.25, 0.433, 2.683, 2.3, Stability::Sensitive};
    nlohmann::json js = s;
    REQUIRE(js.get<MonteCarloStats>() == s);

    PriorityRecord r{};
    r.uca_id = "UCA-1";
    r.pms = 20;
    r.cif = 6;
    r.sif = 120;
    r.ej = 1.5;
    r.ej_inverted = 0.25;
    r.sif_scaled = 4;
    r.ej_scaled = 3;
    r.priority = Priority::P1;
    nlohmann::json jr = r;
    REQUIRE(jr.get<PriorityRecord>() == r);
    r.final_rank = 3;
    r.stability = Stability::Stable;
    jr = r;
    REQUIRE(jr.get<PriorityRecord>() == r);
}

TEST_CASE("whole dataset round-trips through the JSON reader", "[domain][json]") {
    auto ds = testing::evtol();
    auto text = dataset_to_json(ds).dump(2);
    auto raw = read_dataset_json(text, "dataset.json");
    REQUIRE(check(raw).empty());
    auto again = Dataset::build(raw.losses, raw.controllers, raw.ucas);
    REQUIRE(again == ds);
    REQUIRE(dataset_to_json(again).dump(2) == text);
}

TEST_CASE("priority names and colours", "[domain]") {
    REQUIRE(std::string(to_string(Priority::P1)) == "P1");
    REQUIRE(parse_priority("P5") == Priority::P5);
    REQUIRE_FALSE(parse_priority("P6").has_value());
    REQUIRE(std::string(colour_name(Priority::P1)) == "Darkred");
    REQUIRE(std::string(colour_name(Priority::P5)) == "Green");
}

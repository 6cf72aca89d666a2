#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "ucaprio/sif.hpp"

#include <algorithm>

using namespace ucaprio;

namespace {

UcaRecord with_links(std::set<std::string> links, std::string ctrl = "REG") {
    UcaRecord u;
    u.id = "U";
    u.controller_id = std::move(ctrl);
    u.loss_links = std::move(links);
    return u;
}

} // namespace

TEST_CASE("assign_pms takes the maximum linked sub-loss", "[sif]") {
    auto ds = testing::evtol();
    auto a = assign_pms(*ds.find_uca("UCA-29.5.1"), ds.losses());
    REQUIRE(a.pms == 12);
    REQUIRE(a.governing_sub_loss == "L4.2");
    auto b = assign_pms(*ds.find_uca("UCA-47.1.1"), ds.losses());
    REQUIRE(b.pms == 7);
    REQUIRE(b.governing_sub_loss == "L4.3");
    auto c = assign_pms(with_links({"L1.1"}), ds.losses());
    REQUIRE(c.pms == 20);
    REQUIRE(c.governing_sub_loss == "L1.1");
}

TEST_CASE("assign_pms errors", "[sif]") {
    auto ds = testing::evtol();
    REQUIRE_THROWS_AS(assign_pms(with_links({}), ds.losses()), EmptyLinks);
    REQUIRE_THROWS_AS(assign_pms(with_links({"L1.1", "L9.9"}), ds.losses()), UnresolvedLink);
}

TEST_CASE("assign_pms agrees with a brute-force max on every fixture UCA", "[sif]") {
    auto ds = testing::evtol();
    for (const auto& u : ds.ucas()) {
        int best = 0;
        for (const auto& link : u.loss_links) {
            for (const auto& l : ds.losses()) {
                if (l.id == link) best = std::max(best, l.pms);
            }
        }
        auto a = assign_pms(u, ds.losses());
        REQUIRE(a.pms == best);
        REQUIRE(u.loss_links.count(a.governing_sub_loss) == 1);
    }
}

TEST_CASE("lookup_cif inherits the controller value", "[sif]") {
    auto ds = testing::evtol();
    REQUIRE(lookup_cif(*ds.find_uca("UCA-21.5.1"), ds.controllers()) == 6);
    REQUIRE(lookup_cif(*ds.find_uca("UCA-14.5.1"), ds.controllers()) == 1);
    REQUIRE(lookup_cif(*ds.find_uca("UCA-8.2.1"), ds.controllers()) == 4);
    REQUIRE_THROWS_AS(lookup_cif(with_links({"L1.1"}, "Ghost"), ds.controllers()), UnresolvedController);
}

TEST_CASE("derive_cif_ranking orders by hierarchy level", "[sif]") {
    std::vector<Controller> ctrls;
    for (int level : {3, 1, 6, 2, 5, 4}) ctrls.push_back({"C" + std::to_string(level), "", 0, level});
    auto ranked = derive_cif_ranking(ctrls);
    for (const auto& c : ranked) REQUIRE(c.cif == 7 - c.hierarchy_level);

    auto single = derive_cif_ranking({{"A", "", 0, 3}});
    REQUIRE(single[0].cif == 1);

    REQUIRE_THROWS_AS(derive_cif_ranking({{"A", "", 0, 1}, {"B", "", 0, 1}}), DuplicateLevel);
}

TEST_CASE("compute_sif multiplies pms by cif", "[sif]") {
    STATIC_REQUIRE(compute_sif(20, 6) == 120);
    STATIC_REQUIRE(compute_sif(4, 6) == 24);
    STATIC_REQUIRE(compute_sif(1, 1) == 1);
}

TEST_CASE("the fixture reproduces the published PMS and CIF columns", "[sif]") {
    auto ds = testing::evtol();
    auto table = compute_sif_table(ds);
    REQUIRE(table.size() == testing::case_study().size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& expected = testing::case_study()[i];
        INFO(expected.uca_id);
        REQUIRE(table[i].uca_id == expected.uca_id);
        REQUIRE(table[i].pms == expected.pms);
        REQUIRE(table[i].cif == expected.cif);
        REQUIRE(table[i].sif == expected.pms * expected.cif);
        const auto* governing = ds.find_loss(table[i].governing_sub_loss);
        REQUIRE(governing->pms == table[i].pms);
    }
}

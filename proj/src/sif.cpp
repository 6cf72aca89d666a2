#include "ucaprio/sif.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ucaprio {

PmsAssignment assign_pms(const UcaRecord& uca, std::span<const SubLoss> losses) {
    if (uca.loss_links.empty()) throw EmptyLinks(uca.id + " has no loss links");

    PmsAssignment best;
    for (const auto& link : uca.loss_links) {
        auto it = std::find_if(losses.begin(), losses.end(),
                               [&](const SubLoss& l) { return l.id == link; });
        if (it == losses.end()) {
            throw UnresolvedLink(uca.id + " links to unknown sub-loss \"" + link + "\"");
        }
        if (best.governing_sub_loss.empty() || it->pms > best.pms) {
            best.pms = it->pms;
            best.governing_sub_loss = it->id;
        }
    }
    return best;
}

int lookup_cif(const UcaRecord& uca, std::span<const Controller> controllers) {
    auto it = std::find_if(controllers.begin(), controllers.end(),
                           [&](const Controller& c) { return c.id == uca.controller_id; });
    if (it == controllers.end()) {
        throw UnresolvedController(uca.id + " names unknown controller \"" + uca.controller_id + "\"");
    }
    return it->cif;
}

std::vector<Controller> derive_cif_ranking(std::vector<Controller> controllers) {
    std::set<int> levels;
    for (const auto& c : controllers) {
        if (!levels.insert(c.hierarchy_level).second) {
            throw DuplicateLevel("hierarchy level " + std::to_string(c.hierarchy_level) +
                                 " is used by more than one controller");
        }
    }
    const int count = static_cast<int>(controllers.size());
    for (auto& c : controllers) {
        const int rank = static_cast<int>(std::distance(levels.begin(), levels.find(c.hierarchy_level))) + 1;
        c.cif = count - rank + 1;
    }
    return controllers;
}

std::vector<SifResult> compute_sif_table(const Dataset& dataset) {
    std::vector<SifResult> out;
    out.reserve(dataset.ucas().size());
    for (const auto& uca : dataset.ucas()) {
        auto pms = assign_pms(uca, dataset.losses());
        int cif = lookup_cif(uca, dataset.controllers());
        out.push_back({uca.id, pms.pms, pms.governing_sub_loss, cif, compute_sif(pms.pms, cif)});
    }
    return out;
}

} // namespace ucaprio

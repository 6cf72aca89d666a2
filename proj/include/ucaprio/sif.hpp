#pragma once

#include "ucaprio/domain.hpp"

#include <span>
#include <string>
#include <vector>

namespace ucaprio {

struct PmsAssignment {
    int pms = 0;
    std::string governing_sub_loss;

    bool operator==(const PmsAssignment&) const = default;
};

struct SifResult {
    std::string uca_id;
    int pms = 0;
    std::string governing_sub_loss;
    int cif = 0;
    int sif = 0;

    bool operator==(const SifResult&) const = default;
};

// Maximum pms over the linked sub-losses and the sub-loss attaining it.
// Throws EmptyLinks or UnresolvedLink.
PmsAssignment assign_pms(const UcaRecord& uca, std::span<const SubLoss> losses);

// The issuing controller's cif. Throws UnresolvedController.
int lookup_cif(const UcaRecord& uca, std::span<const Controller> controllers);

// Fills cif from hierarchy position: the top level gets the controller count,
// the bottom level gets 1. Throws DuplicateLevel.
std::vector<Controller> derive_cif_ranking(std::vector<Controller> controllers);

constexpr int compute_sif(int pms, int cif) { return pms * cif; }

// SIF for every UCA of the dataset, in dataset order.
std::vector<SifResult> compute_sif_table(const Dataset& dataset);

} // namespace ucaprio

#pragma once

#include <optional>
#include <vector>

#include "relunif/formula.hpp"
#include "relunif/kripke.hpp"

namespace relunif {

// The strongest NNIL formula over `atoms` forced at the root, as a representative.
Formula nnil_theory(const KripkeModel& k, const AtomSet& atoms);
// K1 ⊑ K2 over `atoms`, decided through the NNIL theory of K2.
bool is_submodel(const KripkeModel& k1, const KripkeModel& k2, const AtomSet& atoms);

struct ExtendibilityReport {
    bool extendible = true;
    // On failure: the host model and the family (indices into the class) with no variant in the class.
    int host = -1;
    std::vector<int> family;
};

// Members are identified up to bisimulation. Throws BudgetExceeded when some host has
// more than 20 members below it.
ExtendibilityReport check_class_extendible(const std::vector<KripkeModel>& models, const AtomSet& protected_atoms);
bool is_class_extendible(const std::vector<KripkeModel>& models, const AtomSet& protected_atoms);

}  // namespace relunif

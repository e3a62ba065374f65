#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "relunif/formula.hpp"

namespace relunif {

// All formulas over a fixed atom list, graded by connective_count (⊥ counts as one).
class FormulaLevels {
public:
    explicit FormulaLevels(AtomSet atoms);

    const AtomSet& atoms() const { return atoms_; }
    // Exactly s connectives; built and kept on first use.
    const std::vector<Formula>& level(unsigned s);
    // Size of level s without building it.
    std::uint64_t count(unsigned s) const;

    // Streams level s from the stored levels below it; fn returns false to stop.
    // With scratch set, each batch of up to 1024 right operands runs inside a ScratchScope.
    // Returns false when stopped early.
    bool for_each(unsigned s, const std::function<bool(Formula)>& fn, bool scratch = false);

private:
    AtomSet atoms_;
    std::vector<std::vector<Formula>> levels_;
};

// Uniform-ish random formula with exactly `size` connectives.
Formula random_formula(std::mt19937_64& rng, const AtomSet& atoms, unsigned size);

}  // namespace relunif

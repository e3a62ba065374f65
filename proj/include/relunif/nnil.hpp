#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "relunif/formula.hpp"
#include "relunif/types.hpp"

namespace relunif {

// Bitset over the rank-#atoms type universe; identifies an NNIL class exactly.
using Signature = std::vector<std::uint64_t>;

// One representative per IPC-class of NNIL formulas over `atoms`.
struct RepSet {
    AtomSet atoms;
    std::vector<Formula> reps;
    std::vector<Signature> sigs;
    std::map<Signature, int> index;
    bool closed = true;

    std::size_t size() const { return reps.size(); }
    // Representative of the class with this signature, if it is one of ours.
    std::optional<Formula> find(const Signature& s) const;
    Signature meet(const Signature& a, const Signature& b) const;
    Signature join(const Signature& a, const Signature& b) const;
};

RepSet enumerate_nnil(const AtomSet& atoms, std::size_t budget = kDefaultTypeBudget);
// Shared, lazily built repsets; thread-safe.
const RepSet& nnil_reps(const AtomSet& atoms);

struct StarTrace {
    std::size_t calls = 0;
    std::size_t guard_hits = 0;
};

// A★ computed by the syntactic recursion, without final simplification. Throws
// BudgetExceeded past its depth or step limit.
Formula star_raw(Formula a, StarTrace* trace = nullptr);
// A★, simplified. When the recursion hits its cycle guard or its step limit the answer
// comes from star_semantic instead, unless the parameter repset is out of budget.
Formula star(Formula a, const AtomSet& par = {});
// ⋁{E ∈ NNIL(par ∪ params(a)) : ⊢ E → a} as the canonical representative.
Formula star_semantic(Formula a, const AtomSet& par = {});

struct StarCheck {
    Formula syntactic;
    Formula semantic;
    bool guarded = false;
    bool agrees = false;
};
StarCheck star_checked(Formula a, const AtomSet& par = {});

// IPC-components whose disjunction is equivalent to a; [⊥] when a normalizes to ⊥.
// Throws UnsupportedInput unless a is NNIL.
std::vector<Formula> decompose_components(Formula a);
// Conjunction of atoms and implications with an atomic antecedent not among the atoms.
bool is_component(Formula a);
bool is_prime_nnil(Formula a);
std::vector<Formula> prime_reps(const RepSet& reps);

}  // namespace relunif

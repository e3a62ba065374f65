#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "relunif/formula.hpp"
#include "relunif/kripke.hpp"

namespace relunif {

constexpr std::size_t kDefaultTypeBudget = 200000;

// Rank-n bounded-bisimulation type as a plain value.
struct NType {
    unsigned rank = 0;
    AtomSet root_atoms;
    std::vector<NType> successors;  // sorted, without duplicates
    friend bool operator==(const NType&, const NType&) = default;
    friend auto operator<=>(const NType& a, const NType& b) {
        if (a.rank != b.rank) return a.rank <=> b.rank;
        if (a.root_atoms < b.root_atoms) return std::strong_ordering::less;
        if (b.root_atoms < a.root_atoms) return std::strong_ordering::greater;
        return a.successors <=> b.successors;
    }
};

// Interning table for types over a fixed atom list. Type ids are stable for the
// lifetime of the table; the realizable universe of each rank is generated on demand.
class TypeTable {
public:
    explicit TypeTable(AtomSet atoms, std::size_t budget = kDefaultTypeBudget);

    const AtomSet& atoms() const { return atoms_; }
    unsigned rank(int t) const { return entries_[t].rank; }
    std::uint32_t mask(int t) const { return entries_[t].mask; }
    const std::vector<int>& successors(int t) const { return entries_[t].succ; }
    AtomSet root_atoms(int t) const;

    int type_of(const KripkeModel& k, unsigned n);
    std::vector<int> node_types(const KripkeModel& k, unsigned n);
    NType value(int t) const;

    bool leq(int t1, int t2) const;
    int project(int t);

    // Every type of rank n realized by some finite model.
    const std::vector<int>& universe(unsigned n);
    // Types of rank n realized by models forcing f at every node; needs c_arrow(f) <= n.
    std::vector<int> universe_forcing(unsigned n, Formula f);

    bool forces(int t, Formula f);
    Formula chi(int t);
    // ⋁ χ over the maximal elements of a downward-closed set; the full universe gives ⊤.
    Formula downset_formula(const std::vector<int>& types, unsigned n);

private:
    struct Entry {
        unsigned rank;
        std::uint32_t mask;
        std::vector<int> succ;
    };
    int intern(unsigned rank, std::uint32_t mask, std::vector<int> succ);
    std::uint32_t mask_of(const AtomSet& v) const;
    std::vector<int> generate(unsigned n, std::optional<Formula> filter);
    int root_type(unsigned rank, std::uint32_t v, const std::vector<int>& below);

    AtomSet atoms_;
    std::size_t budget_;
    std::vector<Entry> entries_;
    std::map<std::tuple<unsigned, std::uint32_t, std::vector<int>>, int> index_;
    std::map<unsigned, std::vector<int>> universes_;
    std::unordered_map<int, int> projection_;
    std::map<std::pair<int, std::uint32_t>, bool> forcing_memo_;
    std::unordered_map<int, Formula> chi_memo_;
};

NType ntype_of(const KripkeModel& k, unsigned n, const AtomSet& atoms);
bool leq_n(const KripkeModel& k1, const KripkeModel& k2, unsigned n, const AtomSet& atoms);
bool sim_n(const KripkeModel& k1, const KripkeModel& k2, unsigned n, const AtomSet& atoms);
Formula chi(const KripkeModel& k, unsigned n, const AtomSet& atoms, std::size_t budget = kDefaultTypeBudget);
Formula closure_formula(const std::vector<KripkeModel>& models, unsigned n, const AtomSet& atoms,
                        std::size_t budget = kDefaultTypeBudget);

// Downward-closed subsets of `types` under ≤ₙ, each as a sorted id list. Throws
// BudgetExceeded past `budget` sets.
std::vector<std::vector<int>> downsets(const TypeTable& table, const std::vector<int>& types, std::size_t budget);

// One formula per equivalence class of formulas over `atoms` with c_arrow <= n.
std::vector<Formula> enumerate_bounded_formulas(const AtomSet& atoms, unsigned n,
                                                std::size_t budget = kDefaultTypeBudget);

}  // namespace relunif

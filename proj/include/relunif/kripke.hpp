#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "relunif/formula.hpp"
#include "relunif/substitution.hpp"

namespace relunif {

// Dynamic bitset over the nodes of one model.
class NodeSet {
public:
    NodeSet() = default;
    explicit NodeSet(std::size_t n, bool value = false);
    std::size_t size() const { return n_; }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v = true);
    NodeSet& operator&=(const NodeSet& o);
    NodeSet& operator|=(const NodeSet& o);
    NodeSet operator~() const;
    bool any() const;
    bool all() const;
    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

// Finite rooted tree with a monotone valuation. Node 0 is the root and every
// parent index is smaller than its children's.
class KripkeModel {
public:
    KripkeModel() : KripkeModel(AtomSet{}) {}
    explicit KripkeModel(AtomSet root_valuation);

    // parent[i] < 0 marks the root; any order is accepted and renumbered breadth-first.
    // Throws InputError on a non-tree or non-monotone valuation.
    static KripkeModel from_parents(const std::vector<int>& parent, const std::vector<AtomSet>& valuation);

    int add_child(int parent, AtomSet valuation);

    std::size_t size() const { return parent_.size(); }
    int parent(int w) const { return parent_.at(w); }
    const std::vector<int>& children(int w) const { return children_.at(w); }
    const AtomSet& valuation(int w) const { return valuation_.at(w); }
    AtomSet atoms() const;
    bool leq(int w, int u) const;  // w ≼ u
    std::vector<int> up(int w) const;
    std::size_t depth() const;

    KripkeModel generated(int w) const;  // K_w
    KripkeModel restrict_atoms(const AtomSet& keep) const;
    // Keeps the nodes in `keep` (which must contain a node below all others) with the induced order.
    KripkeModel induced(const std::vector<int>& keep) const;

    friend bool operator==(const KripkeModel&, const KripkeModel&) = default;

private:
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<AtomSet> valuation_;
};

class Forcing {
public:
    explicit Forcing(const KripkeModel& k) : k_(k) {}
    const NodeSet& nodes(Formula f);
    bool at(int w, Formula f) { return nodes(f).test(static_cast<std::size_t>(w)); }
    bool root(Formula f) { return at(0, f); }

private:
    const KripkeModel& k_;
    std::unordered_map<Formula, NodeSet> memo_;
};

bool forces(const KripkeModel& k, int w, Formula f);
bool forces(const KripkeModel& k, Formula f);  // at the root

KripkeModel subst_model(const Substitution& theta, const KripkeModel& k);

// Fresh root below disjoint copies. Without a source, the root forces the atoms forced by
// every summand root. With a source, protected atoms at the root follow the source root.
// Either way the root valuation is cut down to keep monotonicity.
KripkeModel sum(const std::vector<KripkeModel>& models, const KripkeModel* source = nullptr,
                std::optional<AtomSet> protected_atoms = std::nullopt);

KripkeModel variant(const KripkeModel& k, const AtomSet& protected_atoms, const AtomSet& new_root);

// Canonical code of the rooted labelled tree, invariant under isomorphism.
std::string tree_code(const KripkeModel& k);
// Canonical code of the bisimulation contraction; equal codes iff bisimilar.
std::string bisim_code(const KripkeModel& k);

// All models up to isomorphism with at most max_nodes nodes whose valuations range over atoms.
std::vector<KripkeModel> enumerate_models(const AtomSet& atoms, std::size_t max_nodes);

// Largest relation satisfying the back condition and atom agreement on `atoms`;
// true when the root of k1 is related to some node of k2.
bool relational_submodel(const KripkeModel& k1, const KripkeModel& k2, const AtomSet& atoms);
// Order- and valuation-preserving embedding of k1 into k2 restricted to `atoms`.
bool embeds(const KripkeModel& k1, const KripkeModel& k2, const AtomSet& atoms);

nlohmann::json model_to_json(const KripkeModel& k);
KripkeModel model_from_json(const nlohmann::json& j);
std::string describe(const KripkeModel& k);

}  // namespace relunif

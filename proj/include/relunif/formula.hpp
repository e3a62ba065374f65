#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace relunif {

enum class Kind : std::uint8_t { Bot, Var, Par, And, Or, Imp };

class Atom {
public:
    Atom() = default;
    static Atom var(std::string_view name);
    static Atom par(std::string_view name);

    std::uint32_t id() const { return id_; }
    bool is_param() const;
    const std::string& name() const;
    std::string text() const;  // "#p" for parameters

    friend bool operator==(Atom a, Atom b) { return a.id_ == b.id_; }
    friend bool operator!=(Atom a, Atom b) { return a.id_ != b.id_; }
    // Name order, variables before parameters on equal names.
    friend bool operator<(Atom a, Atom b);

private:
    explicit Atom(std::uint32_t id) : id_(id) {}
    std::uint32_t id_ = 0;
    friend class FormulaStore;
};

struct Node;

class Formula {
public:
    Formula() = default;

    static Formula bot();
    static Formula top();
    static Formula atom(Atom a);
    static Formula var(std::string_view name) { return atom(Atom::var(name)); }
    static Formula par(std::string_view name) { return atom(Atom::par(name)); }
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula imp(Formula a, Formula b);
    static Formula neg(Formula a) { return imp(a, bot()); }
    // Left-folded; empty conjunction is top, empty disjunction is bot.
    static Formula conj(const std::vector<Formula>& xs);
    static Formula disj(const std::vector<Formula>& xs);

    bool valid() const { return n_ != nullptr; }
    Kind kind() const;
    Formula lhs() const;
    Formula rhs() const;
    Atom atom() const;
    std::uint32_t id() const;
    std::size_t hash() const;

    bool is_bot() const { return kind() == Kind::Bot; }
    bool is_var() const { return kind() == Kind::Var; }
    bool is_par() const { return kind() == Kind::Par; }
    bool is_atom() const { return is_var() || is_par(); }
    bool is_and() const { return kind() == Kind::And; }
    bool is_or() const { return kind() == Kind::Or; }
    bool is_imp() const { return kind() == Kind::Imp; }
    bool is_top() const;

    friend bool operator==(Formula a, Formula b) { return a.n_ == b.n_; }
    friend bool operator!=(Formula a, Formula b) { return a.n_ != b.n_; }
    friend bool operator<(Formula a, Formula b) { return a.id() < b.id(); }

private:
    explicit Formula(const Node* n) : n_(n) {}
    const Node* n_ = nullptr;
    friend class FormulaStore;
};

struct FormulaHash {
    std::size_t operator()(Formula f) const { return f.hash(); }
};

struct Node {
    Kind kind;
    std::uint32_t atom;
    const Node* lhs;
    const Node* rhs;
    std::uint32_t id;
    std::size_t hash;
};

// Number of interned nodes; useful for diagnostics and benchmarks.
std::size_t interned_count();

// Formulas interned while a scope is open are discarded when it closes, so large
// enumerations run in bounded memory. Registered hooks drop cached entries that
// mention discarded ids first. Nothing built inside may be used afterwards, and no
// other thread may intern meanwhile.
class ScratchScope {
public:
    ScratchScope();
    ~ScratchScope();
    ScratchScope(const ScratchScope&) = delete;
    ScratchScope& operator=(const ScratchScope&) = delete;

private:
    std::uint32_t mark_;
};

// hook(mark) runs before every node with id >= mark is discarded.
void on_formula_truncate(std::function<void(std::uint32_t)> hook);

class AtomSet {
public:
    AtomSet() = default;
    AtomSet(std::initializer_list<Atom> xs);
    explicit AtomSet(std::vector<Atom> xs);

    bool contains(Atom a) const;
    void insert(Atom a);
    void erase(Atom a);
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    const std::vector<Atom>& items() const { return items_; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    bool subset_of(const AtomSet& o) const;
    AtomSet unite(const AtomSet& o) const;
    AtomSet intersect(const AtomSet& o) const;
    AtomSet minus(const AtomSet& o) const;
    AtomSet params() const;
    AtomSet vars() const;

    friend bool operator==(const AtomSet& a, const AtomSet& b) { return a.items_ == b.items_; }
    friend bool operator<(const AtomSet& a, const AtomSet& b) { return a.items_ < b.items_; }

private:
    std::vector<Atom> items_;  // sorted by operator<
};

AtomSet atoms_of(Formula f);
AtomSet atoms_of(const std::vector<Formula>& fs);
// All distinct subformulas, children before parents.
std::vector<Formula> subformulas(Formula f);
std::vector<Formula> subformulas(const std::vector<Formula>& fs);

std::vector<Formula> conjuncts(Formula f);
std::vector<Formula> disjuncts(Formula f);

}  // namespace relunif

template <>
struct std::hash<relunif::Formula> {
    std::size_t operator()(relunif::Formula f) const { return f.hash(); }
};
template <>
struct std::hash<relunif::Atom> {
    std::size_t operator()(relunif::Atom a) const { return a.id(); }
};

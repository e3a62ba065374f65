#include "relunif/formula.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <unordered_set>

namespace relunif {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

struct NodeKeyHash {
    std::size_t operator()(const Node* n) const { return n->hash; }
};
struct NodeKeyEq {
    bool operator()(const Node* a, const Node* b) const {
        return a->kind == b->kind && a->atom == b->atom && a->lhs == b->lhs && a->rhs == b->rhs;
    }
};

struct AtomInfo {
    std::string name;
    bool param;
};

}  // namespace

class FormulaStore {
public:
    static FormulaStore& get() {
        static FormulaStore* s = new FormulaStore();
        return *s;
    }

    const Node* intern(Kind k, std::uint32_t atom, const Node* l, const Node* r) {
        std::size_t h = mix(mix(mix(static_cast<std::size_t>(k) + 1, atom), l ? l->hash : 0),
                            r ? r->hash : 0);
        Node probe{k, atom, l, r, 0, h};
        {
            std::shared_lock lock(mu_);
            auto it = table_.find(&probe);
            if (it != table_.end()) return *it;
        }
        std::unique_lock lock(mu_);
        auto it = table_.find(&probe);
        if (it != table_.end()) return *it;
        probe.id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(probe);
        const Node* n = &nodes_.back();
        table_.insert(n);
        return n;
    }

    std::uint32_t atom_id(std::string_view name, bool param) {
        std::string key = (param ? "#" : "") + std::string(name);
        {
            std::shared_lock lock(atom_mu_);
            auto it = atom_index_.find(key);
            if (it != atom_index_.end()) return it->second;
        }
        std::unique_lock lock(atom_mu_);
        auto it = atom_index_.find(key);
        if (it != atom_index_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(atoms_.size());
        atoms_.push_back({std::string(name), param});
        atom_index_.emplace(key, id);
        return id;
    }

    const AtomInfo& atom_info(std::uint32_t id) {
        std::shared_lock lock(atom_mu_);
        return atoms_[id];
    }

    std::size_t size() {
        std::shared_lock lock(mu_);
        return nodes_.size();
    }

    std::uint32_t mark() {
        std::shared_lock lock(mu_);
        return static_cast<std::uint32_t>(nodes_.size());
    }

    void truncate(std::uint32_t mark) {
        std::vector<std::function<void(std::uint32_t)>> hooks;
        {
            std::lock_guard lock(hook_mu_);
            hooks = hooks_;
        }
        for (auto& h : hooks) h(mark);
        std::unique_lock lock(mu_);
        while (nodes_.size() > mark) {
            table_.erase(&nodes_.back());
            nodes_.pop_back();
        }
    }

    void add_hook(std::function<void(std::uint32_t)> h) {
        std::lock_guard lock(hook_mu_);
        hooks_.push_back(std::move(h));
    }

    static Formula wrap(const Node* n) { return Formula(n); }
    static const Node* unwrap(Formula f) { return f.n_; }
    static Atom make_atom(std::uint32_t id) { return Atom(id); }

private:
    FormulaStore() = default;
    std::shared_mutex mu_;
    std::deque<Node> nodes_;
    std::unordered_set<const Node*, NodeKeyHash, NodeKeyEq> table_;
    std::shared_mutex atom_mu_;
    std::deque<AtomInfo> atoms_;
    std::unordered_map<std::string, std::uint32_t> atom_index_;
    std::mutex hook_mu_;
    std::vector<std::function<void(std::uint32_t)>> hooks_;
};

ScratchScope::ScratchScope() : mark_(FormulaStore::get().mark()) {}
ScratchScope::~ScratchScope() { FormulaStore::get().truncate(mark_); }

void on_formula_truncate(std::function<void(std::uint32_t)> hook) { FormulaStore::get().add_hook(std::move(hook)); }

Atom Atom::var(std::string_view name) {
    return FormulaStore::make_atom(FormulaStore::get().atom_id(name, false));
}
Atom Atom::par(std::string_view name) {
    return FormulaStore::make_atom(FormulaStore::get().atom_id(name, true));
}
bool Atom::is_param() const { return FormulaStore::get().atom_info(id_).param; }
const std::string& Atom::name() const { return FormulaStore::get().atom_info(id_).name; }
std::string Atom::text() const { return is_param() ? "#" + name() : name(); }

bool operator<(Atom a, Atom b) {
    if (a.id_ == b.id_) return false;
    const auto& x = FormulaStore::get().atom_info(a.id_);
    const auto& y = FormulaStore::get().atom_info(b.id_);
    if (x.name != y.name) return x.name < y.name;
    return !x.param && y.param;
}

Formula Formula::bot() {
    static const Node* n = FormulaStore::get().intern(Kind::Bot, 0, nullptr, nullptr);
    return Formula(n);
}
Formula Formula::top() { return imp(bot(), bot()); }
Formula Formula::atom(Atom a) {
    return Formula(FormulaStore::get().intern(a.is_param() ? Kind::Par : Kind::Var, a.id(), nullptr,
                                              nullptr));
}
Formula Formula::conj(Formula a, Formula b) {
    return Formula(FormulaStore::get().intern(Kind::And, 0, a.n_, b.n_));
}
Formula Formula::disj(Formula a, Formula b) {
    return Formula(FormulaStore::get().intern(Kind::Or, 0, a.n_, b.n_));
}
Formula Formula::imp(Formula a, Formula b) {
    return Formula(FormulaStore::get().intern(Kind::Imp, 0, a.n_, b.n_));
}
Formula Formula::conj(const std::vector<Formula>& xs) {
    if (xs.empty()) return top();
    Formula acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = conj(acc, xs[i]);
    return acc;
}
Formula Formula::disj(const std::vector<Formula>& xs) {
    if (xs.empty()) return bot();
    Formula acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = disj(acc, xs[i]);
    return acc;
}

Kind Formula::kind() const { return n_->kind; }
Formula Formula::lhs() const { return Formula(n_->lhs); }
Formula Formula::rhs() const { return Formula(n_->rhs); }
Atom Formula::atom() const { return FormulaStore::make_atom(n_->atom); }
std::uint32_t Formula::id() const { return n_->id; }
std::size_t Formula::hash() const { return n_->hash; }
bool Formula::is_top() const {
    return n_->kind == Kind::Imp && n_->lhs->kind == Kind::Bot && n_->rhs->kind == Kind::Bot;
}

std::size_t interned_count() { return FormulaStore::get().size(); }

AtomSet::AtomSet(std::initializer_list<Atom> xs) : items_(xs) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}
AtomSet::AtomSet(std::vector<Atom> xs) : items_(std::move(xs)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}
bool AtomSet::contains(Atom a) const { return std::binary_search(items_.begin(), items_.end(), a); }
void AtomSet::insert(Atom a) {
    auto it = std::lower_bound(items_.begin(), items_.end(), a);
    if (it == items_.end() || *it != a) items_.insert(it, a);
}
void AtomSet::erase(Atom a) {
    auto it = std::lower_bound(items_.begin(), items_.end(), a);
    if (it != items_.end() && *it == a) items_.erase(it);
}
bool AtomSet::subset_of(const AtomSet& o) const {
    return std::includes(o.items_.begin(), o.items_.end(), items_.begin(), items_.end());
}
AtomSet AtomSet::unite(const AtomSet& o) const {
    AtomSet r;
    std::set_union(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                   std::back_inserter(r.items_));
    return r;
}
AtomSet AtomSet::intersect(const AtomSet& o) const {
    AtomSet r;
    std::set_intersection(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                          std::back_inserter(r.items_));
    return r;
}
AtomSet AtomSet::minus(const AtomSet& o) const {
    AtomSet r;
    std::set_difference(items_.begin(), items_.end(), o.items_.begin(), o.items_.end(),
                        std::back_inserter(r.items_));
    return r;
}
AtomSet AtomSet::params() const {
    AtomSet r;
    for (Atom a : items_)
        if (a.is_param()) r.items_.push_back(a);
    return r;
}
AtomSet AtomSet::vars() const {
    AtomSet r;
    for (Atom a : items_)
        if (!a.is_param()) r.items_.push_back(a);
    return r;
}

std::vector<Formula> subformulas(const std::vector<Formula>& fs) {
    std::vector<Formula> out;
    std::unordered_set<Formula> seen;
    std::vector<std::pair<Formula, bool>> stack;
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) stack.push_back({*it, false});
    while (!stack.empty()) {
        auto [f, expanded] = stack.back();
        stack.pop_back();
        if (seen.count(f)) continue;
        if (expanded || f.is_bot() || f.is_atom()) {
            seen.insert(f);
            out.push_back(f);
            continue;
        }
        stack.push_back({f, true});
        stack.push_back({f.rhs(), false});
        stack.push_back({f.lhs(), false});
    }
    return out;
}

std::vector<Formula> subformulas(Formula f) { return subformulas(std::vector<Formula>{f}); }

AtomSet atoms_of(const std::vector<Formula>& fs) {
    std::vector<Atom> xs;
    for (Formula s : subformulas(fs))
        if (s.is_atom()) xs.push_back(s.atom());
    return AtomSet(std::move(xs));
}

AtomSet atoms_of(Formula f) { return atoms_of(std::vector<Formula>{f}); }

namespace {
void flatten(Formula f, Kind k, std::vector<Formula>& out) {
    if (f.kind() == k) {
        flatten(f.lhs(), k, out);
        flatten(f.rhs(), k, out);
    } else {
        out.push_back(f);
    }
}
}  // namespace

std::vector<Formula> conjuncts(Formula f) {
    std::vector<Formula> out;
    flatten(f, Kind::And, out);
    return out;
}

std::vector<Formula> disjuncts(Formula f) {
    std::vector<Formula> out;
    flatten(f, Kind::Or, out);
    return out;
}

}  // namespace relunif

#include "relunif/types.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "relunif/errors.hpp"
#include "relunif/operators.hpp"

namespace relunif {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<int> merge(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

TypeTable::TypeTable(AtomSet atoms, std::size_t budget) : atoms_(std::move(atoms)), budget_(budget) {
    if (atoms_.size() > 16) throw BudgetExceeded("type tables support at most 16 atoms");
}

AtomSet TypeTable::root_atoms(int t) const {
    std::vector<Atom> xs;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (entries_[t].mask >> i & 1u) xs.push_back(atoms_.items()[i]);
    return AtomSet(std::move(xs));
}

std::uint32_t TypeTable::mask_of(const AtomSet& v) const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (v.contains(atoms_.items()[i])) m |= 1u << i;
    return m;
}

int TypeTable::intern(unsigned rank, std::uint32_t mask, std::vector<int> succ) {
    auto key = std::make_tuple(rank, mask, succ);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (entries_.size() >= budget_)
        throw BudgetExceeded("type table exceeded its budget of " + std::to_string(budget_) + " types");
    int id = static_cast<int>(entries_.size());
    entries_.push_back({rank, mask, std::move(succ)});
    index_.emplace(std::move(key), id);
    return id;
}

std::vector<int> TypeTable::node_types(const KripkeModel& k, unsigned n) {
    const std::size_t size = k.size();
    std::vector<std::uint32_t> masks(size);
    for (std::size_t w = 0; w < size; ++w) masks[w] = mask_of(k.valuation(static_cast<int>(w)));
    std::vector<int> cur(size);
    for (std::size_t w = 0; w < size; ++w) cur[w] = intern(0, masks[w], {});
    for (unsigned j = 1; j <= n; ++j) {
        std::vector<std::vector<int>> below(size);
        for (std::size_t w = size; w-- > 0;) {
            std::vector<int> d{cur[w]};
            for (int c : k.children(static_cast<int>(w))) d = merge(d, below[c]);
            below[w] = sorted_unique(std::move(d));
        }
        std::vector<int> next(size);
        for (std::size_t w = 0; w < size; ++w) next[w] = intern(j, masks[w], below[w]);
        cur = std::move(next);
    }
    return cur;
}

int TypeTable::type_of(const KripkeModel& k, unsigned n) { return node_types(k, n)[0]; }

NType TypeTable::value(int t) const {
    NType out;
    out.rank = entries_[t].rank;
    out.root_atoms = root_atoms(t);
    for (int s : entries_[t].succ) out.successors.push_back(value(s));
    std::sort(out.successors.begin(), out.successors.end());
    return out;
}

bool TypeTable::leq(int t1, int t2) const {
    const Entry& a = entries_[t1];
    const Entry& b = entries_[t2];
    if (a.rank != b.rank) throw InputError("comparing types of different rank");
    if (a.rank == 0) return (a.mask & b.mask) == b.mask;
    return std::includes(b.succ.begin(), b.succ.end(), a.succ.begin(), a.succ.end());
}

int TypeTable::project(int t) {
    auto it = projection_.find(t);
    if (it != projection_.end()) return it->second;
    const unsigned r = entries_[t].rank;
    if (r == 0) throw InputError("cannot project a rank-0 type");
    int out;
    if (r == 1) {
        out = intern(0, entries_[t].mask, {});
    } else {
        std::vector<int> succ;
        for (int s : std::vector<int>(entries_[t].succ)) succ.push_back(project(s));
        out = intern(r - 1, entries_[t].mask, sorted_unique(std::move(succ)));
    }
    projection_.emplace(t, out);
    return out;
}

int TypeTable::root_type(unsigned rank, std::uint32_t v, const std::vector<int>& below) {
    if (rank == 0) return intern(0, v, {});
    // r_j: the rank-j type of the fresh root whose strict successors have rank-(rank-1) types `below`.
    int r = intern(0, v, {});
    std::vector<int> level = below;
    std::vector<std::vector<int>> projected(rank);
    projected[rank - 1] = below;
    for (unsigned j = rank - 1; j-- > 0;) {
        std::vector<int> p;
        for (int s : projected[j + 1]) p.push_back(project(s));
        projected[j] = sorted_unique(std::move(p));
    }
    for (unsigned j = 1; j < rank; ++j) {
        std::vector<int> succ = projected[j - 1];
        succ.push_back(r);
        r = intern(j, v, sorted_unique(std::move(succ)));
    }
    std::vector<int> succ = below;
    succ.push_back(r);
    return intern(rank, v, sorted_unique(std::move(succ)));
}

std::vector<int> TypeTable::generate(unsigned n, std::optional<Formula> filter) {
    const unsigned m = static_cast<unsigned>(atoms_.size());
    const std::uint32_t full = m == 32 ? ~0u : (1u << m) - 1;
    std::vector<int> found;
    std::set<int> found_set;
    auto admit = [&](int t) {
        if (found_set.count(t)) return false;
        if (filter && !forces(t, *filter)) return false;
        found_set.insert(t);
        found.push_back(t);
        return true;
    };
    if (n == 0) {
        for (std::uint32_t v = 0; v <= full; ++v) admit(intern(0, v, {}));
        return found;
    }
    universe(n - 1);
    std::vector<std::set<std::vector<int>>> unions(static_cast<std::size_t>(full) + 1);
    std::size_t union_count = 0;
    std::size_t merge_count = 0;
    std::vector<int> work;
    for (std::uint32_t v = 0; v <= full; ++v) {
        unions[v].insert(std::vector<int>{});
        ++union_count;
        int t = root_type(n, v, {});
        if (admit(t)) work.push_back(t);
    }
    while (!work.empty()) {
        int t = work.back();
        work.pop_back();
        const std::uint32_t mt = entries_[t].mask;
        const std::vector<int> st = entries_[t].succ;
        // Every V ⊆ mask(t) may place t directly above a root with valuation V.
        for (std::uint32_t v = mt;; v = (v - 1) & mt) {
            // Sets inserted during the sweep are fixed points of the merge, so visiting them is harmless.
            for (auto it = unions[v].begin(); it != unions[v].end(); ++it) {
                if (++merge_count > budget_ * 50)
                    throw BudgetExceeded("type universe generation exceeded its budget");
                std::vector<int> w = merge(*it, st);
                if (!unions[v].insert(w).second) continue;
                if (++union_count > budget_ * 4)
                    throw BudgetExceeded("type universe generation exceeded its budget");
                int t2 = root_type(n, v, w);
                if (admit(t2)) work.push_back(t2);
            }
            if (v == 0) break;
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

const std::vector<int>& TypeTable::universe(unsigned n) {
    auto it = universes_.find(n);
    if (it != universes_.end()) return it->second;
    std::vector<int> u = generate(n, std::nullopt);
    return universes_.emplace(n, std::move(u)).first->second;
}

std::vector<int> TypeTable::universe_forcing(unsigned n, Formula f) {
    if (c_arrow(f) > n) throw InputError("formula deeper than the type rank");
    if (universes_.count(n)) {
        std::vector<int> out;
        for (int t : universes_.at(n))
            if (forces(t, f)) out.push_back(t);
        return out;
    }
    return generate(n, f);
}

bool TypeTable::forces(int t, Formula f) {
    if (f.is_top()) return true;
    switch (f.kind()) {
        case Kind::Bot:
            return false;
        case Kind::Var:
        case Kind::Par: {
            auto pos = std::lower_bound(atoms_.begin(), atoms_.end(), f.atom());
            if (pos == atoms_.end() || *pos != f.atom()) return false;
            return entries_[t].mask >> (pos - atoms_.begin()) & 1u;
        }
        default:
            break;
    }
    auto key = std::make_pair(t, f.id());
    auto it = forcing_memo_.find(key);
    if (it != forcing_memo_.end()) return it->second;
    bool out;
    if (f.is_and()) {
        out = forces(t, f.lhs()) && forces(t, f.rhs());
    } else if (f.is_or()) {
        out = forces(t, f.lhs()) || forces(t, f.rhs());
    } else {
        if (entries_[t].rank == 0) throw InputError("implication evaluated on a rank-0 type");
        out = true;
        for (int s : std::vector<int>(entries_[t].succ))
            if (forces(s, f.lhs()) && !forces(s, f.rhs())) {
                out = false;
                break;
            }
    }
    forcing_memo_.emplace(key, out);
    return out;
}

Formula TypeTable::chi(int t) {
    auto it = chi_memo_.find(t);
    if (it != chi_memo_.end()) return it->second;
    Formula out;
    const unsigned r = entries_[t].rank;
    if (r == 0) {
        std::vector<Formula> xs;
        for (Atom a : root_atoms(t)) xs.push_back(Formula::atom(a));
        out = Formula::conj(xs);
    } else {
        const std::vector<int> u = universe(r - 1);
        const std::vector<int> succ = entries_[t].succ;
        std::vector<Formula> parts;
        for (int t1 : u) {
            if (std::binary_search(succ.begin(), succ.end(), t1)) continue;
            std::vector<int> outside;
            for (int t2 : u)
                if (!leq(t1, t2)) outside.push_back(t2);
            std::vector<Formula> alts;
            for (int t2 : outside)
                if (std::none_of(outside.begin(), outside.end(), [&](int t3) { return t3 != t2 && leq(t2, t3); }))
                    alts.push_back(chi(t2));
            parts.push_back(Formula::imp(chi(t1), Formula::disj(alts)));
        }
        out = Formula::conj(parts);
    }
    chi_memo_.emplace(t, out);
    return out;
}

Formula TypeTable::downset_formula(const std::vector<int>& types, unsigned n) {
    if (types.empty()) return Formula::bot();
    std::vector<int> sorted = sorted_unique(types);
    if (sorted == universe(n)) return Formula::top();
    std::vector<Formula> alts;
    for (int t : sorted) {
        bool maximal = true;
        for (int s : sorted)
            if (s != t && leq(t, s)) {
                maximal = false;
                break;
            }
        if (maximal) alts.push_back(chi(t));
    }
    return Formula::disj(alts);
}

std::vector<std::vector<int>> downsets(const TypeTable& table, const std::vector<int>& types, std::size_t budget) {
    std::vector<int> order = types;
    auto weight = [&](int t) {
        return table.rank(t) == 0 ? -std::popcount(table.mask(t)) : static_cast<int>(table.successors(t).size());
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight(a) < weight(b); });
    const std::size_t n = order.size();
    std::vector<std::vector<std::size_t>> below(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (table.leq(order[j], order[i])) below[i].push_back(j);
    std::vector<std::vector<int>> out;
    std::vector<char> in(n, 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            if (out.size() >= budget) throw BudgetExceeded("more than " + std::to_string(budget) + " downsets");
            std::vector<int> d;
            for (std::size_t k = 0; k < n; ++k)
                if (in[k]) d.push_back(order[k]);
            out.push_back(sorted_unique(std::move(d)));
            return;
        }
        self(self, i + 1);
        if (std::all_of(below[i].begin(), below[i].end(), [&](std::size_t j) { return in[j] != 0; })) {
            in[i] = 1;
            self(self, i + 1);
            in[i] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

NType ntype_of(const KripkeModel& k, unsigned n, const AtomSet& atoms) {
    TypeTable table(atoms);
    return table.value(table.type_of(k, n));
}

bool leq_n(const KripkeModel& k1, const KripkeModel& k2, unsigned n, const AtomSet& atoms) {
    TypeTable table(atoms);
    return table.leq(table.type_of(k1, n), table.type_of(k2, n));
}

bool sim_n(const KripkeModel& k1, const KripkeModel& k2, unsigned n, const AtomSet& atoms) {
    TypeTable table(atoms);
    return table.type_of(k1, n) == table.type_of(k2, n);
}

Formula chi(const KripkeModel& k, unsigned n, const AtomSet& atoms, std::size_t budget) {
    TypeTable table(atoms, budget);
    return table.chi(table.type_of(k, n));
}

Formula closure_formula(const std::vector<KripkeModel>& models, unsigned n, const AtomSet& atoms,
                        std::size_t budget) {
    TypeTable table(atoms, budget);
    std::vector<Formula> alts;
    for (const auto& k : models) alts.push_back(table.chi(table.type_of(k, n)));
    return Formula::disj(alts);
}

std::vector<Formula> enumerate_bounded_formulas(const AtomSet& atoms, unsigned n, std::size_t budget) {
    TypeTable table(atoms, budget);
    const std::vector<int> u = table.universe(n);
    std::vector<Formula> out;
    for (const auto& d : downsets(table, u, budget)) out.push_back(table.downset_formula(d, n));
    return out;
}

}  // namespace relunif

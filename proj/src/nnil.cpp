#include "relunif/nnil.hpp"

#include <algorithm>
#include <climits>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "relunif/errors.hpp"
#include "relunif/operators.hpp"
#include "relunif/prover.hpp"
#include "relunif/substitution.hpp"
#include "relunif/syntax.hpp"

namespace relunif {

std::optional<Formula> RepSet::find(const Signature& s) const {
    auto it = index.find(s);
    if (it == index.end()) return std::nullopt;
    return reps[it->second];
}

Signature RepSet::meet(const Signature& a, const Signature& b) const {
    Signature out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
    return out;
}

Signature RepSet::join(const Signature& a, const Signature& b) const {
    Signature out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] | b[i];
    return out;
}

RepSet enumerate_nnil(const AtomSet& atoms, std::size_t budget) {
    TypeTable table(atoms, budget);
    const unsigned n = static_cast<unsigned>(atoms.size());
    const std::vector<int> universe = table.universe(n);
    const std::size_t words = (universe.size() + 63) / 64;
    auto signature = [&](Formula f) {
        Signature s(words, 0);
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (table.forces(universe[i], f)) s[i >> 6] |= 1ULL << (i & 63);
        return s;
    };

    RepSet out;
    out.atoms = atoms;
    auto add = [&](Formula f, Signature s) {
        if (out.index.count(s)) return;
        if (out.reps.size() >= budget)
            throw BudgetExceeded("more than " + std::to_string(budget) + " NNIL classes over " + print(atoms));
        out.index.emplace(s, static_cast<int>(out.reps.size()));
        out.reps.push_back(f);
        out.sigs.push_back(std::move(s));
    };

    add(Formula::bot(), signature(Formula::bot()));
    add(Formula::top(), signature(Formula::top()));
    for (Atom a : atoms) add(Formula::atom(a), signature(Formula::atom(a)));
    for (Atom a : atoms) {
        AtomSet rest = atoms;
        rest.erase(a);
        for (Formula e : nnil_reps(rest).reps) {
            Formula f = simplify(Formula::imp(Formula::atom(a), e));
            add(f, signature(f));
        }
    }
    for (std::size_t i = 0; i < out.reps.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            Formula a = out.reps[j], b = out.reps[i];
            Signature m = out.meet(out.sigs[j], out.sigs[i]);
            if (!out.index.count(m)) add(simplify(Formula::conj(a, b)), std::move(m));
            Signature u = out.join(out.sigs[j], out.sigs[i]);
            if (!out.index.count(u)) add(simplify(Formula::disj(a, b)), std::move(u));
        }
    }

    std::vector<std::size_t> order(out.reps.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<std::uint64_t> size(order.size());
    std::vector<std::string> text(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        size[i] = connective_count(out.reps[i]);
        text[i] = print(out.reps[i]);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(size[a], text[a]) < std::tie(size[b], text[b]);
    });
    RepSet sorted;
    sorted.atoms = atoms;
    for (std::size_t i : order) {
        sorted.index.emplace(out.sigs[i], static_cast<int>(sorted.reps.size()));
        sorted.reps.push_back(out.reps[i]);
        sorted.sigs.push_back(out.sigs[i]);
    }
    return sorted;
}

const RepSet& nnil_reps(const AtomSet& atoms) {
    static std::recursive_mutex mu;
    static std::map<AtomSet, std::unique_ptr<RepSet>> cache;
    static const bool hooked = [] {
        on_formula_truncate([](std::uint32_t mark) {
            std::lock_guard lock(mu);
            std::erase_if(cache, [mark](const auto& kv) {
                return std::any_of(kv.second->reps.begin(), kv.second->reps.end(),
                                   [mark](Formula f) { return f.id() >= mark; });
            });
        });
        return true;
    }();
    (void)hooked;
    std::lock_guard lock(mu);
    auto it = cache.find(atoms);
    if (it != cache.end()) return *it->second;
    auto rs = std::make_unique<RepSet>(enumerate_nnil(atoms));
    return *cache.emplace(atoms, std::move(rs)).first->second;
}

// ---------------------------------------------------------------------------
// A★

namespace {

constexpr std::size_t kStarDepthLimit = 4000;
constexpr std::size_t kStarStepLimit = 200000;

// Splits the first occurrence of a `k` node reachable through ∧/∨ only.
std::optional<std::pair<Formula, Formula>> split_outer(Formula f, Kind k) {
    if (f.kind() == k) return std::make_pair(f.lhs(), f.rhs());
    if (!f.is_and() && !f.is_or()) return std::nullopt;
    auto rebuild = [&](Formula l, Formula r) { return f.is_and() ? Formula::conj(l, r) : Formula::disj(l, r); };
    if (auto s = split_outer(f.lhs(), k)) return std::make_pair(rebuild(s->first, f.rhs()), rebuild(s->second, f.rhs()));
    if (auto s = split_outer(f.rhs(), k)) return std::make_pair(rebuild(f.lhs(), s->first), rebuild(f.lhs(), s->second));
    return std::nullopt;
}

Formula conj_without(const std::vector<Formula>& xs, std::size_t skip) {
    std::vector<Formula> rest;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (i != skip) rest.push_back(xs[i]);
    return Formula::conj(rest);
}

// (⋀rest → c), where an empty conjunction leaves c alone.
Formula imp_rest(const std::vector<Formula>& bs, std::size_t skip, Formula c) {
    if (bs.size() == 1) return c;
    return Formula::imp(conj_without(bs, skip), c);
}

class StarEval {
public:
    explicit StarEval(StarTrace* trace) : trace_(trace) {}

    Formula run(Formula a) { return eval(a).first; }

private:
    using Result = std::pair<Formula, std::size_t>;  // value, shallowest guarded stack depth
    static constexpr std::size_t kNone = SIZE_MAX;

    Result eval(Formula a) {
        a = simplify(a);
        if (trace_) ++trace_->calls;
        if (auto it = cache_.find(a); it != cache_.end()) return {it->second, kNone};
        if (auto it = on_stack_.find(a); it != on_stack_.end()) {
            if (trace_) ++trace_->guard_hits;
            return {Formula::bot(), it->second};
        }
        const std::size_t depth = on_stack_.size();
        if (depth > kStarDepthLimit) throw BudgetExceeded("star recursion exceeded its depth limit");
        if (++steps_ > kStarStepLimit) throw BudgetExceeded("star recursion exceeded its step limit");
        on_stack_.emplace(a, depth);
        Result r = step(a);
        on_stack_.erase(a);
        if (r.second >= depth) {
            cache_.emplace(a, r.first);
            r.second = kNone;
        }
        return r;
    }

    static Result both(Result l, Result r, bool conj) {
        Formula f = conj ? Formula::conj(l.first, r.first) : Formula::disj(l.first, r.first);
        return {f, std::min(l.second, r.second)};
    }

    Result step(Formula a) {
        switch (a.kind()) {
            case Kind::Bot:
            case Kind::Var:
                return {Formula::bot(), kNone};
            case Kind::Par:
                return {a, kNone};
            case Kind::And:
                return both(eval(a.lhs()), eval(a.rhs()), true);
            case Kind::Or:
                return both(eval(a.lhs()), eval(a.rhs()), false);
            case Kind::Imp:
                break;
        }
        const Formula b = a.lhs(), c = a.rhs();
        if (c.is_imp()) return eval(Formula::imp(Formula::conj(b, c.lhs()), c.rhs()));
        if (auto s = split_outer(b, Kind::Or))
            return both(eval(Formula::imp(s->first, c)), eval(Formula::imp(s->second, c)), true);
        if (auto s = split_outer(c, Kind::And))
            return both(eval(Formula::imp(b, s->first)), eval(Formula::imp(b, s->second)), true);

        const std::vector<Formula> bs = conjuncts(b);
        for (std::size_t i = 0; i < bs.size(); ++i)
            if (bs[i].is_top()) return eval(imp_rest(bs, i, c));
        for (Formula bi : bs)
            if (bi.is_bot()) return {Formula::top(), kNone};
        for (Formula bi : bs)
            if (bi.is_var()) {
                Substitution theta;
                theta.bind(bi.atom(), Formula::top());
                return eval(theta(a));
            }
        for (std::size_t i = 0; i < bs.size(); ++i)
            if (bs[i].is_par()) {
                Result r = eval(imp_rest(bs, i, c));
                return {Formula::imp(bs[i], r.first), r.second};
            }
        // Every conjunct of b is an implication E_i → F_i.
        std::vector<Formula> a1, alts;
        for (Formula bi : bs) a1.push_back(Formula::imp(drop(b, bi.lhs()), c));
        for (Formula bi : bs) alts.push_back(itapp(b, bi.lhs()));
        for (Formula e : disjuncts(c)) alts.push_back(itapp(b, e));
        return eval(Formula::conj(Formula::conj(a1), Formula::disj(alts)));
    }

    StarTrace* trace_;
    std::size_t steps_ = 0;
    std::unordered_map<Formula, Formula> cache_;
    std::unordered_map<Formula, std::size_t> on_stack_;
};

}  // namespace

Formula star_raw(Formula a, StarTrace* trace) { return StarEval(trace).run(a); }

Formula star(Formula a, const AtomSet& par) {
    StarTrace trace;
    std::optional<Formula> raw;
    try {
        raw = simplify(star_raw(a, &trace));
        if (trace.guard_hits == 0) return *raw;
    } catch (const BudgetExceeded&) {
    }
    try {
        return star_semantic(a, par);
    } catch (const BudgetExceeded&) {
        if (!raw) throw;
        return *raw;
    }
}

Formula star_semantic(Formula a, const AtomSet& par) {
    const AtomSet p = par.params().unite(atoms_of(a).params());
    const RepSet& rs = nnil_reps(p);
    Signature acc(rs.sigs.empty() ? 0 : rs.sigs[0].size(), 0);
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (provable({rs.reps[i]}, a)) acc = rs.join(acc, rs.sigs[i]);
    if (auto f = rs.find(acc)) return *f;
    // ∨-closure makes this unreachable; keep a correct answer regardless.
    std::vector<Formula> alts;
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (provable({rs.reps[i]}, a)) alts.push_back(rs.reps[i]);
    return simplify(Formula::disj(alts));
}

StarCheck star_checked(Formula a, const AtomSet& par) {
    StarTrace trace;
    StarCheck out;
    out.syntactic = simplify(star_raw(a, &trace));
    out.semantic = star_semantic(a, par);
    out.guarded = trace.guard_hits > 0;
    out.agrees = equiv(out.syntactic, out.semantic);
    return out;
}

// ---------------------------------------------------------------------------
// Components

namespace {

struct Disjunct {
    std::vector<Atom> atoms;
    std::vector<std::pair<Atom, Formula>> imps;  // a → F
};

Formula disjunct_formula(const Disjunct& d) {
    std::vector<Formula> xs;
    for (Atom a : d.atoms) xs.push_back(Formula::atom(a));
    for (const auto& [a, f] : d.imps) xs.push_back(Formula::imp(Formula::atom(a), f));
    return Formula::conj(xs);
}

std::vector<Disjunct> product(const std::vector<Disjunct>& l, const std::vector<Disjunct>& r) {
    std::vector<Disjunct> out;
    for (const auto& x : l)
        for (const auto& y : r) {
            Disjunct d = x;
            for (Atom a : y.atoms)
                if (std::find(d.atoms.begin(), d.atoms.end(), a) == d.atoms.end()) d.atoms.push_back(a);
            for (const auto& i : y.imps)
                if (std::find(d.imps.begin(), d.imps.end(), i) == d.imps.end()) d.imps.push_back(i);
            out.push_back(std::move(d));
        }
    return out;
}

// Atom sets whose disjunction of conjunctions is equivalent to the NI formula b.
std::vector<std::vector<Atom>> ni_dnf(Formula b) {
    switch (b.kind()) {
        case Kind::Bot:
            return {};
        case Kind::Var:
        case Kind::Par:
            return {{b.atom()}};
        case Kind::Or: {
            auto l = ni_dnf(b.lhs());
            auto r = ni_dnf(b.rhs());
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        case Kind::And: {
            std::vector<std::vector<Atom>> out;
            for (const auto& x : ni_dnf(b.lhs()))
                for (const auto& y : ni_dnf(b.rhs())) {
                    auto z = x;
                    z.insert(z.end(), y.begin(), y.end());
                    out.push_back(std::move(z));
                }
            return out;
        }
        case Kind::Imp:
            break;
    }
    if (b.is_top()) return {{}};
    throw UnsupportedInput("antecedent is not implication-free: " + print(b));
}

std::vector<Disjunct> dnf(Formula f);

// s_1 → (s_2 → … → c) with E → (F ∧ G) split into two implications.
std::vector<Disjunct> curried(const std::vector<Atom>& s, std::size_t i, Formula c) {
    if (i == s.size()) return dnf(c);
    if (c.is_and()) return product(curried(s, i, c.lhs()), curried(s, i, c.rhs()));
    Formula rest = c;
    for (std::size_t j = s.size(); j-- > i + 1;) rest = Formula::imp(Formula::atom(s[j]), rest);
    rest = simplify(rest);
    if (rest.is_top()) return {Disjunct{}};
    Disjunct d;
    d.imps.emplace_back(s[i], rest);
    return {d};
}

std::vector<Disjunct> dnf(Formula f) {
    switch (f.kind()) {
        case Kind::Bot:
            return {};
        case Kind::Var:
        case Kind::Par:
            return {Disjunct{{f.atom()}, {}}};
        case Kind::And:
            return product(dnf(f.lhs()), dnf(f.rhs()));
        case Kind::Or: {
            auto l = dnf(f.lhs());
            auto r = dnf(f.rhs());
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        case Kind::Imp:
            break;
    }
    std::vector<Disjunct> acc{Disjunct{}};
    for (const auto& s : ni_dnf(f.lhs())) acc = product(acc, curried(s, 0, f.rhs()));
    return acc;
}

std::vector<Formula> decompose_under(Formula f, const AtomSet& theory) {
    std::vector<Formula> out;
    for (const Disjunct& d : dnf(f)) {
        std::optional<Atom> hit;
        for (const auto& [e, g] : d.imps) {
            if (theory.contains(e) || std::find(d.atoms.begin(), d.atoms.end(), e) != d.atoms.end()) {
                hit = e;
                break;
            }
        }
        if (!hit) {
            out.push_back(disjunct_formula(d));
            continue;
        }
        Substitution theta = Substitution::general();
        theta.bind(*hit, Formula::top());
        AtomSet t2 = theory;
        t2.insert(*hit);
        for (Formula g : decompose_under(simplify(theta(disjunct_formula(d))), t2))
            out.push_back(simplify(Formula::conj(Formula::atom(*hit), g)));
    }
    return out;
}

}  // namespace

std::vector<Formula> decompose_components(Formula a) {
    if (!is_nnil(a)) throw UnsupportedInput("not an NNIL formula: " + print(a));
    std::vector<Formula> out;
    for (Formula c : decompose_under(simplify(a), {}))
        if (!c.is_bot() && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    if (out.empty()) out.push_back(Formula::bot());
    return out;
}

bool is_component(Formula a) {
    std::vector<Formula> xs = conjuncts(a);
    std::vector<Atom> atoms;
    for (Formula x : xs)
        if (x.is_atom()) atoms.push_back(x.atom());
    for (Formula x : xs) {
        if (x.is_atom() || x.is_bot() || x.is_top()) continue;
        if (!x.is_imp() || !x.lhs().is_atom()) return false;
        if (std::find(atoms.begin(), atoms.end(), x.lhs().atom()) != atoms.end()) return false;
    }
    return true;
}

bool is_prime_nnil(Formula a) {
    for (Formula c : decompose_components(a))
        if (provable({a}, c)) return true;
    return false;
}

bool is_prime(Formula a) {
    if (!is_nnil(a)) throw UnsupportedInput("primality is decided for NNIL formulas only: " + print(a));
    return is_prime_nnil(a);
}

std::vector<Formula> prime_reps(const RepSet& reps) {
    std::vector<Formula> out;
    for (Formula f : reps.reps)
        if (is_prime_nnil(f)) out.push_back(f);
    return out;
}

}  // namespace relunif

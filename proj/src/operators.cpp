#include "relunif/operators.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace relunif {

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

template <class T, class Leaf, class Node>
T fold(Formula f, Leaf leaf, Node node) {
    std::unordered_map<Formula, T> memo;
    for (Formula g : subformulas(f)) {
        if (g.is_bot() || g.is_atom())
            memo.emplace(g, leaf(g));
        else
            memo.emplace(g, node(g, memo.at(g.lhs()), memo.at(g.rhs())));
    }
    return memo.at(f);
}

}  // namespace

bool is_ni(Formula f) {
    return fold<bool>(
        f, [](Formula) { return true; },
        [](Formula g, bool l, bool r) { return !g.is_imp() && l && r; });
}

bool is_nnil(Formula f) {
    // Pair: (nnil, ni)
    using P = std::pair<bool, bool>;
    return fold<P>(
               f, [](Formula) { return P{true, true}; },
               [](Formula g, P l, P r) {
                   if (g.is_imp()) return P{l.second && r.first, false};
                   return P{l.first && r.first, l.second && r.second};
               })
        .first;
}

bool is_param_nnil(Formula f) { return is_nnil(f) && atoms_of(f).vars().empty(); }

unsigned c_arrow(Formula f) {
    return fold<unsigned>(
        f, [](Formula) { return 0u; },
        [](Formula g, unsigned l, unsigned r) {
            if (g.is_top()) return 0u;
            return std::max(l, r) + (g.is_imp() ? 1u : 0u);
        });
}

std::uint64_t connective_count(Formula f) {
    return fold<std::uint64_t>(
        f, [](Formula g) -> std::uint64_t { return g.is_bot() ? 1 : 0; },
        [](Formula, std::uint64_t l, std::uint64_t r) { return sat_add(sat_add(l, r), 1); });
}

std::uint64_t var_occurrences(Formula f) {
    return fold<std::uint64_t>(
        f, [](Formula g) -> std::uint64_t { return g.is_var() ? 1 : 0; },
        [](Formula, std::uint64_t l, std::uint64_t r) { return sat_add(l, r); });
}

std::uint64_t i_measure(Formula f) {
    std::unordered_map<Formula, std::unordered_set<std::uint32_t>> imps;
    std::uint64_t best = 0;
    for (Formula g : subformulas(f)) {
        auto& s = imps[g];
        if (g.is_bot() || g.is_atom()) continue;
        const auto& l = imps.at(g.lhs());
        const auto& r = imps.at(g.rhs());
        s.insert(l.begin(), l.end());
        s.insert(r.begin(), r.end());
        if (g.is_imp()) {
            s.insert(g.id());
            best = std::max<std::uint64_t>(best, s.size());
        }
    }
    return best;
}

Omega omega(Formula f) { return {i_measure(f), connective_count(f), var_occurrences(f)}; }

Classification classify(Formula f) { return {is_nnil(f), is_ni(f), c_arrow(f), omega(f)}; }

Formula itp(Formula b, Formula e) {
    if (e.is_par() || e.is_bot()) return e;
    return Formula::imp(b, e);
}

Formula itap(Formula a, Formula b) {
    switch (b.kind()) {
        case Kind::Bot:
        case Kind::Par:
            return b;
        case Kind::Var:
            return Formula::imp(a, b);
        case Kind::And:
            return Formula::conj(itap(a, b.lhs()), itap(a, b.rhs()));
        case Kind::Or:
            return Formula::disj(itap(a, b.lhs()), itap(a, b.rhs()));
        case Kind::Imp:
            return Formula::imp(drop(a, b.lhs()), b);
    }
    return b;
}

Formula itapp(Formula a, Formula b) {
    if (b.is_var()) return Formula::neg(a);
    return itap(a, b);
}

Formula drop(Formula a, Formula c) {
    std::unordered_map<Formula, Formula> memo;
    auto go = [&](auto&& self, Formula g) -> Formula {
        if (g.is_bot() || g.is_atom()) return g;
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        Formula l = self(self, g.lhs());
        Formula r = self(self, g.rhs());
        Formula out;
        if (g.is_and())
            out = Formula::conj(l, r);
        else if (g.is_or())
            out = Formula::disj(l, r);
        else if (l == c)
            out = r;
        else
            out = Formula::imp(l, r);
        memo.emplace(g, out);
        return out;
    };
    return go(go, a);
}

Formula simplify(Formula f) {
    std::unordered_map<Formula, Formula> memo;
    for (Formula g : subformulas(f)) {
        if (g.is_bot() || g.is_atom()) {
            memo.emplace(g, g);
            continue;
        }
        Formula l = memo.at(g.lhs());
        Formula r = memo.at(g.rhs());
        Formula out;
        if (g.is_and()) {
            if (l.is_bot() || r.is_bot())
                out = Formula::bot();
            else if (l.is_top())
                out = r;
            else if (r.is_top() || l == r)
                out = l;
            else
                out = Formula::conj(l, r);
        } else if (g.is_or()) {
            if (l.is_top() || r.is_top())
                out = Formula::top();
            else if (l.is_bot())
                out = r;
            else if (r.is_bot() || l == r)
                out = l;
            else
                out = Formula::disj(l, r);
        } else {
            if (l.is_bot() || r.is_top() || l == r)
                out = Formula::top();
            else if (l.is_top())
                out = r;
            else
                out = Formula::imp(l, r);
        }
        memo.emplace(g, out);
    }
    return memo.at(f);
}

}  // namespace relunif

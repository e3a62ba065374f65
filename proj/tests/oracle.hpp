#pragma once

// Naive reference implementations used only by the tests. They share nothing with the
// library beyond the Formula type.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "relunif/formula.hpp"
#include "relunif/kripke.hpp"

namespace oracle {

using relunif::Atom;
using relunif::Formula;
using relunif::Kind;

// Tree with parent[i] < i for i > 0, valuations as sets of atoms.
struct Tree {
    std::vector<int> parent;
    std::vector<std::vector<Atom>> val;

    bool above(int w, int u) const {  // w ≼ u
        while (u > w) u = parent[u];
        return u == w;
    }
    bool has(int w, Atom a) const {
        for (Atom b : val[w])
            if (b == a) return true;
        return false;
    }
};

inline bool force(const Tree& t, int w, Formula f) {
    switch (f.kind()) {
        case Kind::Bot: return false;
        case Kind::Var:
        case Kind::Par: return t.has(w, f.atom());
        case Kind::And: return force(t, w, f.lhs()) && force(t, w, f.rhs());
        case Kind::Or: return force(t, w, f.lhs()) || force(t, w, f.rhs());
        case Kind::Imp:
            for (int u = w; u < static_cast<int>(t.parent.size()); ++u)
                if (t.above(w, u) && force(t, u, f.lhs()) && !force(t, u, f.rhs())) return false;
            return true;
    }
    return false;
}

inline Tree from_model(const relunif::KripkeModel& k) {
    Tree t;
    for (std::size_t i = 0; i < k.size(); ++i) {
        t.parent.push_back(k.parent(static_cast<int>(i)));
        t.val.emplace_back(k.valuation(static_cast<int>(i)).items());
    }
    return t;
}

inline relunif::KripkeModel to_model(const Tree& t) {
    std::vector<relunif::AtomSet> v;
    for (const auto& s : t.val) v.emplace_back(s);
    return relunif::KripkeModel::from_parents(t.parent, v);
}

// Every tree (as parent arrays, not up to isomorphism) with at most max_nodes nodes and
// monotone valuations over atoms.
inline std::vector<Tree> all_trees(const std::vector<Atom>& atoms, int max_nodes) {
    std::vector<Tree> out;
    const unsigned full = 1u << atoms.size();
    std::vector<std::vector<int>> frames;
    std::function<void(std::vector<int>&, int)> grow = [&](std::vector<int>& p, int n) {
        frames.push_back(p);
        if (n == max_nodes) return;
        for (int q = 0; q < n; ++q) {
            // Breadth-first numbering: parents are non-decreasing.
            if (!p.empty() && p.back() > q) continue;
            p.push_back(q);
            grow(p, n + 1);
            p.pop_back();
        }
    };
    std::vector<int> root{-1};
    grow(root, 1);
    for (const auto& p : frames) {
        std::vector<unsigned> masks(p.size(), 0);
        std::function<void(std::size_t)> label = [&](std::size_t i) {
            if (i == p.size()) {
                Tree t;
                t.parent = p;
                for (unsigned m : masks) {
                    std::vector<Atom> s;
                    for (std::size_t b = 0; b < atoms.size(); ++b)
                        if (m >> b & 1u) s.push_back(atoms[b]);
                    t.val.push_back(s);
                }
                out.push_back(std::move(t));
                return;
            }
            for (unsigned m = 0; m < full; ++m) {
                if (i > 0 && (masks[p[i]] & ~m)) continue;
                masks[i] = m;
                label(i + 1);
            }
        };
        label(0);
    }
    return out;
}

inline std::vector<Formula> all_formulas(const std::vector<Formula>& leaves, unsigned max_size) {
    std::vector<std::vector<Formula>> by(max_size + 1);
    by[0] = leaves;
    if (max_size >= 1) by[1].push_back(Formula::bot());
    for (unsigned s = 1; s <= max_size; ++s)
        for (unsigned l = 0; l + 1 <= s; ++l) {
            const unsigned r = s - 1 - l;
            for (Formula a : by[l])
                for (Formula b : by[r]) {
                    by[s].push_back(Formula::conj(a, b));
                    by[s].push_back(Formula::disj(a, b));
                    by[s].push_back(Formula::imp(a, b));
                }
        }
    std::vector<Formula> out;
    for (const auto& v : by) out.insert(out.end(), v.begin(), v.end());
    return out;
}

inline Formula random_formula(std::mt19937_64& rng, const std::vector<Formula>& leaves, int depth) {
    std::uniform_int_distribution<int> pick(0, 9);
    const int r = pick(rng);
    if (depth == 0 || r < 3) {
        if (r == 0) return Formula::bot();
        return leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
    }
    Formula a = random_formula(rng, leaves, depth - 1), b = random_formula(rng, leaves, depth - 1);
    if (r < 5) return Formula::conj(a, b);
    if (r < 7) return Formula::disj(a, b);
    return Formula::imp(a, b);
}

// Brute-force validity over every tree with at most max_nodes nodes.
inline bool valid_on(const std::vector<Tree>& trees, Formula f) {
    for (const auto& t : trees)
        if (!force(t, 0, f)) return false;
    return true;
}

// Direct reading of the recursive definitions on node pairs.
inline bool same_atoms(const oracle::Tree& a, int w, const oracle::Tree& b, int u, const std::vector<Atom>& atoms) {
    for (Atom q : atoms)
        if (a.has(w, q) != b.has(u, q)) return false;
    return true;
}

inline bool sim(const oracle::Tree& a, int w, const oracle::Tree& b, int u, unsigned n, const std::vector<Atom>& atoms) {
    if (n == 0) return same_atoms(a, w, b, u, atoms);
    auto half = [&](const oracle::Tree& s, int sw, const oracle::Tree& t, int tu, bool flip) {
        for (int v = sw; v < static_cast<int>(s.parent.size()); ++v) {
            if (!s.above(sw, v)) continue;
            bool found = false;
            for (int v2 = tu; v2 < static_cast<int>(t.parent.size()) && !found; ++v2)
                if (t.above(tu, v2)) found = flip ? sim(t, v2, s, v, n - 1, atoms) : sim(s, v, t, v2, n - 1, atoms);
            if (!found) return false;
        }
        return true;
    };
    return half(a, w, b, u, false) && half(b, u, a, w, true);
}

inline bool leq(const oracle::Tree& a, const oracle::Tree& b, unsigned n, const std::vector<Atom>& atoms) {
    if (n == 0) {
        for (Atom q : atoms)
            if (b.has(0, q) && !a.has(0, q)) return false;
        return true;
    }
    for (int v = 0; v < static_cast<int>(a.parent.size()); ++v) {
        bool found = false;
        for (int v2 = 0; v2 < static_cast<int>(b.parent.size()) && !found; ++v2) found = sim(a, v, b, v2, n - 1, atoms);
        if (!found) return false;
    }
    return true;
}

}  // namespace oracle

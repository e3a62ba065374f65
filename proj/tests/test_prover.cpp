#include <doctest.h>

#include "oracle.hpp"
#include "relunif/errors.hpp"
#include "relunif/prover.hpp"
#include "relunif/syntax.hpp"

using namespace relunif;

namespace {
Formula P(const char* s) { return parse(s); }

const std::vector<oracle::Tree>& trees_xy3() {
    static const auto t = oracle::all_trees({Atom::var("x"), Atom::var("y")}, 3);
    return t;
}

bool classical(Formula f, unsigned mask, const std::vector<Atom>& atoms) {
    switch (f.kind()) {
        case Kind::Bot: return false;
        case Kind::Var:
        case Kind::Par:
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (atoms[i] == f.atom()) return mask >> i & 1u;
            return false;
        case Kind::And: return classical(f.lhs(), mask, atoms) && classical(f.rhs(), mask, atoms);
        case Kind::Or: return classical(f.lhs(), mask, atoms) || classical(f.rhs(), mask, atoms);
        case Kind::Imp: return !classical(f.lhs(), mask, atoms) || classical(f.rhs(), mask, atoms);
    }
    return false;
}
}  // namespace

TEST_CASE("prove anchors") {
    CHECK(prove(P("x -> x")).theorem);
    auto r = prove(P("x | ~x"));
    REQUIRE_FALSE(r.theorem);
    REQUIRE(r.countermodel);
    CHECK(r.countermodel->size() == 2);
    CHECK(r.countermodel->valuation(0).empty());
    CHECK(r.countermodel->valuation(1) == AtomSet{Atom::var("x")});
    CHECK_FALSE(oracle::force(oracle::from_model(*r.countermodel), 0, P("x | ~x")));
    CHECK(prove(P("~~(x | ~x)")).theorem);
    CHECK_FALSE(prove(P("~~x -> x")).theorem);
    CHECK(prove(P("((x -> y) -> x) -> ~~x")).theorem);
    CHECK_FALSE(prove(P("((x -> y) -> x) -> x")).theorem);
}

TEST_CASE("equiv anchors") {
    CHECK(equiv(P("~x -> x"), P("~~x")));
    CHECK_FALSE(equiv(P("x"), P("y")));
    CHECK(equiv(Formula::top(), P("false -> false")));
}

TEST_CASE("assumptions") {
    CHECK(provable({P("x"), P("x -> y")}, P("y")));
    auto r = prove({P("~~x")}, P("x"));
    REQUIRE_FALSE(r.theorem);
    auto t = oracle::from_model(*r.countermodel);
    CHECK(oracle::force(t, 0, P("~~x")));
    CHECK_FALSE(oracle::force(t, 0, P("x")));
}

TEST_CASE("is_prime") {
    CHECK(is_prime(P("x")));
    CHECK_FALSE(is_prime(P("x | y")));
    CHECK(is_prime(P("x & (y -> z)")));
    CHECK_THROWS_AS(is_prime(P("~~x")), UnsupportedInput);
}

TEST_CASE("prover agrees with brute-force forcing on all formulas over {x,y} up to size 4") {
    const auto fs = oracle::all_formulas({Formula::var("x"), Formula::var("y")}, 4);
    const auto& trees = trees_xy3();
    for (Formula f : fs) {
        auto r = prove(f);
        if (r.theorem) {
            CHECK(oracle::valid_on(trees, f));
        } else {
            REQUIRE(r.countermodel);
            CHECK_FALSE(oracle::force(oracle::from_model(*r.countermodel), 0, f));
        }
    }
}

TEST_CASE("Glivenko: ~~A is a theorem iff A is a classical tautology") {
    std::mt19937_64 rng(5);
    const std::vector<Atom> atoms{Atom::var("x"), Atom::var("y"), Atom::par("p")};
    const std::vector<Formula> leaves{Formula::var("x"), Formula::var("y"), Formula::par("p")};
    for (int i = 0; i < 400; ++i) {
        Formula f = oracle::random_formula(rng, leaves, 5);
        bool taut = true;
        for (unsigned m = 0; m < 8; ++m) taut = taut && classical(f, m, atoms);
        CHECK(provable(Formula::neg(Formula::neg(f))) == taut);
        if (provable(f)) CHECK(taut);
    }
}

TEST_CASE("cached and uncached searches agree") {
    std::mt19937_64 rng(9);
    const std::vector<Formula> leaves{Formula::var("x"), Formula::var("y"), Formula::var("z")};
    for (int i = 0; i < 300; ++i) {
        Formula a = oracle::random_formula(rng, leaves, 4), b = oracle::random_formula(rng, leaves, 4);
        CHECK(prove_uncached({a}, b).theorem == provable({a}, b));
    }
}

TEST_CASE("countermodels are valid models that refute the goal") {
    std::mt19937_64 rng(13);
    const std::vector<Formula> leaves{Formula::var("x"), Formula::var("y"), Formula::par("p")};
    for (int i = 0; i < 400; ++i) {
        Formula a = oracle::random_formula(rng, leaves, 4), b = oracle::random_formula(rng, leaves, 4);
        auto r = prove({a}, b);
        if (r.theorem) continue;
        REQUIRE(r.countermodel);
        auto t = oracle::from_model(*r.countermodel);
        for (std::size_t w = 1; w < t.parent.size(); ++w)
            for (Atom q : t.val[t.parent[w]]) CHECK(t.has(static_cast<int>(w), q));
        CHECK(oracle::force(t, 0, a));
        CHECK_FALSE(oracle::force(t, 0, b));
        CHECK(model_from_json(model_to_json(*r.countermodel)) == *r.countermodel);
    }
}

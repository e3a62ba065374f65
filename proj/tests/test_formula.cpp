#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "relunif/enumerate.hpp"
#include "relunif/errors.hpp"
#include "relunif/operators.hpp"
#include "relunif/prover.hpp"
#include "relunif/substitution.hpp"
#include "relunif/syntax.hpp"

using namespace relunif;

namespace {
Formula P(const char* s) { return parse(s); }
Formula x() { return Formula::var("x"); }
Formula y() { return Formula::var("y"); }
Formula z() { return Formula::var("z"); }
Formula p() { return Formula::par("p"); }
}  // namespace

TEST_CASE("parse builds the expected trees") {
    CHECK(P("x -> #p") == Formula::imp(x(), p()));
    CHECK(P("~x") == Formula::imp(x(), Formula::bot()));
    CHECK(P("x | y -> z") == Formula::imp(Formula::disj(x(), y()), z()));
    CHECK(P("x -> y -> z") == Formula::imp(x(), Formula::imp(y(), z())));
    CHECK(P("x & y & z") == Formula::conj(Formula::conj(x(), y()), z()));
    CHECK(P("true") == Formula::imp(Formula::bot(), Formula::bot()));
    CHECK(P("~x & y") == Formula::conj(Formula::neg(x()), y()));
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(P("x &"), ParseError);
    CHECK_THROWS_AS(P("(x"), ParseError);
    CHECK_THROWS_AS(P("#"), ParseError);
    CHECK_THROWS_AS(P("X"), ParseError);
    CHECK_THROWS_AS(P(""), ParseError);
}

TEST_CASE("variables and parameters are distinct atoms") {
    CHECK(Formula::var("p") != Formula::par("p"));
    CHECK(atoms_of(Formula::conj(Formula::var("p"), p())).size() == 2);
    CHECK_THROWS_AS(P("p & #p"), ParseError);
}

TEST_CASE("print and parse round-trip") {
    std::mt19937_64 rng(7);
    const std::vector<Formula> leaves{x(), y(), p()};
    for (int i = 0; i < 2000; ++i) {
        Formula f = oracle::random_formula(rng, leaves, 5);
        CHECK(parse(print(f)) == f);
    }
    CHECK(print(P("(x -> y) -> z")) == "(x -> y) -> z");
    CHECK(print(P("~~x")) == "~~x");
    CHECK(print(Formula::top()) == "true");
}

TEST_CASE("substitution") {
    Substitution th;
    th.bind("x", Formula::top());
    CHECK(th(P("x & #p")) == Formula::conj(Formula::top(), p()));
    CHECK(Substitution{}(P("x -> y | #p")) == P("x -> y | #p"));
    Substitution s;
    s.bind("x", P("y | z"));
    CHECK(s(P("x -> x")) == P("(y | z) -> (y | z)"));
    CHECK_THROWS_AS(Substitution{}.bind(Atom::par("p"), x()), InputError);
    auto g = Substitution::general();
    CHECK_NOTHROW(g.bind(Atom::par("p"), Formula::top()));
    CHECK_THROWS_AS(g.bind(Atom::par("p"), x()), InputError);
}

TEST_CASE("substitution is a homomorphism and composes") {
    std::mt19937_64 rng(11);
    const std::vector<Formula> leaves{x(), y(), p()};
    for (int i = 0; i < 300; ++i) {
        Substitution a, b;
        a.bind("x", oracle::random_formula(rng, leaves, 2));
        b.bind("y", oracle::random_formula(rng, leaves, 2));
        b.bind("x", oracle::random_formula(rng, leaves, 2));
        Formula f = oracle::random_formula(rng, leaves, 4), g = oracle::random_formula(rng, leaves, 3);
        CHECK(a(Formula::imp(f, g)) == Formula::imp(a(f), a(g)));
        CHECK(a(Formula::bot()) == Formula::bot());
        CHECK(a(p()) == p());
        CHECK(Substitution::compose(a, b)(f) == a(b(f)));
    }
}

TEST_CASE("classify") {
    auto c = classify(P("x & (y -> z)"));
    CHECK(c.is_nnil);
    CHECK(c.c_arrow == 1);
    CHECK_FALSE(is_nnil(P("(x -> y) -> z")));
    c = classify(P("~~x"));
    CHECK_FALSE(c.is_nnil);
    CHECK(c.c_arrow == 2);
    CHECK(is_ni(P("x | y & #p")));
    CHECK_FALSE(is_ni(P("~x")));
    CHECK(c_arrow(x()) == 0);
    CHECK(c_arrow(Formula::top()) == 0);
    CHECK(c_arrow(P("true -> x")) == 1);
    CHECK(connective_count(P("~x")) == 2);
    CHECK(connective_count(Formula::top()) == 3);
    CHECK(var_occurrences(P("x & (x -> #p)")) == 2);
}

TEST_CASE("c_arrow follows its recursion on random formulas") {
    std::mt19937_64 rng(3);
    const std::vector<Formula> leaves{x(), y()};
    std::function<unsigned(Formula)> ref = [&](Formula f) -> unsigned {
        if (f.is_bot() || f.is_atom() || f == Formula::top()) return 0;
        unsigned m = std::max(ref(f.lhs()), ref(f.rhs()));
        return f.is_imp() ? m + 1 : m;
    };
    for (int i = 0; i < 500; ++i) {
        Formula f = oracle::random_formula(rng, leaves, 6);
        CHECK(c_arrow(f) == ref(f));
    }
}

TEST_CASE("omega compares lexicographically") {
    CHECK(Omega{1, 0, 0} > Omega{0, 9, 9});
    CHECK(Omega{1, 2, 0} < Omega{1, 2, 1});
}

TEST_CASE("itp itap itapp drop") {
    const Formula b = P("x -> y");
    CHECK(itp(b, p()) == p());
    CHECK(itp(b, Formula::bot()) == Formula::bot());
    CHECK(itp(b, x()) == Formula::imp(b, x()));
    CHECK(itapp(b, x()) == Formula::neg(b));
    CHECK(itap(b, x()) == Formula::imp(b, x()));
    CHECK(itap(b, P("#p | x")) == Formula::disj(p(), Formula::imp(b, x())));
    CHECK(equiv(drop(P("x -> false"), x()), Formula::bot()));
    CHECK(equiv(drop(P("(x -> y) & z"), x()), P("y & z")));
    CHECK(drop(P("y -> z"), x()) == P("y -> z"));
}

TEST_CASE("simplify preserves equivalence, NNIL and atoms") {
    FormulaLevels levels(parse_atoms("x,#p"));
    for (unsigned s = 0; s <= 4; ++s)
        for (Formula f : levels.level(s)) {
            Formula g = simplify(f);
            CHECK(equiv(f, g));
            CHECK(atoms_of(g).subset_of(atoms_of(f)));
            if (is_nnil(f)) CHECK(is_nnil(g));
        }
}

TEST_CASE("formula levels match the independent enumeration") {
    FormulaLevels levels(parse_atoms("x,y"));
    std::size_t total = 0;
    for (unsigned s = 0; s <= 3; ++s) {
        CHECK(levels.level(s).size() == levels.count(s));
        total += levels.level(s).size();
    }
    CHECK(total == oracle::all_formulas({x(), y()}, 3).size());
}

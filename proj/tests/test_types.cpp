#include <doctest.h>

#include "oracle.hpp"
#include "relunif/errors.hpp"
#include "relunif/operators.hpp"
#include "relunif/prover.hpp"
#include "relunif/syntax.hpp"
#include "relunif/types.hpp"

using namespace relunif;

namespace {
Formula P(const char* s) { return parse(s); }
const Atom X = Atom::var("x");
const Atom Y = Atom::var("y");

KripkeModel chain(AtomSet a, AtomSet b) {
    KripkeModel k(a);
    k.add_child(0, b);
    return k;
}
}  // namespace

TEST_CASE("ntype anchors") {
    const AtomSet at{X};
    CHECK(ntype_of(KripkeModel({X}), 3, at) == ntype_of(KripkeModel({X}), 3, at));
    CHECK(ntype_of(chain({}, {X}), 1, at) != ntype_of(KripkeModel(AtomSet{}), 1, at));
    CHECK(ntype_of(chain({}, {X}), 0, at).root_atoms.empty());
    CHECK(ntype_of(chain({X}, {X}), 0, at).root_atoms == at);
    auto t = ntype_of(chain({}, {X}), 2, at);
    for (const auto& s : t.successors) CHECK(at.subset_of(s.root_atoms.unite(at)));
}

TEST_CASE("leq_n anchors") {
    const AtomSet at{X};
    for (unsigned n = 0; n <= 3; ++n) CHECK(leq_n(chain({}, {X}), chain({}, {X}), n, at));
    CHECK(leq_n(KripkeModel({X}), KripkeModel(AtomSet{}), 0, at));
    CHECK_FALSE(leq_n(KripkeModel(AtomSet{}), KripkeModel({X}), 0, at));
}

TEST_CASE("leq_n and sim_n match the definitions on models up to 3 nodes") {
    for (const auto& atoms : {std::vector<Atom>{X}, std::vector<Atom>{X, Y}}) {
        const AtomSet at(atoms);
        const auto ms = enumerate_models(at, 3);
        std::vector<oracle::Tree> ts;
        for (const auto& k : ms) ts.push_back(oracle::from_model(k));
        for (unsigned n = 0; n <= 2; ++n)
            for (std::size_t i = 0; i < ms.size(); ++i)
                for (std::size_t j = 0; j < ms.size(); ++j) {
                    CHECK(leq_n(ms[i], ms[j], n, at) == oracle::leq(ts[i], ts[j], n, atoms));
                    CHECK(sim_n(ms[i], ms[j], n, at) == oracle::sim(ts[i], 0, ts[j], 0, n, atoms));
                }
    }
}

TEST_CASE("chi anchors") {
    CHECK(chi(KripkeModel({X}), 0, AtomSet{X}) == P("x"));
    CHECK(equiv(chi(KripkeModel(AtomSet{}), 0, AtomSet{X}), Formula::top()));
}

TEST_CASE("chi characterizes the order on models up to 3 nodes") {
    const std::vector<Atom> atoms{X};
    const AtomSet at(atoms);
    const auto ms = enumerate_models(at, 3);
    for (unsigned n = 0; n <= 2; ++n)
        for (const auto& k : ms) {
            Formula c = chi(k, n, at);
            CHECK(c_arrow(c) <= n);
            const auto tk = oracle::from_model(k);
            for (const auto& k2 : ms) CHECK(oracle::force(oracle::from_model(k2), 0, c) == oracle::leq(oracle::from_model(k2), tk, n, atoms));
        }
}

TEST_CASE("leq_n agrees with bounded-depth formula transfer") {
    const AtomSet at{X};
    const auto ms = enumerate_models(at, 3);
    for (unsigned n = 0; n <= 2; ++n) {
        const auto fs = enumerate_bounded_formulas(at, n);
        for (const auto& a : ms)
            for (const auto& b : ms) {
                bool transfer = true;
                for (Formula f : fs)
                    if (forces(b, f) && !forces(a, f)) transfer = false;
                CHECK(leq_n(a, b, n, at) == transfer);
            }
    }
}

TEST_CASE("bounded enumeration") {
    auto e0 = enumerate_bounded_formulas(AtomSet{}, 2);
    CHECK(e0.size() == 2);
    auto ex0 = enumerate_bounded_formulas(AtomSet{X}, 0);
    CHECK(ex0.size() == 3);
    auto ex1 = enumerate_bounded_formulas(AtomSet{X}, 1);
    for (const char* s : {"false", "x", "~x", "x | ~x", "true"}) {
        int hits = 0;
        for (Formula f : ex1) hits += equiv(f, P(s));
        CHECK_MESSAGE(hits == 1, s);
    }
    for (std::size_t i = 0; i < ex1.size(); ++i) {
        CHECK(c_arrow(ex1[i]) <= 1);
        for (std::size_t j = i + 1; j < ex1.size(); ++j) CHECK_FALSE(equiv(ex1[i], ex1[j]));
    }
}

TEST_CASE("every formula of bounded depth has a representative") {
    const auto reps = enumerate_bounded_formulas(AtomSet{X}, 1);
    for (Formula f : oracle::all_formulas({P("x")}, 4)) {
        if (c_arrow(f) > 1) continue;
        int hits = 0;
        for (Formula r : reps) hits += equiv(f, r);
        CHECK(hits == 1);
    }
}

TEST_CASE("closure formulas") {
    CHECK(closure_formula({KripkeModel({X})}, 0, AtomSet{X}) == P("x"));
    CHECK(equiv(closure_formula({KripkeModel({X}), KripkeModel(AtomSet{})}, 0, AtomSet{X}), Formula::top()));
    const auto ms = enumerate_models(AtomSet{X, Y}, 2);
    std::vector<KripkeModel> cls(ms.begin(), ms.begin() + 4);
    for (unsigned n = 0; n <= 1; ++n) {
        Formula c = closure_formula(cls, n, AtomSet{X, Y});
        for (const auto& k : cls) CHECK(provable({chi(k, n, AtomSet{X, Y})}, c));
    }
}

TEST_CASE("type universe budget is explicit") {
    TypeTable t(AtomSet{X, Y, Atom::var("z")}, 1000);
    CHECK_THROWS_AS(t.universe(2), BudgetExceeded);
    TypeTable small(AtomSet{X});
    const auto& u = small.universe(1);
    CHECK_THROWS_AS(downsets(small, u, 1), BudgetExceeded);
}

#include <doctest.h>

#include "oracle.hpp"
#include "relunif/admissibility.hpp"
#include "relunif/errors.hpp"
#include "relunif/nnil.hpp"
#include "relunif/operators.hpp"
#include "relunif/prover.hpp"
#include "relunif/syntax.hpp"

using namespace relunif;

namespace {
Formula P(const char* s) { return parse(s); }

Derivation leaf(Rule r, const char* l, const char* rt, nlohmann::json side = nlohmann::json::object()) {
    return Derivation{P(l), P(rt), r, {}, std::move(side)};
}

// Independent check of a falsifier hit: ⊢ E → θ(a), E parameter NNIL, and the model
// forces E while refuting θ(b).
bool genuine(const AdmissibilityCounterexample& c, Formula a, Formula b) {
    auto t = oracle::from_model(c.countermodel);
    return is_param_nnil(c.premise) && provable({c.premise}, c.theta(a)) && oracle::force(t, 0, c.premise) &&
           !oracle::force(t, 0, c.theta(b));
}
}  // namespace

TEST_CASE("preservativity anchors") {
    CHECK(preserves_nnilpar(P("x"), P("y")));
    CHECK_FALSE(preserves_nnilpar(P("#p"), P("#q")));
    CHECK(preserves_nnilpar(P("~~x"), P("x")));
}

TEST_CASE("preservativity through star equals the quantified definition") {
    std::mt19937_64 rng(31);
    const std::vector<Formula> leaves{P("x"), P("y"), P("#p")};
    for (int i = 0; i < 300; ++i) {
        Formula a = oracle::random_formula(rng, leaves, 3), b = oracle::random_formula(rng, leaves, 3);
        CHECK(preserves_nnilpar(a, b) == preserves_nnilpar_by_reps(a, b));
    }
}

TEST_CASE("admissibility anchors") {
    CHECK_FALSE(admissible_nnilpar(P("x"), P("y")));
    CHECK_FALSE(admissible_nnilpar(P("x | y"), P("x")));
    CHECK(admissible_nnilpar(P("x"), P("x & (y -> y)")));
    CHECK_FALSE(admissible_nnilpar(P("~~x"), P("x")));
    CHECK_FALSE(admissible_nnilpar(P("#p"), P("#q")));
}

TEST_CASE("admissibility lies between derivability and preservativity") {
    std::mt19937_64 rng(37);
    const std::vector<Formula> leaves{P("x"), P("y")};
    for (int i = 0; i < 60; ++i) {
        Formula a = oracle::random_formula(rng, leaves, 2), b = oracle::random_formula(rng, leaves, 2);
        const bool adm = admissible_nnilpar(a, b);
        if (provable({a}, b)) CHECK(adm);
        if (adm) CHECK(preserves_nnilpar(a, b));
        if (!adm) {
            auto cx = falsify_admissible(a, b);
            if (cx) CHECK(genuine(*cx, a, b));
        } else {
            CHECK_FALSE(falsify_admissible(a, b).has_value());
        }
    }
}

TEST_CASE("derivation checker: local rules") {
    CHECK(check_derivation(leaf(Rule::Ax, "x & y", "x"), System::BAR).accepted);
    auto bad = check_derivation(leaf(Rule::Ax, "x", "x & y"), System::BAR);
    CHECK_FALSE(bad.accepted);
    CHECK(bad.node == "root");

    Derivation mont{P("x -> y"), P("x -> y | z"), Rule::MontPar, {leaf(Rule::Ax, "y", "y | z")}, {}};
    auto r = check_derivation(mont, System::ARpar);
    CHECK_FALSE(r.accepted);
    Derivation montp{P("#p -> y"), P("#p -> y | z"), Rule::MontPar, {leaf(Rule::Ax, "y", "y | z")}, {{"p", "#p"}}};
    CHECK(check_derivation(montp, System::ARpar).accepted);
    CHECK_FALSE(check_derivation(montp, System::BAR).accepted);
    Derivation montd{P("~#p -> y"), P("~#p -> y | z"), Rule::MontDelta, {leaf(Rule::Ax, "y", "y | z")}, {}};
    CHECK(check_derivation(montd, System::ARpar).accepted);

    Derivation conj{P("x & y"), P("x & y"), Rule::Conj, {leaf(Rule::Ax, "x & y", "x"), leaf(Rule::Ax, "x & y", "y")}, {}};
    CHECK(check_derivation(conj, System::BAR).accepted);
    Derivation disj{P("x | y"), P("x | y"), Rule::Disj, {leaf(Rule::Ax, "x", "x | y"), leaf(Rule::Ax, "y", "x | y")}, {}};
    CHECK(check_derivation(disj, System::ARpar).accepted);
    CHECK_FALSE(check_derivation(disj, System::BAR).accepted);

    Derivation deep{P("x & y"), P("x"), Rule::Cut, {leaf(Rule::Ax, "x & y", "y"), leaf(Rule::Ax, "y", "x")}, {}};
    auto rd = check_derivation(deep, System::BAR);
    CHECK_FALSE(rd.accepted);
    CHECK(rd.node == "root.premises[1]");

    Derivation arity{P("x"), P("x"), Rule::Cut, {leaf(Rule::Ax, "x", "x")}, {}};
    CHECK_FALSE(check_derivation(arity, System::BAR).accepted);
}

TEST_CASE("Visser and substitution axioms") {
    const Formula e = P("x"), f = P("false");
    auto v = visser_instance({{e, f}}, {P("y"), P("z")});
    CHECK(v.left == P("(x -> false) -> y | z"));
    CHECK(equiv(v.right, P("(~x -> x) | (~x -> y) | (~x -> z)")));
    CHECK(check_derivation(v, System::ARpar).accepted);
    CHECK_FALSE(check_derivation(v, System::BAR).accepted);
    auto vp = visser_instance({{e, f}}, {P("y"), P("z")}, true);
    CHECK(check_derivation(vp, System::ARDpar).accepted);
    CHECK_FALSE(check_derivation(vp, System::ARpar).accepted);

    Derivation tampered = v;
    tampered.right = P("(~x -> y) | (~x -> z)");
    CHECK_FALSE(check_derivation(tampered, System::ARpar).accepted);

    Derivation sub = leaf(Rule::Sub, "x -> y", "false -> y", {{"subst", {{"x", "false"}}}});
    CHECK(check_derivation(sub, System::ARDpar).accepted);
    CHECK_FALSE(check_derivation(sub, System::ARpar).accepted);
    Derivation subp = leaf(Rule::Sub, "#p", "true", {{"subst", {{"#p", "true"}}}});
    CHECK_FALSE(check_derivation(subp, System::ARDpar).accepted);
    Derivation subg = leaf(Rule::Sub, "#p", "true", {{"subst", {{"#p", "true"}}}, {"general", true}});
    CHECK(check_derivation(subg, System::ARDpar).accepted);
}

TEST_CASE("Visser validity through star on generated instances") {
    std::mt19937_64 rng(41);
    const std::vector<Formula> leaves{P("x"), P("y"), P("#p")};
    for (int i = 0; i < 40; ++i) {
        std::vector<std::pair<Formula, Formula>> imps;
        std::vector<Formula> ds;
        const int n = 1 + static_cast<int>(rng() % 2), m = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < n; ++k)
            imps.emplace_back(oracle::random_formula(rng, leaves, 1), oracle::random_formula(rng, leaves, 1));
        for (int k = 0; k < m; ++k) ds.push_back(oracle::random_formula(rng, leaves, 1));
        auto d = visser_instance(imps, ds);
        CHECK(check_derivation(d, System::ARpar).accepted);
        CHECK(provable({star(d.left)}, d.right));
    }
}

TEST_CASE("derivation JSON") {
    auto h = harrop_derivation();
    auto j = derivation_to_json(h);
    auto back = derivation_from_json(j);
    CHECK(derivation_to_json(back) == j);
    CHECK(back.rule == Rule::Cut);
    CHECK_THROWS_AS(derivation_from_json(nlohmann::json::parse(R"({"rule":"Nope"})")), InputError);
    CHECK_THROWS_AS(derivation_from_json(nlohmann::json::parse(R"({"rule":"Ax","conclusion":{"left":"x &"}})")), Error);
    CHECK(rule_from_name(rule_name(Rule::MontDelta)) == Rule::MontDelta);
    CHECK(system_from_name(system_name(System::ARDpar)) == System::ARDpar);
}

TEST_CASE("Harrop rule") {
    const Formula a = P("~x -> y | z"), b = P("(~x -> y) | (~x -> z)");
    auto r = prove({a}, b);
    REQUIRE_FALSE(r.theorem);
    auto t = oracle::from_model(*r.countermodel);
    CHECK(oracle::force(t, 0, a));
    CHECK_FALSE(oracle::force(t, 0, b));
    CHECK(preserves_nnilpar(a, b));
    auto h = harrop_derivation();
    CHECK(h.left == a);
    CHECK(h.right == b);
    CHECK(check_derivation(h, System::ARpar).accepted);
    auto rb = check_derivation(h, System::BAR);
    CHECK_FALSE(rb.accepted);
    CHECK(rb.node == "root.premises[0]");
    CHECK_FALSE(falsify_admissible(a, b).has_value());
    auto rep = decide_admissible(a, b);
    CHECK(rep.verdict == Verdict::Yes);
    CHECK(rep.method == "derivation");
}

TEST_CASE("falsifier anchors") {
    auto c = falsify_admissible(P("x"), P("y"));
    REQUIRE(c);
    CHECK(c->theta.image(Atom::var("x")) == Formula::top());
    CHECK(c->theta.image(Atom::var("y")) == Formula::bot());
    CHECK(c->premise == Formula::top());
    CHECK(genuine(*c, P("x"), P("y")));

    auto c2 = falsify_admissible(P("x | ~x"), P("x"));
    REQUIRE(c2);
    CHECK(c2->theta.image(Atom::var("x")) == Formula::bot());
    CHECK(provable(c2->theta(P("x | ~x"))));
    CHECK_FALSE(provable(c2->theta(P("x"))));

    auto c3 = falsify_admissible(P("~~x"), P("x"));
    REQUIRE(c3);
    CHECK(genuine(*c3, P("~~x"), P("x")));

    auto j = counterexample_to_json(*c);
    CHECK(j.contains("theta"));
    CHECK(j.contains("premise"));
    CHECK(model_from_json(j["countermodel"]) == c->countermodel);
}

TEST_CASE("serial and parallel falsifiers agree") {
    std::mt19937_64 rng(43);
    const std::vector<Formula> leaves{P("x"), P("y"), P("#p")};
    for (int i = 0; i < 40; ++i) {
        Formula a = oracle::random_formula(rng, leaves, 2), b = oracle::random_formula(rng, leaves, 2);
        auto s = falsify_admissible_serial(a, b);
        auto p = falsify_admissible(a, b, {}, FalsifyOptions{1, 2000000, 2});
        REQUIRE(s.has_value() == p.has_value());
        if (s) {
            CHECK(counterexample_to_json(*s) == counterexample_to_json(*p));
            CHECK(genuine(*s, a, b));
        }
    }
}

TEST_CASE("decision report") {
    auto r1 = decide_admissible(P("x"), P("x & (y -> y)"));
    CHECK(r1.verdict == Verdict::Yes);
    CHECK(r1.method == "ipc");
    auto r2 = decide_admissible(P("x"), P("y"));
    CHECK(r2.verdict == Verdict::No);
    auto r3 = decide_admissible(P("~~x"), P("x"));
    CHECK(r3.verdict == Verdict::No);
    CHECK(r3.method == "resolution");
}

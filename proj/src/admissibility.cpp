#include "relunif/admissibility.hpp"

#include <atomic>
#include <cmath>

#include <omp.h>

#include "relunif/errors.hpp"
#include "relunif/nnil.hpp"
#include "relunif/operators.hpp"
#include "relunif/prover.hpp"
#include "relunif/syntax.hpp"
#include "relunif/types.hpp"

namespace relunif {

bool preserves_nnilpar(Formula a, Formula b, const AtomSet& par) { return provable({star(a, par)}, b); }

bool preserves_nnilpar_by_reps(Formula a, Formula b, const AtomSet& par) {
    const AtomSet p = par.params().unite(atoms_of(std::vector<Formula>{a, b}).params());
    const RepSet& rs = nnil_reps(p);
    for (Formula e : rs.reps)
        if (provable({e}, a) && !provable({e}, b)) return false;
    return true;
}

bool admissible_nnilpar(Formula a, Formula b, const AtomSet& par, const ResolutionOptions& opt) {
    const Resolution r = resolution(a, par, Flavor::NnilPar, opt);
    return provable({Formula::disj(r.elements)}, b);
}

bool preserves_proj(Formula a, Formula b, const AtomSet& par, const ResolutionOptions& opt) {
    return admissible_nnilpar(a, b, par, opt);
}

// ---------------------------------------------------------------------------
// Derivations

namespace {

const std::vector<std::pair<Rule, std::string>> kRuleNames = {
    {Rule::Ax, "Ax"},         {Rule::Conj, "Conj"}, {Rule::Cut, "Cut"},       {Rule::Disj, "Disj"},
    {Rule::MontPar, "MontPar"}, {Rule::MontDelta, "MontDelta"}, {Rule::Vpar, "Vpar"}, {Rule::Vprime, "Vprime"},
    {Rule::Sub, "Sub"},
};

bool allowed(Rule r, System s) {
    switch (r) {
        case Rule::Ax:
        case Rule::Conj:
        case Rule::Cut:
            return true;
        case Rule::Disj:
        case Rule::MontPar:
        case Rule::MontDelta:
        case Rule::Vpar:
            return s != System::BAR;
        case Rule::Vprime:
        case Rule::Sub:
            return s == System::ARDpar;
    }
    return false;
}

std::size_t arity(Rule r) {
    switch (r) {
        case Rule::Conj:
        case Rule::Cut:
        case Rule::Disj:
            return 2;
        case Rule::MontPar:
        case Rule::MontDelta:
            return 1;
        default:
            return 0;
    }
}

struct Reject {
    std::string reason;
};

Formula side_formula(const nlohmann::json& j) {
    if (!j.is_string()) throw Reject{"side data formula is not a string"};
    try {
        return parse(j.get<std::string>());
    } catch (const ParseError& e) {
        throw Reject{std::string("side data: ") + e.what()};
    }
}

void check_visser(const Derivation& d, bool prime) {
    const auto& side = d.side;
    if (!side.is_object() || !side.contains("implications") || !side.contains("disjuncts"))
        throw Reject{"Visser node needs side.implications and side.disjuncts"};
    std::vector<std::pair<Formula, Formula>> imps;
    for (const auto& p : side["implications"]) {
        if (!p.is_array() || p.size() != 2) throw Reject{"each implication is a pair [E, F]"};
        imps.emplace_back(side_formula(p[0]), side_formula(p[1]));
    }
    std::vector<Formula> ds;
    for (const auto& e : side["disjuncts"]) ds.push_back(side_formula(e));
    const Derivation expect = visser_instance(imps, ds, prime);
    if (expect.left != d.left) throw Reject{"left side is not B -> C for the given decomposition"};
    if (expect.right != d.right) throw Reject{"right side is not the Visser disjunction, expected " + print(expect.right)};
}

Substitution side_subst(const nlohmann::json& side) {
    if (!side.is_object() || !side.contains("subst") || !side["subst"].is_object())
        throw Reject{"Sub node needs side.subst"};
    const bool general = side.value("general", false);
    Substitution theta = general ? Substitution::general() : Substitution();
    for (const auto& [name, f] : side["subst"].items()) {
        Formula key;
        try {
            key = parse(name);
        } catch (const ParseError& e) {
            throw Reject{"bad substitution key " + name};
        }
        if (!key.is_atom()) throw Reject{"substitution key " + name + " is not an atom"};
        try {
            theta.bind(key.atom(), side_formula(f));
        } catch (const InputError& e) {
            throw Reject{e.what()};
        }
    }
    return theta;
}

void check_node(const Derivation& d, System system) {
    if (!allowed(d.rule, system)) throw Reject{rule_name(d.rule) + " is not a rule of " + system_name(system)};
    if (d.premises.size() != arity(d.rule))
        throw Reject{rule_name(d.rule) + " takes " + std::to_string(arity(d.rule)) + " premises"};
    const auto& ps = d.premises;
    switch (d.rule) {
        case Rule::Ax:
            if (!provable({d.left}, d.right)) throw Reject{"left side does not imply the right side in IPC"};
            return;
        case Rule::Conj:
            if (ps[0].left != d.left || ps[1].left != d.left) throw Reject{"premises must share the left side"};
            if (d.right != Formula::conj(ps[0].right, ps[1].right)) throw Reject{"right side is not the conjunction of the premises"};
            return;
        case Rule::Cut:
            if (ps[0].left != d.left || ps[0].right != ps[1].left || ps[1].right != d.right)
                throw Reject{"premises do not chain from left to right"};
            return;
        case Rule::Disj:
            if (ps[0].right != d.right || ps[1].right != d.right) throw Reject{"premises must share the right side"};
            if (d.left != Formula::disj(ps[0].left, ps[1].left)) throw Reject{"left side is not the disjunction of the premises"};
            return;
        case Rule::MontPar:
        case Rule::MontDelta: {
            if (!d.left.is_imp() || !d.right.is_imp() || d.left.lhs() != d.right.lhs())
                throw Reject{"conclusion is not E -> A |> E -> B with a shared antecedent"};
            const Formula e = d.left.lhs();
            if (d.left.rhs() != ps[0].left || d.right.rhs() != ps[0].right)
                throw Reject{"conclusion does not extend the premise"};
            if (d.side.is_object() && d.side.contains("p") && side_formula(d.side["p"]) != e)
                throw Reject{"side.p differs from the antecedent"};
            if (d.side.is_object() && d.side.contains("E") && side_formula(d.side["E"]) != e)
                throw Reject{"side.E differs from the antecedent"};
            if (d.rule == Rule::MontPar && !e.is_par()) throw Reject{print(e) + " is not a parameter"};
            if (d.rule == Rule::MontDelta && !is_param_nnil(e))
                throw Reject{print(e) + " is not a parameter-only NNIL formula"};
            return;
        }
        case Rule::Vpar:
            check_visser(d, false);
            return;
        case Rule::Vprime:
            check_visser(d, true);
            return;
        case Rule::Sub: {
            const Substitution theta = side_subst(d.side);
            if (theta(d.left) != d.right) throw Reject{"right side is not the substitution instance of the left"};
            return;
        }
    }
}

CheckResult check_rec(const Derivation& d, System system, const std::string& path) {
    try {
        check_node(d, system);
    } catch (const Reject& r) {
        return {false, path, r.reason};
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        CheckResult c = check_rec(d.premises[i], system, path + ".premises[" + std::to_string(i) + "]");
        if (!c.accepted) return c;
    }
    return {};
}

}  // namespace

std::string rule_name(Rule r) {
    for (const auto& [k, v] : kRuleNames)
        if (k == r) return v;
    return "?";
}

Rule rule_from_name(const std::string& s) {
    for (const auto& [k, v] : kRuleNames)
        if (v == s) return k;
    throw InputError("unknown rule " + s);
}

std::string system_name(System s) {
    switch (s) {
        case System::BAR:
            return "BAR";
        case System::ARpar:
            return "ARpar";
        case System::ARDpar:
            return "ARDpar";
    }
    return "?";
}

System system_from_name(const std::string& s) {
    if (s == "BAR") return System::BAR;
    if (s == "ARpar") return System::ARpar;
    if (s == "ARDpar") return System::ARDpar;
    throw InputError("unknown system " + s + " (expected BAR, ARpar or ARDpar)");
}

Derivation derivation_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("derivation node is not an object");
    Derivation d;
    try {
        d.rule = rule_from_name(j.at("rule").get<std::string>());
        const auto& c = j.at("conclusion");
        d.left = parse(c.at("left").get<std::string>());
        d.right = parse(c.at("right").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed derivation node: ") + e.what());
    } catch (const ParseError& e) {
        throw InputError(std::string("derivation formula: ") + e.what());
    }
    if (j.contains("premises")) {
        if (!j["premises"].is_array()) throw InputError("premises must be an array");
        for (const auto& p : j["premises"]) d.premises.push_back(derivation_from_json(p));
    }
    if (j.contains("side")) d.side = j["side"];
    return d;
}

nlohmann::json derivation_to_json(const Derivation& d) {
    nlohmann::json j;
    j["rule"] = rule_name(d.rule);
    j["conclusion"] = {{"left", print(d.left)}, {"right", print(d.right)}};
    j["premises"] = nlohmann::json::array();
    for (const auto& p : d.premises) j["premises"].push_back(derivation_to_json(p));
    if (!d.side.empty()) j["side"] = d.side;
    return j;
}

CheckResult check_derivation(const Derivation& d, System system) { return check_rec(d, system, "root"); }

Derivation visser_instance(const std::vector<std::pair<Formula, Formula>>& implications,
                           const std::vector<Formula>& disjuncts, bool prime) {
    std::vector<Formula> bs;
    for (const auto& [e, f] : implications) bs.push_back(Formula::imp(e, f));
    const Formula b = Formula::conj(bs);
    std::vector<Formula> alts;
    for (const auto& [e, f] : implications) alts.push_back(prime ? itapp(b, e) : itp(b, e));
    for (Formula e : disjuncts) alts.push_back(prime ? itapp(b, e) : itp(b, e));
    Derivation d;
    d.left = Formula::imp(b, Formula::disj(disjuncts));
    d.right = Formula::disj(alts);
    d.rule = prime ? Rule::Vprime : Rule::Vpar;
    nlohmann::json imps = nlohmann::json::array();
    for (const auto& [e, f] : implications) imps.push_back({print(e), print(f)});
    nlohmann::json ds = nlohmann::json::array();
    for (Formula e : disjuncts) ds.push_back(print(e));
    d.side = {{"implications", imps}, {"disjuncts", ds}};
    return d;
}

Derivation harrop_derivation() {
    const Formula x = Formula::var("x"), y = Formula::var("y"), z = Formula::var("z");
    Derivation v = visser_instance({{x, Formula::bot()}}, {y, z});
    Derivation ax;
    ax.rule = Rule::Ax;
    ax.left = v.right;
    const Formula nx = Formula::neg(x);
    ax.right = Formula::disj(Formula::imp(nx, y), Formula::imp(nx, z));
    Derivation cut;
    cut.rule = Rule::Cut;
    cut.left = v.left;
    cut.right = ax.right;
    cut.premises = {std::move(v), std::move(ax)};
    return cut;
}

// ---------------------------------------------------------------------------
// Falsifier

std::vector<Formula> substitution_pool(const AtomSet& atoms, unsigned depth, std::size_t slots) {
    std::vector<Formula> out{Formula::bot(), Formula::top()};
    auto add = [&](Formula f) {
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    };
    if (atoms.size() <= 2) {
        try {
            std::vector<Formula> cls = enumerate_bounded_formulas(atoms, depth, 5000);
            if (std::pow(static_cast<double>(cls.size()), static_cast<double>(slots)) <= 200000.0) {
                for (Formula& f : cls) f = simplify(f);
                std::sort(cls.begin(), cls.end(), [](Formula a, Formula b) {
                    const auto ca = connective_count(a), cb = connective_count(b);
                    return ca != cb ? ca < cb : print(a) < print(b);
                });
                for (Formula f : cls) add(f);
                return out;
            }
        } catch (const BudgetExceeded&) {
        }
    }
    const std::vector<Atom>& xs = atoms.items();
    for (Atom a : xs) add(Formula::atom(a));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            add(Formula::conj(Formula::atom(xs[i]), Formula::atom(xs[j])));
            add(Formula::disj(Formula::atom(xs[i]), Formula::atom(xs[j])));
        }
    if (depth >= 1) {
        for (Atom a : xs) add(Formula::neg(Formula::atom(a)));
        for (Atom a : xs)
            for (Atom b : xs)
                if (a != b) add(Formula::imp(Formula::atom(a), Formula::atom(b)));
    }
    return out;
}

namespace {

struct Grid {
    std::vector<Atom> vars;
    std::vector<Formula> pool;
    std::vector<Formula> reps;
    std::size_t size = 0;

    Grid(Formula a, Formula b, const AtomSet& par, const FalsifyOptions& opt) {
        const AtomSet all = atoms_of(std::vector<Formula>{a, b});
        const AtomSet p = par.params().unite(all.params());
        vars = all.vars().items();
        pool = substitution_pool(all.vars().unite(p), opt.depth, vars.size());
        reps = nnil_reps(p).reps;
        double total = std::pow(static_cast<double>(pool.size()), static_cast<double>(vars.size()));
        size = total > static_cast<double>(opt.max_grid) ? opt.max_grid : static_cast<std::size_t>(total);
    }

    // The first variable varies slowest.
    Substitution at(std::size_t idx) const {
        Substitution theta;
        for (std::size_t k = vars.size(); k-- > 0;) {
            theta.bind(vars[k], pool[idx % pool.size()]);
            idx /= pool.size();
        }
        return theta;
    }

    // Index of the first premise refuting the instance, or -1.
    int probe(const Substitution& theta, Formula a, Formula b) const {
        const Formula ta = theta(a), tb = theta(b);
        if (provable({ta}, tb)) return -1;
        for (std::size_t i = 0; i < reps.size(); ++i)
            if (provable({reps[i]}, ta) && !provable({reps[i]}, tb)) return static_cast<int>(i);
        return -1;
    }

    AdmissibilityCounterexample witness(std::size_t idx, int e, Formula b) const {
        Substitution theta = at(idx);
        ProofResult r = prove({reps[e]}, theta(b));
        return {theta, reps[e], *r.countermodel};
    }
};

}  // namespace

std::optional<AdmissibilityCounterexample> falsify_admissible_serial(Formula a, Formula b, const AtomSet& par,
                                                                     const FalsifyOptions& opt) {
    const Grid g(a, b, par, opt);
    for (std::size_t idx = 0; idx < g.size; ++idx) {
        int e = g.probe(g.at(idx), a, b);
        if (e >= 0) return g.witness(idx, e, b);
    }
    return std::nullopt;
}

std::optional<AdmissibilityCounterexample> falsify_admissible(Formula a, Formula b, const AtomSet& par,
                                                              const FalsifyOptions& opt) {
    const Grid g(a, b, par, opt);
    std::atomic<std::size_t> best{SIZE_MAX};
    std::atomic<int> best_e{-1};
    const long long n = static_cast<long long>(g.size);
    const int jobs = opt.jobs > 0 ? opt.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (idx > best.load(std::memory_order_relaxed)) continue;
        int e = g.probe(g.at(idx), a, b);
        if (e < 0) continue;
#pragma omp critical(falsify_best)
        {
            if (idx < best.load()) {
                best.store(idx);
                best_e.store(e);
            }
        }
    }
    if (best.load() == SIZE_MAX) return std::nullopt;
    return g.witness(best.load(), best_e.load(), b);
}

nlohmann::json counterexample_to_json(const AdmissibilityCounterexample& c) {
    nlohmann::json theta = nlohmann::json::object();
    for (const auto& [v, f] : c.theta.bindings()) theta[v.text()] = print(f);
    return {{"theta", theta}, {"premise", print(c.premise)}, {"countermodel", model_to_json(c.countermodel)}};
}

AdmissibilityReport decide_admissible(Formula a, Formula b, const AtomSet& par, const ResolutionOptions& ropt,
                                      const FalsifyOptions& fopt) {
    AdmissibilityReport rep;
    if (provable({a}, b)) {
        rep.verdict = Verdict::Yes;
        rep.method = "ipc";
        return rep;
    }
    try {
        Resolution r = resolution(a, par, Flavor::NnilPar, ropt);
        rep.verdict = provable({Formula::disj(r.elements)}, b) ? Verdict::Yes : Verdict::No;
        rep.method = "resolution";
        rep.resolution = std::move(r);
        return rep;
    } catch (const BudgetExceeded& e) {
        rep.note = e.what();
    }
    if (a.is_imp()) {
        std::vector<std::pair<Formula, Formula>> imps;
        bool shaped = true;
        for (Formula c : conjuncts(a.lhs())) {
            if (c.is_top()) continue;
            if (!c.is_imp()) {
                shaped = false;
                break;
            }
            imps.emplace_back(c.lhs(), c.rhs());
        }
        if (shaped) {
            Derivation v = visser_instance(imps, disjuncts(a.rhs()));
            if (v.left == a && provable({v.right}, b)) {
                Derivation ax;
                ax.rule = Rule::Ax;
                ax.left = v.right;
                ax.right = b;
                Derivation cut;
                cut.rule = Rule::Cut;
                cut.left = a;
                cut.right = b;
                cut.premises = {std::move(v), std::move(ax)};
                if (check_derivation(cut, System::ARpar).accepted) {
                    rep.verdict = Verdict::Yes;
                    rep.method = "derivation";
                    rep.derivation = std::move(cut);
                    return rep;
                }
            }
        }
    }
    if (auto c = falsify_admissible(a, b, par, fopt)) {
        rep.verdict = Verdict::No;
        rep.method = "falsifier";
        rep.counterexample = std::move(c);
        return rep;
    }
    rep.method = "none";
    return rep;
}

}  // namespace relunif

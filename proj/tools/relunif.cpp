#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "relunif/admissibility.hpp"
#include "relunif/errors.hpp"
#include "relunif/kripke.hpp"
#include "relunif/nnil.hpp"
#include "relunif/operators.hpp"
#include "relunif/projectivity.hpp"
#include "relunif/prover.hpp"
#include "relunif/syntax.hpp"
#include "relunif/theory.hpp"
#include "relunif/types.hpp"

using namespace relunif;
using nlohmann::json;

namespace {

enum Exit { kYes = 0, kNo = 1, kInconclusive = 2, kInputError = 3 };

struct Config {
    std::string par;
    std::size_t budget = 0;
    bool json = false;
    int jobs = 0;
    std::string model;
    std::string derivation;
    std::string atoms;
    unsigned rank = 1;
    std::string system = "ARpar";
    std::string flavor = "nnilpar";
    std::string cls = "nnil";
    unsigned depth = 1;
    std::vector<std::string> args;

    AtomSet declared;
};

AtomSet parse_par(const std::string& text) {
    AtomSet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const std::string name = item[0] == '#' ? item.substr(1) : item;
        const AtomSet one = parse_atoms("#" + name);
        for (Atom a : one) out.insert(a);
    }
    return out;
}

Formula formula_arg(const Config& c, std::size_t i) {
    if (i >= c.args.size()) throw InputError("missing formula argument");
    Formula f = parse(c.args[i]);
    for (Atom a : atoms_of(f).vars())
        if (c.declared.contains(Atom::par(a.name())))
            throw InputError(a.name() + " is declared a parameter but used without '#'");
    return f;
}

json read_json_file(const std::string& path) {
    if (path.empty()) throw InputError("missing file argument");
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<KripkeModel> read_models(const std::string& path) {
    json j = read_json_file(path);
    std::vector<KripkeModel> out;
    if (j.is_array())
        for (const auto& m : j) out.push_back(model_from_json(m));
    else
        out.push_back(model_from_json(j));
    return out;
}

AtomSet atoms_option(const Config& c, const AtomSet& fallback) {
    return c.atoms.empty() ? fallback : parse_atoms(c.atoms);
}

ResolutionOptions resolution_options(const Config& c) {
    ResolutionOptions o;
    if (c.budget) o.downset_budget = c.budget;
    return o;
}

int emit(const Config& c, int code, json report, const std::string& text) {
    if (c.json) {
        report["exit"] = code;
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    }
    return code;
}

std::string list_formulas(const std::vector<Formula>& fs) {
    std::string s;
    for (Formula f : fs) s += print(f) + "\n";
    return s;
}

json formulas_json(const std::vector<Formula>& fs) {
    json a = json::array();
    for (Formula f : fs) a.push_back(print(f));
    return a;
}

int cmd_prove(const Config& c, bool want_model) {
    const Formula f = formula_arg(c, 0);
    ProofResult r = prove(f);
    json j{{"formula", print(f)}, {"theorem", r.theorem}};
    std::string text = r.theorem ? "theorem" : "not a theorem";
    if (r.countermodel) {
        j["countermodel"] = model_to_json(*r.countermodel);
        text += "\ncountermodel:\n" + describe(*r.countermodel);
    }
    if (want_model) return emit(c, r.theorem ? kNo : kYes, j, r.theorem ? "theorem, no countermodel" : describe(*r.countermodel));
    return emit(c, r.theorem ? kYes : kNo, j, text);
}

int cmd_equiv(const Config& c) {
    const Formula a = formula_arg(c, 0), b = formula_arg(c, 1);
    json j{{"left", print(a)}, {"right", print(b)}};
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
        ProofResult r = prove({x}, y);
        if (!r.theorem) {
            j["equivalent"] = false;
            j["countermodel"] = model_to_json(*r.countermodel);
            return emit(c, kNo, j, "not equivalent: a model forces " + print(x) + " but not " + print(y) + "\n" +
                                       describe(*r.countermodel));
        }
    }
    j["equivalent"] = true;
    return emit(c, kYes, j, "equivalent");
}

int cmd_star(const Config& c) {
    const Formula a = formula_arg(c, 0);
    const Formula s = star(a, c.declared);
    return emit(c, kYes, {{"formula", print(a)}, {"star", print(s)}}, print(s));
}

int cmd_dagger(const Config& c) {
    const Formula a = formula_arg(c, 0);
    const Formula d = a_dagger(a, c.declared);
    return emit(c, kYes, {{"formula", print(a)}, {"dagger", print(d)}}, print(d));
}

int cmd_projective(const Config& c) {
    const Formula a = formula_arg(c, 0);
    const ProjectivityCertificate cert = is_projective(a, c.declared);
    json j = certificate_to_json(cert);
    std::string text = cert.projective ? "projective\nprojection: " + print(*cert.projection) : "not projective";
    if (!cert.routes_agree()) {
        std::cerr << "defect: the dagger and star routes disagree on " << print(a) << "\n";
        return emit(c, kInconclusive, j, text + "\nroutes disagree");
    }
    if (cert.projective) {
        if (std::string why = verify_certificate(cert, c.declared); !why.empty()) {
            std::cerr << "defect: " << why << "\n";
            return emit(c, kInconclusive, j, text + "\ncertificate check failed: " + why);
        }
        text += "\nwitness:";
        for (const auto& [v, f] : cert.witness->bindings()) text += "\n  " + v.text() + " := " + print(f);
    }
    return emit(c, cert.projective ? kYes : kNo, j, text);
}

int cmd_resolve(const Config& c) {
    const Formula a = formula_arg(c, 0);
    Flavor fl;
    if (c.flavor == "nnilpar")
        fl = Flavor::NnilPar;
    else if (c.flavor == "prime-nnilpar")
        fl = Flavor::PrimeNnilPar;
    else
        throw InputError("unknown flavor " + c.flavor + " (expected nnilpar or prime-nnilpar)");
    const Resolution r = resolution(a, c.declared, fl, resolution_options(c));
    std::string text = r.elements.empty() ? "(empty)\n" : list_formulas(r.elements);
    return emit(c, kYes, resolution_to_json(r), text);
}

int cmd_glb(const Config& c) {
    const Formula a = formula_arg(c, 0);
    const Formula g = glb_proj(a, c.declared, resolution_options(c));
    return emit(c, kYes, {{"formula", print(a)}, {"glb", print(g)}}, print(g));
}

int cmd_preserve(const Config& c) {
    const Formula a = formula_arg(c, 0), b = formula_arg(c, 1);
    const Formula s = star(a, c.declared);
    const bool yes = provable({s}, b);
    return emit(c, yes ? kYes : kNo, {{"left", print(a)}, {"right", print(b)}, {"star", print(s)}, {"preserves", yes}},
                std::string(yes ? "preserved" : "not preserved") + " (star: " + print(s) + ")");
}

FalsifyOptions falsify_options(const Config& c) {
    FalsifyOptions o;
    o.depth = c.depth;
    o.jobs = c.jobs;
    if (c.budget) o.max_grid = c.budget;
    return o;
}

int cmd_admissible(const Config& c) {
    const Formula a = formula_arg(c, 0), b = formula_arg(c, 1);
    const AdmissibilityReport r = decide_admissible(a, b, c.declared, resolution_options(c), falsify_options(c));
    json j{{"left", print(a)}, {"right", print(b)}, {"method", r.method}};
    std::string text;
    int code;
    switch (r.verdict) {
        case Verdict::Yes:
            j["verdict"] = "admissible";
            text = "admissible";
            code = kYes;
            break;
        case Verdict::No:
            j["verdict"] = "not admissible";
            text = "not admissible";
            code = kNo;
            break;
        default:
            j["verdict"] = "inconclusive";
            text = "inconclusive";
            code = kInconclusive;
    }
    text += " (" + r.method + ")";
    if (!r.note.empty()) {
        j["note"] = r.note;
        text += "\nnote: " + r.note;
    }
    if (r.resolution) {
        j["resolution"] = resolution_to_json(*r.resolution);
        text += "\nresolution:\n" + list_formulas(r.resolution->elements);
    }
    if (r.derivation) {
        j["derivation"] = derivation_to_json(*r.derivation);
        text += "\nderivation: " + derivation_to_json(*r.derivation).dump();
    }
    if (r.counterexample) {
        j["counterexample"] = counterexample_to_json(*r.counterexample);
        text += "\ncounterexample: " + counterexample_to_json(*r.counterexample).dump();
    }
    return emit(c, code, j, text);
}

int cmd_falsify(const Config& c) {
    const Formula a = formula_arg(c, 0), b = formula_arg(c, 1);
    const auto cx = falsify_admissible(a, b, c.declared, falsify_options(c));
    if (!cx)
        return emit(c, kInconclusive, {{"left", print(a)}, {"right", print(b)}, {"found", false}},
                    "none found at depth " + std::to_string(c.depth));
    json j = counterexample_to_json(*cx);
    j["found"] = true;
    std::string text = "counterexample\npremise: " + print(cx->premise) + "\ntheta:";
    for (const auto& [v, f] : cx->theta.bindings()) text += "\n  " + v.text() + " := " + print(f);
    text += "\ncountermodel:\n" + describe(cx->countermodel);
    return emit(c, kYes, j, text);
}

int cmd_check_derivation(const Config& c) {
    const Derivation d = derivation_from_json(read_json_file(c.derivation));
    const CheckResult r = check_derivation(d, system_from_name(c.system));
    json j{{"system", c.system}, {"accepted", r.accepted}};
    if (!r.accepted) {
        j["node"] = r.node;
        j["reason"] = r.reason;
        return emit(c, kNo, j, "rejected at " + r.node + ": " + r.reason);
    }
    return emit(c, kYes, j, "accepted");
}

int cmd_enumerate(const Config& c) {
    std::vector<Formula> out;
    if (c.cls == "nnil") {
        AtomSet atoms = atoms_option(c, c.declared);
        if (!atoms.vars().empty()) throw InputError("NNIL(par) enumeration takes parameters only");
        out = nnil_reps(atoms).reps;
    } else if (c.cls == "bounded") {
        out = enumerate_bounded_formulas(atoms_option(c, c.declared), c.rank, c.budget ? c.budget : kDefaultTypeBudget);
    } else {
        throw InputError("unknown class " + c.cls + " (expected nnil or bounded)");
    }
    return emit(c, kYes, {{"class", c.cls}, {"count", out.size()}, {"formulas", formulas_json(out)}}, list_formulas(out));
}

int cmd_chi(const Config& c) {
    const std::vector<KripkeModel> ms = read_models(c.model);
    if (ms.size() != 1) throw InputError("chi takes a single model");
    const AtomSet atoms = atoms_option(c, ms[0].atoms());
    const Formula f = chi(ms[0], c.rank, atoms);
    return emit(c, kYes, {{"rank", c.rank}, {"chi", print(f)}}, print(f));
}

int cmd_closure(const Config& c) {
    const std::vector<KripkeModel> ms = read_models(c.model);
    AtomSet atoms;
    for (const auto& k : ms) atoms = atoms.unite(k.atoms());
    const Formula f = closure_formula(ms, c.rank, atoms_option(c, atoms));
    return emit(c, kYes, {{"rank", c.rank}, {"closure", print(f)}}, print(f));
}

int cmd_extendible_class(const Config& c) {
    const std::vector<KripkeModel> ms = read_models(c.model);
    const ExtendibilityReport r = check_class_extendible(ms, c.declared);
    json j{{"extendible", r.extendible}};
    if (!r.extendible) {
        j["host"] = r.host;
        j["family"] = r.family;
        std::string fam;
        for (int i : r.family) fam += (fam.empty() ? "" : ",") + std::to_string(i);
        return emit(c, kNo, j, "not extendible: members {" + fam + "} below host " + std::to_string(r.host) +
                                   " have no variant in the class");
    }
    return emit(c, kYes, j, "extendible");
}

int cmd_model_validate(const Config& c) {
    const std::vector<KripkeModel> ms = read_models(c.model);
    json j{{"valid", true}, {"models", ms.size()}};
    std::string text = "valid";
    if (!c.args.empty()) {
        const Formula f = formula_arg(c, 0);
        json forced = json::array();
        for (const auto& k : ms) forced.push_back(forces(k, f));
        j["forces"] = forced;
        j["formula"] = print(f);
        bool all = std::all_of(ms.begin(), ms.end(), [&](const KripkeModel& k) { return forces(k, f); });
        text += all ? "\nforced at every root" : "\nrefuted at some root";
        for (const auto& k : ms) text += "\n" + describe(k);
        return emit(c, all ? kYes : kNo, j, text);
    }
    for (const auto& k : ms) text += "\n" + describe(k);
    return emit(c, kYes, j, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative unification and admissibility toolkit for intuitionistic propositional logic"};
    app.require_subcommand(1);
    app.fallthrough();
    Config c;
    app.add_option("--par", c.par, "declared parameters, e.g. p,q")->capture_default_str();
    app.add_option("--budget", c.budget, "cap on enumerated candidates")->check(CLI::PositiveNumber);
    app.add_flag("--json", c.json, "JSON output");
    app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);

    struct Sub {
        const char* name;
        const char* help;
        int nargs;
    };
    const std::vector<Sub> subs = {
        {"prove", "decide a formula in IPC", 1},
        {"countermodel", "print a finite countermodel", 1},
        {"equiv", "decide IPC equivalence", 2},
        {"star", "greatest NNIL(par) lower bound", 1},
        {"dagger", "the projection formula A-dagger", 1},
        {"projective", "decide NNIL(par)-projectivity", 1},
        {"resolve", "projective resolution", 1},
        {"glb", "disjunction of the projective resolution", 1},
        {"preserve", "NNIL(par)-preservativity", 2},
        {"admissible", "NNIL(par)-admissibility", 2},
        {"falsify", "bounded search for an admissibility counterexample", 2},
        {"check-derivation", "check a BAR/ARpar/ARDpar derivation", 0},
        {"enumerate", "enumerate NNIL(par) or bounded classes", 0},
        {"chi", "characteristic formula of a model", 0},
        {"closure", "bounded closure formula of a model class", 0},
        {"extendible-class", "decide extendibility of a finite model class", 0},
        {"model-validate", "validate a model file, optionally evaluating a formula", -1},
    };
    for (const Sub& s : subs) {
        CLI::App* sc = app.add_subcommand(s.name, s.help);
        if (s.nargs > 0)
            sc->add_option("formulas", c.args, "formula arguments")->expected(s.nargs)->required();
        else if (s.nargs < 0)
            sc->add_option("formula", c.args, "formula to evaluate")->expected(0, 1);
        const std::string n = s.name;
        if (n == "resolve") sc->add_option("--flavor", c.flavor, "nnilpar or prime-nnilpar");
        if (n == "falsify" || n == "admissible") sc->add_option("--depth", c.depth, "substitution depth");
        if (n == "check-derivation") {
            sc->add_option("--derivation", c.derivation, "derivation JSON file")->required();
            sc->add_option("--system", c.system, "BAR, ARpar or ARDpar");
        }
        if (n == "enumerate") {
            sc->add_option("--class", c.cls, "nnil or bounded");
            sc->add_option("--atoms", c.atoms, "atom list, e.g. x,#p");
            sc->add_option("--rank", c.rank, "implication depth bound");
        }
        if (n == "chi" || n == "closure") {
            sc->add_option("--model", c.model, "model JSON file")->required();
            sc->add_option("--rank", c.rank, "type rank");
            sc->add_option("--atoms", c.atoms, "atom list");
        }
        if (n == "extendible-class" || n == "model-validate")
            sc->add_option("--model", c.model, "model JSON file")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (c.jobs > 0) omp_set_num_threads(c.jobs);
        c.declared = parse_par(c.par);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "prove") return cmd_prove(c, false);
        if (cmd == "countermodel") return cmd_prove(c, true);
        if (cmd == "equiv") return cmd_equiv(c);
        if (cmd == "star") return cmd_star(c);
        if (cmd == "dagger") return cmd_dagger(c);
        if (cmd == "projective") return cmd_projective(c);
        if (cmd == "resolve") return cmd_resolve(c);
        if (cmd == "glb") return cmd_glb(c);
        if (cmd == "preserve") return cmd_preserve(c);
        if (cmd == "admissible") return cmd_admissible(c);
        if (cmd == "falsify") return cmd_falsify(c);
        if (cmd == "check-derivation") return cmd_check_derivation(c);
        if (cmd == "enumerate") return cmd_enumerate(c);
        if (cmd == "chi") return cmd_chi(c);
        if (cmd == "closure") return cmd_closure(c);
        if (cmd == "extendible-class") return cmd_extendible_class(c);
        if (cmd == "model-validate") return cmd_model_validate(c);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        if (c.json) std::cout << json{{"exit", kInconclusive}, {"error", "budget"}, {"message", e.what()}}.dump(2) << "\n";
        return kInconclusive;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (c.json) std::cout << json{{"exit", kInputError}, {"error", "input"}, {"message", e.what()}}.dump(2) << "\n";
        return kInputError;
    }
    return kInputError;
}

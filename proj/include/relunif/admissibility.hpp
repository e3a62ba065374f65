#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relunif/formula.hpp"
#include "relunif/kripke.hpp"
#include "relunif/projectivity.hpp"
#include "relunif/substitution.hpp"

namespace relunif {

enum class Relation { PreservesNnilPar, AdmissibleNnilPar, PreservesProj };

// ⊢ a★ → b.
bool preserves_nnilpar(Formula a, Formula b, const AtomSet& par = {});
// The same relation by quantifying over the NNIL(par) representatives.
bool preserves_nnilpar_by_reps(Formula a, Formula b, const AtomSet& par = {});
// ⊢ ⋁Π(a) → b. Throws BudgetExceeded when the resolution is out of budget.
bool admissible_nnilpar(Formula a, Formula b, const AtomSet& par = {}, const ResolutionOptions& opt = {});
bool preserves_proj(Formula a, Formula b, const AtomSet& par = {}, const ResolutionOptions& opt = {});

// ---------------------------------------------------------------------------
// Derivations

enum class Rule { Ax, Conj, Cut, Disj, MontPar, MontDelta, Vpar, Vprime, Sub };
enum class System { BAR, ARpar, ARDpar };

struct Derivation {
    Formula left;
    Formula right;
    Rule rule = Rule::Ax;
    std::vector<Derivation> premises;
    nlohmann::json side = nlohmann::json::object();
};

std::string rule_name(Rule r);
Rule rule_from_name(const std::string& s);  // InputError on unknown names
std::string system_name(System s);
System system_from_name(const std::string& s);

Derivation derivation_from_json(const nlohmann::json& j);
nlohmann::json derivation_to_json(const Derivation& d);

struct CheckResult {
    bool accepted = true;
    std::string node;  // path of the first failing node, e.g. "root.premises[1]"
    std::string reason;
};

CheckResult check_derivation(const Derivation& d, System system);

// B → C ▷ ⋁ itp(B, E_i) for B = ⋀(E_i → F_i), C = ⋁ disjuncts; itapp instead of itp when prime.
Derivation visser_instance(const std::vector<std::pair<Formula, Formula>>& implications,
                           const std::vector<Formula>& disjuncts, bool prime = false);
// ¬x → y∨z ▷ (¬x→y) ∨ (¬x→z), by V^par and an axiom joined with Cut.
Derivation harrop_derivation();

// ---------------------------------------------------------------------------
// Bounded falsification of a ∣~ b

struct AdmissibilityCounterexample {
    Substitution theta;
    Formula premise;              // E ∈ NNIL(par) with ⊢ E → θ(a)
    KripkeModel countermodel;     // root forces E and refutes θ(b)
};

// Images for the substitution grid: the bounded classes of c_arrow <= depth when their
// product stays small, otherwise ⊥, ⊤, atoms, binary ∧/∨ of atoms and, from depth 1,
// negated atoms and implications between atoms.
std::vector<Formula> substitution_pool(const AtomSet& atoms, unsigned depth, std::size_t slots);

struct FalsifyOptions {
    unsigned depth = 1;
    std::size_t max_grid = 2000000;
    int jobs = 0;  // 0: OpenMP default
};

// Searches the grid in a fixed order and returns the first counterexample in that order.
std::optional<AdmissibilityCounterexample> falsify_admissible(Formula a, Formula b, const AtomSet& par = {},
                                                              const FalsifyOptions& opt = {});
std::optional<AdmissibilityCounterexample> falsify_admissible_serial(Formula a, Formula b, const AtomSet& par = {},
                                                                     const FalsifyOptions& opt = {});
nlohmann::json counterexample_to_json(const AdmissibilityCounterexample& c);

// Resolution-based decision with fallbacks when the resolution is out of budget: a one-step
// V^par derivation settles positives, a falsifier hit settles negatives.
enum class Verdict { Yes, No, Inconclusive };

struct AdmissibilityReport {
    Verdict verdict = Verdict::Inconclusive;
    std::string method;  // "ipc", "resolution", "derivation", "falsifier", "none"
    std::optional<Resolution> resolution;
    std::optional<Derivation> derivation;
    std::optional<AdmissibilityCounterexample> counterexample;
    std::string note;
};

AdmissibilityReport decide_admissible(Formula a, Formula b, const AtomSet& par = {},
                                      const ResolutionOptions& ropt = {}, const FalsifyOptions& fopt = {});

}  // namespace relunif

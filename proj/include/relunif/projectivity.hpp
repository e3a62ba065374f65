#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relunif/formula.hpp"
#include "relunif/kripke.hpp"
#include "relunif/substitution.hpp"
#include "relunif/types.hpp"

namespace relunif {

// x ∈ xs ↦ a→x, every other variable of a ↦ a∧x.
Substitution theta_stage(Formula a, const AtomSet& xs);
// Subsets of the variables of a in cardinality-then-name order; the first subset is
// applied first. Throws BudgetExceeded past max_vars variables.
std::vector<AtomSet> theta_stages(Formula a);
Substitution theta_full(Formula a, std::size_t max_vars = 6);

// Parameters that the relative notions range over: par together with those of a.
AtomSet effective_par(Formula a, const AtomSet& par);

Formula a_dagger(Formula a, const AtomSet& par = {});

struct ProjectivityCertificate {
    Formula subject;
    bool projective = false;
    bool route_paper = false;         // θ(a) ↔ a†
    std::optional<bool> route_star;   // θ(a) ↔ θ(a)★, when cross-checked
    bool routes_agree() const { return !route_star || *route_star == route_paper; }
    std::optional<Substitution> witness;
    std::optional<Formula> projection;
    // A model refuting θ(a) ↔ a† together with its θ-image.
    std::optional<std::pair<KripkeModel, KripkeModel>> refutation;
};

// The star route recurses over θ(a) as a tree, which grows fast with the variable count.
ProjectivityCertificate is_projective(Formula a, const AtomSet& par = {}, bool cross_check = true);
// Prover check of the certificate conditions; empty string when they hold.
std::string verify_certificate(const ProjectivityCertificate& c, const AtomSet& par = {});
nlohmann::json certificate_to_json(const ProjectivityCertificate& c);

enum class Flavor { NnilPar, PrimeNnilPar };

struct Resolution {
    Formula subject;
    Flavor flavor = Flavor::NnilPar;
    unsigned rank = 0;  // the c_arrow bound used for candidates
    std::vector<Formula> elements;
    std::vector<ProjectivityCertificate> witnesses;
};

struct ResolutionOptions {
    std::size_t type_budget = kDefaultTypeBudget;
    std::size_t downset_budget = 500;
    double max_seconds = 60;
    bool prettify = true;
    bool cross_check = false;  // star route on the final witnesses
};

Resolution resolution(Formula a, const AtomSet& par = {}, Flavor flavor = Flavor::NnilPar,
                      const ResolutionOptions& opt = {});
Formula glb_proj(Formula a, const AtomSet& par = {}, const ResolutionOptions& opt = {});
std::string verify_resolution(const Resolution& r, const AtomSet& par = {});
nlohmann::json resolution_to_json(const Resolution& r);

}  // namespace relunif

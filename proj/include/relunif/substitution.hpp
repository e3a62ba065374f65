#pragma once

#include <map>
#include <optional>
#include <string>

#include "relunif/formula.hpp"

namespace relunif {

// Finite map from atoms to formulas, identity elsewhere. A plain substitution binds
// variables only; a general one may also send parameters to top, bot or parameters.
class Substitution {
public:
    Substitution() = default;
    static Substitution general();

    // Throws InputError when the binding is illegal for this kind of substitution.
    Substitution& bind(Atom a, Formula f);
    Substitution& bind(std::string_view var_name, Formula f) { return bind(Atom::var(var_name), f); }

    bool is_general() const { return general_; }
    std::optional<Formula> lookup(Atom a) const;
    Formula image(Atom a) const;
    const std::map<Atom, Formula>& bindings() const { return bindings_; }

    Formula apply(Formula f) const;
    Formula operator()(Formula f) const { return apply(f); }

    // (outer ∘ inner)(a) = outer(inner(a)).
    static Substitution compose(const Substitution& outer, const Substitution& inner);

private:
    std::map<Atom, Formula> bindings_;
    bool general_ = false;
};

Formula apply_subst(const Substitution& theta, Formula f);

}  // namespace relunif

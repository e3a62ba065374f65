#include "relunif/substitution.hpp"

#include <unordered_map>

#include "relunif/errors.hpp"
#include "relunif/syntax.hpp"

namespace relunif {

Substitution Substitution::general() {
    Substitution s;
    s.general_ = true;
    return s;
}

Substitution& Substitution::bind(Atom a, Formula f) {
    if (a.is_param()) {
        if (!general_) throw InputError("substitution may not rebind parameter " + a.text());
        if (!(f.is_top() || f.is_bot() || f.is_par()))
            throw InputError("parameter " + a.text() + " may only map to true, false or a parameter, got " +
                             print(f));
    }
    if (f == Formula::atom(a))
        bindings_.erase(a);
    else
        bindings_[a] = f;
    return *this;
}

std::optional<Formula> Substitution::lookup(Atom a) const {
    auto it = bindings_.find(a);
    if (it == bindings_.end()) return std::nullopt;
    return it->second;
}

Formula Substitution::image(Atom a) const {
    auto it = bindings_.find(a);
    return it == bindings_.end() ? Formula::atom(a) : it->second;
}

Formula Substitution::apply(Formula f) const {
    if (bindings_.empty()) return f;
    std::unordered_map<Formula, Formula> memo;
    auto go = [&](auto&& self, Formula g) -> Formula {
        switch (g.kind()) {
            case Kind::Bot:
                return g;
            case Kind::Var:
            case Kind::Par:
                return image(g.atom());
            default:
                break;
        }
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        Formula l = self(self, g.lhs());
        Formula r = self(self, g.rhs());
        Formula out = g;
        if (l != g.lhs() || r != g.rhs()) {
            if (g.is_and())
                out = Formula::conj(l, r);
            else if (g.is_or())
                out = Formula::disj(l, r);
            else
                out = Formula::imp(l, r);
        }
        memo.emplace(g, out);
        return out;
    };
    return go(go, f);
}

Substitution Substitution::compose(const Substitution& outer, const Substitution& inner) {
    Substitution out;
    out.general_ = outer.general_ || inner.general_;
    for (const auto& [a, f] : inner.bindings_) out.bindings_[a] = outer.apply(f);
    for (const auto& [a, f] : outer.bindings_)
        if (!inner.bindings_.count(a)) out.bindings_[a] = f;
    for (auto it = out.bindings_.begin(); it != out.bindings_.end();) {
        if (it->second == Formula::atom(it->first))
            it = out.bindings_.erase(it);
        else
            ++it;
    }
    return out;
}

Formula apply_subst(const Substitution& theta, Formula f) { return theta.apply(f); }

}  // namespace relunif

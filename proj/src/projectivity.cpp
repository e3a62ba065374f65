#include "relunif/projectivity.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "relunif/enumerate.hpp"
#include "relunif/errors.hpp"
#include "relunif/nnil.hpp"
#include "relunif/operators.hpp"
#include "relunif/prover.hpp"
#include "relunif/syntax.hpp"

namespace relunif {

Substitution theta_stage(Formula a, const AtomSet& xs) {
    Substitution theta;
    for (Atom v : atoms_of(a).vars()) {
        Formula x = Formula::atom(v);
        theta.bind(v, xs.contains(v) ? Formula::imp(a, x) : Formula::conj(a, x));
    }
    return theta;
}

std::vector<AtomSet> theta_stages(Formula a) {
    const std::vector<Atom> vs = atoms_of(a).vars().items();
    const std::size_t m = vs.size();
    std::vector<AtomSet> out;
    for (std::size_t k = 0; k <= m; ++k) {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            std::vector<Atom> s;
            for (std::size_t i : idx) s.push_back(vs[i]);
            out.emplace_back(std::move(s));
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

Substitution theta_full(Formula a, std::size_t max_vars) {
    if (atoms_of(a).vars().size() > max_vars)
        throw BudgetExceeded("theta_A over more than " + std::to_string(max_vars) + " variables");
    Substitution acc;
    for (const AtomSet& xs : theta_stages(a)) acc = Substitution::compose(theta_stage(a, xs), acc);
    return acc;
}

AtomSet effective_par(Formula a, const AtomSet& par) { return par.params().unite(atoms_of(a).params()); }

Formula a_dagger(Formula a, const AtomSet& par) {
    const AtomSet p = effective_par(a, par);
    const RepSet& rs = nnil_reps(p);
    const std::vector<Atom>& ps = p.items();
    auto entails = [&](std::size_t i, std::size_t j) {
        const Signature& si = rs.sigs[i];
        const Signature& sj = rs.sigs[j];
        for (std::size_t w = 0; w < si.size(); ++w)
            if (si[w] & ~sj[w]) return false;
        return true;
    };
    std::vector<Formula> parts;
    for (std::uint32_t mask = 0; mask < (1u << ps.size()); ++mask) {
        std::vector<Formula> pf;
        for (std::size_t i = 0; i < ps.size(); ++i)
            if (mask >> i & 1u) pf.push_back(Formula::atom(ps[i]));
        const Formula pc = Formula::conj(pf);
        std::vector<Formula> alts;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            std::vector<Formula> outside;
            for (std::size_t j = 0; j < rs.size(); ++j)
                if (!entails(i, j)) outside.push_back(rs.reps[j]);
            if (!provable({a, pc, rs.reps[i]}, Formula::disj(outside))) alts.push_back(rs.reps[i]);
        }
        parts.push_back(Formula::imp(pc, Formula::disj(alts)));
    }
    return star_semantic(simplify(Formula::conj(parts)), p);
}

ProjectivityCertificate is_projective(Formula a, const AtomSet& par, bool cross_check) {
    const AtomSet p = effective_par(a, par);
    ProjectivityCertificate c;
    c.subject = a;
    const Substitution theta = theta_full(a);
    const Formula image = simplify(theta(a));
    const Formula dagger = a_dagger(a, p);
    c.route_paper = equiv(image, dagger);
    if (cross_check) c.route_star = equiv(image, star(image, p));
    c.projective = c.route_paper;
    if (c.projective) {
        c.witness = theta;
        c.projection = dagger;
    } else {
        ProofResult r = prove({image}, dagger);
        if (r.theorem) r = prove({dagger}, image);
        if (r.countermodel) c.refutation = std::make_pair(*r.countermodel, subst_model(theta, *r.countermodel));
    }
    return c;
}

std::string verify_certificate(const ProjectivityCertificate& c, const AtomSet& par) {
    if (!c.projective) return "";
    if (!c.witness || !c.projection) return "positive verdict without witness or projection";
    const AtomSet p = effective_par(c.subject, par);
    if (!is_nnil(*c.projection) || !atoms_of(*c.projection).vars().empty() || !atoms_of(*c.projection).subset_of(p))
        return "projection is not parameter-only NNIL";
    if (!equiv((*c.witness)(c.subject), *c.projection)) return "witness image is not equivalent to the projection";
    for (const auto& [v, f] : c.witness->bindings()) {
        if (v.is_param()) return "witness moves a parameter";
        const Formula x = Formula::atom(v);
        if (!provable({c.subject, x}, f) || !provable({c.subject, f}, x))
            return "witness is not subject-projective at " + v.text();
    }
    return "";
}

nlohmann::json certificate_to_json(const ProjectivityCertificate& c) {
    nlohmann::json j;
    j["subject"] = print(c.subject);
    j["verdict"] = c.projective ? "projective" : "not-projective";
    if (c.route_star) j["routes_agree"] = c.routes_agree();
    if (c.witness) {
        nlohmann::json w = nlohmann::json::object();
        for (const auto& [v, f] : c.witness->bindings()) w[v.text()] = print(f);
        j["witness"] = w;
    }
    if (c.projection) j["projection"] = print(*c.projection);
    if (c.refutation) j["refutation"] = {model_to_json(c.refutation->first), model_to_json(c.refutation->second)};
    return j;
}

// ---------------------------------------------------------------------------
// Resolutions

namespace {

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> removable(const TypeTable& table, const std::vector<int>& d) {
    std::vector<int> out;
    for (int t : d) {
        bool top = true;
        for (int s : d)
            if (s != t && table.leq(t, s)) {
                top = false;
                break;
            }
        if (top) out.push_back(t);
    }
    return out;
}

bool element_less(Formula a, Formula b) {
    const auto ca = connective_count(a), cb = connective_count(b);
    if (ca != cb) return ca < cb;
    return print(a) < print(b);
}

// Smallest formulas up to three connectives, keyed by the rank-n types forcing them.
class Prettifier {
public:
    Prettifier(TypeTable& table, unsigned n) : table_(table), n_(n) {
        FormulaLevels levels(table.atoms());
        const std::vector<int>& u = table.universe(n);
        for (unsigned s = 0; s <= 3; ++s)
            for (Formula f : levels.level(s)) {
                if (c_arrow(f) > n) continue;
                std::vector<int> key;
                for (int t : u)
                    if (table.forces(t, f)) key.push_back(t);
                auto it = best_.find(key);
                if (it == best_.end() || element_less(f, it->second)) best_[key] = f;
            }
    }

    Formula operator()(const std::vector<int>& d) const {
        auto it = best_.find(d);
        return it == best_.end() ? table_.downset_formula(d, n_) : it->second;
    }

private:
    TypeTable& table_;
    unsigned n_;
    std::map<std::vector<int>, Formula> best_;
};

std::vector<Formula> drop_redundant(std::vector<Formula> xs) {
    std::sort(xs.begin(), xs.end(), element_less);
    for (std::size_t i = 0; i < xs.size();) {
        std::vector<Formula> rest;
        for (std::size_t j = 0; j < xs.size(); ++j)
            if (j != i) rest.push_back(xs[j]);
        if (!rest.empty() && provable({xs[i]}, Formula::disj(rest)))
            xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return xs;
}

}  // namespace

Resolution resolution(Formula a, const AtomSet& par, Flavor flavor, const ResolutionOptions& opt) {
    const AtomSet p = effective_par(a, par);
    const AtomSet atoms = atoms_of(a).unite(p);
    const unsigned n = std::max<unsigned>(c_arrow(a), 1 + static_cast<unsigned>(p.size()));
    Resolution res;
    res.subject = a;
    res.flavor = flavor;
    res.rank = n;

    TypeTable table(atoms, opt.type_budget);
    const std::vector<int> g = table.universe_forcing(n, a);
    std::optional<Prettifier> pretty;
    if (opt.prettify && atoms.size() <= 3) {
        try {
            pretty.emplace(table, n);
        } catch (const BudgetExceeded&) {
        }
    }
    auto formula_of = [&](const std::vector<int>& d) {
        if (d == g) return a;
        return pretty ? (*pretty)(d) : simplify(table.downset_formula(d, n));
    };

    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<int>> found;
    std::set<std::vector<int>> level;
    if (!g.empty()) level.insert(g);
    std::size_t visited = 0;
    while (!level.empty()) {
        std::set<std::vector<int>> next;
        for (const auto& d : level) {
            if (std::any_of(found.begin(), found.end(), [&](const auto& f) { return subset(d, f); })) continue;
            if (++visited > opt.downset_budget)
                throw BudgetExceeded("resolution search exceeded " + std::to_string(opt.downset_budget) + " candidates");
            if (std::chrono::steady_clock::now() - start > std::chrono::duration<double>(opt.max_seconds))
                throw BudgetExceeded("resolution search exceeded " + std::to_string(opt.max_seconds) + " s");
            if (is_projective(formula_of(d), p, false).projective) {
                found.push_back(d);
                continue;
            }
            for (int t : removable(table, d)) {
                if (d.size() == 1) continue;
                std::vector<int> c;
                for (int s : d)
                    if (s != t) c.push_back(s);
                next.insert(std::move(c));
            }
        }
        level = std::move(next);
    }

    // Independence is automatic for maximal downsets; redundancy is decided on types.
    std::vector<Formula> found_formulas;
    for (const auto& d : found) found_formulas.push_back(formula_of(d));
    std::vector<std::size_t> order(found.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return element_less(found_formulas[i], found_formulas[j]); });
    std::vector<std::size_t> keep = order;
    for (std::size_t pos = 0; pos < keep.size();) {
        std::set<int> rest;
        for (std::size_t q = 0; q < keep.size(); ++q)
            if (q != pos) rest.insert(found[keep[q]].begin(), found[keep[q]].end());
        const auto& d = found[keep[pos]];
        if (std::all_of(d.begin(), d.end(), [&](int t) { return rest.count(t) > 0; }))
            keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(pos));
        else
            ++pos;
    }
    for (std::size_t i : keep) res.elements.push_back(found_formulas[i]);

    if (flavor == Flavor::PrimeNnilPar) {
        std::vector<Formula> parts;
        for (Formula e : res.elements) {
            const ProjectivityCertificate c = is_projective(e, p, false);
            for (Formula comp : decompose_components(*c.projection)) {
                const Formula f = simplify(Formula::conj(e, comp));
                if (provable({f}, Formula::bot())) continue;
                if (std::find_if(parts.begin(), parts.end(), [&](Formula g) { return equiv(f, g); }) == parts.end())
                    parts.push_back(f);
            }
        }
        std::vector<Formula> indep;
        for (Formula f : parts) {
            bool dominated = false;
            for (Formula g : parts)
                if (g != f && provable({f}, g) && !provable({g}, f)) dominated = true;
            if (!dominated) indep.push_back(f);
        }
        res.elements = drop_redundant(std::move(indep));
    }

    for (Formula e : res.elements) res.witnesses.push_back(is_projective(e, p, opt.cross_check));
    return res;
}

Formula glb_proj(Formula a, const AtomSet& par, const ResolutionOptions& opt) {
    return simplify(Formula::disj(resolution(a, par, Flavor::NnilPar, opt).elements));
}

std::string verify_resolution(const Resolution& r, const AtomSet& par) {
    const AtomSet p = effective_par(r.subject, par);
    const unsigned bound = std::max<unsigned>(c_arrow(r.subject), 1 + static_cast<unsigned>(p.size()));
    const auto& es = r.elements;
    if (r.witnesses.size() != es.size()) return "witness count differs from element count";
    for (std::size_t i = 0; i < es.size(); ++i) {
        for (std::size_t j = 0; j < es.size(); ++j)
            if (i != j && provable({es[i]}, es[j])) return "elements " + print(es[i]) + " and " + print(es[j]) + " are dependent";
        if (provable({es[i]}, Formula::bot())) return "inconsistent element " + print(es[i]);
        if (c_arrow(es[i]) > bound) return "element " + print(es[i]) + " exceeds the implication-depth bound";
        const ProjectivityCertificate& c = r.witnesses[i];
        if (c.subject != es[i] || !c.projective) return "element " + print(es[i]) + " lacks a projectivity certificate";
        if (std::string why = verify_certificate(c, p); !why.empty()) return why;
        if (r.flavor == Flavor::PrimeNnilPar && !is_prime_nnil(*c.projection))
            return "projection of " + print(es[i]) + " is not prime";
    }
    if (!provable({Formula::disj(es)}, r.subject)) return "disjunction of the elements does not imply the subject";
    return "";
}

nlohmann::json resolution_to_json(const Resolution& r) {
    nlohmann::json j;
    j["subject"] = print(r.subject);
    j["flavor"] = r.flavor == Flavor::NnilPar ? "nnilpar" : "prime-nnilpar";
    j["rank"] = r.rank;
    j["elements"] = nlohmann::json::array();
    for (Formula e : r.elements) j["elements"].push_back(print(e));
    j["witnesses"] = nlohmann::json::array();
    for (const auto& c : r.witnesses) j["witnesses"].push_back(certificate_to_json(c));
    return j;
}

}  // namespace relunif

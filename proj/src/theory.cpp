#include "relunif/theory.hpp"

#include <set>

#include "relunif/errors.hpp"
#include "relunif/nnil.hpp"

namespace relunif {

Formula nnil_theory(const KripkeModel& k, const AtomSet& atoms) {
    const RepSet& rs = nnil_reps(atoms);
    Forcing forcing(k);
    Signature acc(rs.sigs.at(0).size(), ~0ULL);
    for (std::size_t i = 0; i < rs.size(); ++i)
        if (forcing.root(rs.reps[i])) acc = rs.meet(acc, rs.sigs[i]);
    if (auto f = rs.find(acc)) return *f;
    throw Error("NNIL representatives are not closed under conjunction");
}

bool is_submodel(const KripkeModel& k1, const KripkeModel& k2, const AtomSet& atoms) {
    return forces(k1, nnil_theory(k2, atoms));
}

ExtendibilityReport check_class_extendible(const std::vector<KripkeModel>& models, const AtomSet& protected_atoms) {
    std::set<std::string> codes;
    AtomSet all;
    for (const auto& m : models) {
        codes.insert(bisim_code(m));
        all = all.unite(m.atoms());
    }
    const AtomSet free_atoms = all.minus(protected_atoms);
    for (std::size_t h = 0; h < models.size(); ++h) {
        const KripkeModel& host = models[h];
        std::vector<int> below;
        for (std::size_t i = 0; i < models.size(); ++i)
            if (embeds(models[i], host, protected_atoms)) below.push_back(static_cast<int>(i));
        if (below.size() > 20) throw BudgetExceeded("too many class members below one host");
        for (std::uint64_t mask = 1; mask < (1ULL << below.size()); ++mask) {
            std::vector<KripkeModel> family;
            std::vector<int> ids;
            for (std::size_t j = 0; j < below.size(); ++j)
                if (mask >> j & 1u) {
                    family.push_back(models[below[j]]);
                    ids.push_back(below[j]);
                }
            const KripkeModel s = sum(family, &host, protected_atoms);
            AtomSet room = free_atoms;
            for (int c : s.children(0)) room = room.intersect(s.valuation(c));
            const AtomSet fixed = s.valuation(0).intersect(protected_atoms);
            const std::vector<Atom> choices = room.items();
            bool found = false;
            for (std::uint64_t r = 0; r < (1ULL << choices.size()) && !found; ++r) {
                AtomSet root = fixed;
                for (std::size_t j = 0; j < choices.size(); ++j)
                    if (r >> j & 1u) root.insert(choices[j]);
                found = codes.count(bisim_code(variant(s, protected_atoms, root))) > 0;
            }
            if (!found) return {false, static_cast<int>(h), ids};
        }
    }
    return {};
}

bool is_class_extendible(const std::vector<KripkeModel>& models, const AtomSet& protected_atoms) {
    return check_class_extendible(models, protected_atoms).extendible;
}

}  // namespace relunif

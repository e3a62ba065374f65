#include "relunif/enumerate.hpp"

#include <algorithm>
#include <optional>

#include "relunif/errors.hpp"

namespace relunif {

namespace {
constexpr std::size_t kBatch = 1024;
}

FormulaLevels::FormulaLevels(AtomSet atoms) : atoms_(std::move(atoms)) {}

std::uint64_t FormulaLevels::count(unsigned s) const {
    std::vector<long double> c(s + 1, 0);
    for (unsigned k = 0; k <= s; ++k) {
        if (k == 0) {
            c[0] = static_cast<long double>(atoms_.size());
            continue;
        }
        long double t = k == 1 ? 1 : 0;
        for (unsigned i = 0; i + 1 <= k; ++i) t += 3 * c[i] * c[k - 1 - i];
        c[k] = t;
    }
    return c[s] > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(c[s]);
}

const std::vector<Formula>& FormulaLevels::level(unsigned s) {
    while (levels_.size() <= s) {
        const unsigned k = static_cast<unsigned>(levels_.size());
        std::vector<Formula> out;
        if (k == 0) {
            for (Atom a : atoms_) out.push_back(Formula::atom(a));
        } else {
            if (k == 1) out.push_back(Formula::bot());
            for (unsigned i = 0; i + 1 <= k; ++i) {
                const unsigned j = k - 1 - i;
                for (Formula l : levels_[i])
                    for (Formula r : levels_[j]) {
                        out.push_back(Formula::conj(l, r));
                        out.push_back(Formula::disj(l, r));
                        out.push_back(Formula::imp(l, r));
                    }
            }
        }
        levels_.push_back(std::move(out));
    }
    return levels_[s];
}

bool FormulaLevels::for_each(unsigned s, const std::function<bool(Formula)>& fn, bool scratch) {
    if (s < levels_.size() || s <= 1) {
        for (Formula f : level(s))
            if (!fn(f)) return false;
        return true;
    }
    for (unsigned i = 0; i + 1 <= s; ++i) level(i);
    for (unsigned i = 0; i + 1 <= s; ++i) {
        const unsigned j = s - 1 - i;
        const auto& rights = levels_[j];
        for (Formula l : levels_[i])
            for (std::size_t lo = 0; lo < rights.size(); lo += kBatch) {
                std::optional<ScratchScope> scope;
                if (scratch) scope.emplace();
                const std::size_t hi = std::min(rights.size(), lo + kBatch);
                for (std::size_t k = lo; k < hi; ++k) {
                    const Formula r = rights[k];
                    if (!fn(Formula::conj(l, r))) return false;
                    if (!fn(Formula::disj(l, r))) return false;
                    if (!fn(Formula::imp(l, r))) return false;
                }
            }
    }
    return true;
}

namespace {

Formula grow(std::mt19937_64& rng, const std::vector<Formula>& leaves, unsigned size) {
    if (size == 0) return leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
    if (size == 1 && std::uniform_int_distribution<int>(0, 9)(rng) == 0) return Formula::bot();
    const unsigned left = std::uniform_int_distribution<unsigned>(0, size - 1)(rng);
    Formula l = grow(rng, leaves, left);
    Formula r = grow(rng, leaves, size - 1 - left);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0:
            return Formula::conj(l, r);
        case 1:
            return Formula::disj(l, r);
        default:
            return Formula::imp(l, r);
    }
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, const AtomSet& atoms, unsigned size) {
    if (atoms.empty()) throw InputError("random formula over an empty atom set");
    std::vector<Formula> leaves;
    for (Atom a : atoms) leaves.push_back(Formula::atom(a));
    return grow(rng, leaves, size);
}

}  // namespace relunif

#include "relunif/sweep.hpp"

#include <algorithm>
#include <unordered_map>

#include <omp.h>

#include "relunif/errors.hpp"
#include "relunif/prover.hpp"

namespace relunif {

ModelBank::ModelBank(AtomSet atoms, std::size_t max_nodes) : atoms_(std::move(atoms)) {
    if (max_nodes > 32) throw BudgetExceeded("model banks hold models of at most 32 nodes");
    models_ = enumerate_models(atoms_, max_nodes);
    compile();
}

ModelBank::ModelBank(std::vector<KripkeModel> models, AtomSet atoms)
    : atoms_(std::move(atoms)), models_(std::move(models)) {
    for (const auto& k : models_)
        if (k.size() > 32) throw BudgetExceeded("model banks hold models of at most 32 nodes");
    compile();
}

void ModelBank::compile() {
    const std::size_t na = atoms_.size();
    val_.assign(models_.size() * na, 0);
    for (std::size_t m = 0; m < models_.size(); ++m) {
        const KripkeModel& k = models_[m];
        base_.push_back(static_cast<std::uint32_t>(up_.size()));
        all_.push_back(k.size() == 32 ? ~0u : (1u << k.size()) - 1);
        for (std::size_t w = 0; w < k.size(); ++w) {
            std::uint32_t mask = 0;
            for (int u : k.up(static_cast<int>(w))) mask |= 1u << u;
            up_.push_back(mask);
            for (std::size_t a = 0; a < na; ++a)
                if (k.valuation(static_cast<int>(w)).contains(atoms_.items()[a])) val_[m * na + a] |= 1u << w;
        }
    }
}

namespace {

// Subformulas with child positions, children first.
struct Plan {
    std::vector<Formula> f;
    std::vector<int> l, r;
    std::vector<int> atom;  // index into the bank atoms, or -1

    Plan(Formula root, const AtomSet& atoms) : f(subformulas(root)) {
        std::unordered_map<Formula, int, FormulaHash> pos;
        for (std::size_t i = 0; i < f.size(); ++i) pos.emplace(f[i], static_cast<int>(i));
        l.assign(f.size(), -1);
        r.assign(f.size(), -1);
        atom.assign(f.size(), -1);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i].is_atom()) {
                auto it = std::lower_bound(atoms.begin(), atoms.end(), f[i].atom());
                if (it != atoms.end() && *it == f[i].atom()) atom[i] = static_cast<int>(it - atoms.begin());
            } else if (!f[i].is_bot()) {
                l[i] = pos.at(f[i].lhs());
                r[i] = pos.at(f[i].rhs());
            }
        }
    }
};

}  // namespace

static std::uint32_t eval_plan(const Plan& p, std::vector<std::uint32_t>& v, const std::uint32_t* up, std::size_t nodes,
                               const std::uint32_t* val, std::uint32_t all) {
    v.resize(p.f.size());
    for (std::size_t i = 0; i < p.f.size(); ++i) {
        std::uint32_t out = 0;
        switch (p.f[i].kind()) {
            case Kind::Bot:
                break;
            case Kind::Var:
            case Kind::Par:
                out = p.atom[i] >= 0 ? val[p.atom[i]] : 0;
                break;
            case Kind::And:
                out = v[p.l[i]] & v[p.r[i]];
                break;
            case Kind::Or:
                out = v[p.l[i]] | v[p.r[i]];
                break;
            case Kind::Imp: {
                const std::uint32_t bad = v[p.l[i]] & ~v[p.r[i]];
                for (std::size_t w = 0; w < nodes; ++w)
                    if ((up[w] & bad) == 0) out |= 1u << w;
                break;
            }
        }
        v[i] = out & all;
    }
    return v.back();
}

std::uint32_t ModelBank::forcing_mask(std::size_t i, Formula f) const {
    const Plan p(f, atoms_);
    std::vector<std::uint32_t> v;
    return eval_plan(p, v, &up_[base_[i]], models_[i].size(), val_.data() + i * atoms_.size(), all_[i]);
}

long ModelBank::first_refuter(Formula f) const {
    const Plan p(f, atoms_);
    std::vector<std::uint32_t> v;
    for (std::size_t i = 0; i < models_.size(); ++i)
        if (!(eval_plan(p, v, &up_[base_[i]], models_[i].size(), val_.data() + i * atoms_.size(), all_[i]) & 1u))
            return static_cast<long>(i);
    return -1;
}

std::vector<long> refuters_serial(const ModelBank& bank, const std::vector<Formula>& fs) {
    std::vector<long> out(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) out[i] = bank.first_refuter(fs[i]);
    return out;
}

std::vector<long> refuters_parallel(const ModelBank& bank, const std::vector<Formula>& fs, int jobs) {
    std::vector<long> out(fs.size());
    const long long n = static_cast<long long>(fs.size());
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = bank.first_refuter(fs[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<char> theorems_serial(const std::vector<Formula>& fs) {
    std::vector<char> out(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) out[i] = provable(fs[i]) ? 1 : 0;
    return out;
}

std::vector<char> theorems_parallel(const std::vector<Formula>& fs, int jobs) {
    std::vector<char> out(fs.size());
    const long long n = static_cast<long long>(fs.size());
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = provable(fs[static_cast<std::size_t>(i)]) ? 1 : 0;
    return out;
}

}  // namespace relunif

#pragma once

#include <cstdint>
#include <vector>

#include "relunif/formula.hpp"
#include "relunif/kripke.hpp"

namespace relunif {

// Every tree model over `atoms` with at most `max_nodes` nodes, compiled to bit masks so
// that one formula is evaluated on the whole bank in a single bottom-up pass.
class ModelBank {
public:
    ModelBank(AtomSet atoms, std::size_t max_nodes);
    explicit ModelBank(std::vector<KripkeModel> models, AtomSet atoms);

    std::size_t size() const { return models_.size(); }
    const KripkeModel& model(std::size_t i) const { return models_[i]; }
    const AtomSet& atoms() const { return atoms_; }

    // Node set forcing f in model i.
    std::uint32_t forcing_mask(std::size_t i, Formula f) const;
    // Index of the first model whose root refutes f, or -1.
    long first_refuter(Formula f) const;

private:
    void compile();

    AtomSet atoms_;
    std::vector<KripkeModel> models_;
    std::vector<std::uint32_t> up_;     // per node, offset by base_
    std::vector<std::uint32_t> val_;    // per model and atom
    std::vector<std::uint32_t> base_;   // first node of each model
    std::vector<std::uint32_t> all_;    // full node mask of each model
};

// Serial reference and OpenMP kernel; identical results.
std::vector<long> refuters_serial(const ModelBank& bank, const std::vector<Formula>& fs);
std::vector<long> refuters_parallel(const ModelBank& bank, const std::vector<Formula>& fs, int jobs = 0);

// Prover verdicts (1 for theorems) for a batch, serial and OpenMP.
std::vector<char> theorems_serial(const std::vector<Formula>& fs);
std::vector<char> theorems_parallel(const std::vector<Formula>& fs, int jobs = 0);

}  // namespace relunif

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relunif/formula.hpp"
#include "relunif/kripke.hpp"

namespace relunif {

struct ProofResult {
    bool theorem = false;
    std::optional<KripkeModel> countermodel;  // present iff !theorem
};

// Decides ⋀assumptions → goal in IPC. Non-theorems come with a finite tree model whose
// root forces every assumption and refutes the goal. Results are cached process-wide.
ProofResult prove(const std::vector<Formula>& assumptions, Formula goal);
ProofResult prove(Formula goal);
bool provable(const std::vector<Formula>& assumptions, Formula goal);
bool provable(Formula goal);
bool equiv(Formula a, Formula b);
// Decided for NNIL inputs through component decomposition; throws UnsupportedInput otherwise.
bool is_prime(Formula a);

// The uncached search, exposed for tests and benchmarks.
ProofResult prove_uncached(const std::vector<Formula>& assumptions, Formula goal);

struct ProverStats {
    std::uint64_t calls = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t worlds = 0;
};
ProverStats prover_stats();
void clear_prover_cache();

}  // namespace relunif

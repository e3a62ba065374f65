#pragma once

#include <cstdint>
#include <tuple>

#include "relunif/formula.hpp"

namespace relunif {

struct Omega {
    std::uint64_t i_measure = 0;
    std::uint64_t connectives = 0;
    std::uint64_t var_occurrences = 0;
    friend auto operator<=>(const Omega&, const Omega&) = default;
};

struct Classification {
    bool is_nnil = false;
    bool is_ni = false;
    unsigned c_arrow = 0;
    Omega omega;
};

bool is_ni(Formula f);
bool is_nnil(Formula f);
// True when f is NNIL and mentions no variables.
bool is_param_nnil(Formula f);
// ⊤ counts as atomic.
unsigned c_arrow(Formula f);
// Occurrence counts are taken over the formula tree and saturate at UINT64_MAX.
// Connectives are the occurrences of ∧, ∨, → and ⊥.
std::uint64_t connective_count(Formula f);
std::uint64_t var_occurrences(Formula f);
std::uint64_t i_measure(Formula f);
Omega omega(Formula f);
Classification classify(Formula f);

Formula itp(Formula b, Formula e);
Formula itap(Formula a, Formula b);
Formula itapp(Formula a, Formula b);
Formula drop(Formula a, Formula c);

// Unit/absorption rewriting valid in IPC: ⊤/⊥ units, idempotence, A→A, ⊤→A.
// Preserves NNIL membership and never introduces atoms.
Formula simplify(Formula f);

}  // namespace relunif

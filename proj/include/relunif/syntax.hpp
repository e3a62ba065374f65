#pragma once

#include <string>
#include <string_view>

#include "relunif/formula.hpp"

namespace relunif {

// Grammar: atoms [a-z][a-zA-Z0-9_]*, parameters prefixed by '#', literals false/true,
// operators ~ > & > | > -> with -> right-associative and & | left-associative.
Formula parse(std::string_view text);

// Minimal parentheses; A -> false prints as ~A and false -> false as true.
std::string print(Formula f);

// Strict atom-list syntax "x,#p,y" used by the CLI.
AtomSet parse_atoms(std::string_view text);
std::string print(const AtomSet& atoms);

}  // namespace relunif

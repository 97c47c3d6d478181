#pragma once

#include <iosfwd>
#include <string>

#include "mines/grid.hpp"

namespace mines {

// Exit codes: 0 success, 1 verification or solving failure, 2 usage or parse error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Exactly-k cardinality for every clue, expanded into plain clauses.
std::string export_dimacs(const Board& b);

}  // namespace mines

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mines/grid.hpp"

namespace mines {

struct Pin {
    Coord at;
    bool mine = true;
};

struct Limits {
    std::size_t max_covered = 64;
    std::size_t max_solutions = 1'000'000;
};

class PinError : public std::runtime_error {
public:
    explicit PinError(Coord c)
        : std::runtime_error("pin on non-covered cell " + to_string(c)), at(c) {}
    Coord at;
};

class LimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptySolutionSet : public std::runtime_error {
public:
    EmptySolutionSet() : std::runtime_error("board has no consistent assignment") {}
};

// One row per solution; values[i] is true iff coords[i] is a mine.
using Assignment = std::vector<bool>;

struct SolutionSet {
    std::vector<Coord> coords;  // covered cells, canonical order
    std::vector<Assignment> solutions;

    std::size_t size() const { return solutions.size(); }
    bool empty() const { return solutions.empty(); }
    std::size_t index_of(Coord c) const;  // throws UnknownCoord
};

struct PartialAssignment {
    std::map<Coord, bool> decided;
    std::set<Coord> undecided;

    static PartialAssignment blank(const Board& b);
};

// Fixpoint of the two single-clue rules; nullopt means contradiction.
std::optional<PartialAssignment> propagate(const Board& b, const PartialAssignment& start);

SolutionSet enumerate_solutions(const Board& b, const std::vector<Pin>& pins = {},
                                const Limits& limits = {});
std::uint64_t count_solutions(const Board& b, const std::vector<Pin>& pins = {},
                              const Limits& limits = {});
// Visits solutions in canonical order without storing them; the callback
// returns false to stop early.
void for_each_solution(const Board& b, const std::vector<Pin>& pins, const Limits& limits,
                       const std::function<bool(const std::vector<Coord>&, const Assignment&)>& f);

std::map<Coord, bool> forced_cells(const SolutionSet& s);
std::set<std::vector<bool>> project_solutions(const SolutionSet& s,
                                              const std::vector<Coord>& cells);
bool satisfies(const Board& b, const std::vector<Coord>& coords, const Assignment& a);

struct ClaimResult {
    enum class Kind { ForcedMine, LabelConsistency };
    Kind kind;
    std::string claim;
    bool pass = false;
    std::string detail;
};

struct ClaimReport {
    std::vector<ClaimResult> results;
    std::size_t solutions = 0;

    bool pass() const;
    bool pass(ClaimResult::Kind kind) const;
};

ClaimReport check_claims(const Board& b, const Limits& limits = {});

std::string dump_solutions(const SolutionSet& s);

}  // namespace mines

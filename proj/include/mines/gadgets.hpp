#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mines/grid.hpp"
#include "mines/solver.hpp"

namespace mines {

struct Port {
    enum class Role { Input, Output };
    Role role = Role::Input;
    Coord var;   // carries the signal (mine = T)
    Coord comp;  // carries its complement; always var - dir
    Coord dir;   // unit step in the direction of travel
    int phase = 0;
    std::string name;  // label at var, if any

    friend bool operator==(const Port&, const Port&) = default;
};

// Cells with dot(p, axis) >= cut move by k * length * axis when a wire is
// lengthened by k periods; the window [cut - length, cut) is repeated into
// the gap.
struct Period {
    Coord axis;
    int cut = 0;
    int length = 3;
    friend bool operator==(const Period&, const Period&) = default;
};

struct Gadget {
    std::string name;
    Board footprint;
    std::vector<Port> ports;
    std::optional<Period> period;

    std::vector<const Port*> inputs() const;
    std::vector<const Port*> outputs() const;
    friend bool operator==(const Gadget&, const Gadget&) = default;
};

// Square: rotation in quarter turns; hex: rotation in sixth turns. The
// mirror is applied before the rotation.
struct Placement {
    Coord offset;
    int rotation = 0;
    bool mirror = false;
};

class UnknownGadget : public std::runtime_error {
public:
    explicit UnknownGadget(const std::string& name)
        : std::runtime_error("unknown gadget '" + name + "'") {}
};

class OverlapConflict : public std::runtime_error {
public:
    OverlapConflict(Coord c, const std::string& why)
        : std::runtime_error("overlap conflict at " + to_string(c) + ": " + why), at(c) {}
    Coord at;
};

class NotPeriodic : public std::runtime_error {
public:
    explicit NotPeriodic(const std::string& name)
        : std::runtime_error("gadget '" + name + "' has no period descriptor") {}
};

class InconsistentUnderPin : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int dot(Coord a, Coord b);
int phase_of(Coord var, Coord dir);

Coord apply_linear(GridKind g, Coord p, int rotation, bool mirror);
Coord apply_placement(GridKind g, Coord p, const Placement& pl);

const std::vector<std::string>& catalog_names();
Gadget get_gadget(const std::string& name);
Gadget parse_gadget(std::string_view text, const std::string& name);
std::string serialize_gadget(const Gadget& g);

Gadget transform_gadget(const Gadget& g, const Placement& p);
// Merges `piece` into `into`. Identical cells unify; a clue may not gain a
// non-clue neighbour it did not already have on its own side.
Board merge_boards(const Board& into, const Board& piece);
void merge_into(Board& into, const Board& piece);
Board instantiate(const Gadget& g, const Placement& p, const Board& into);
Gadget extend_wire(const Gadget& g, int periods);
// A wire segment open at both ends, cut from the repeating pattern of `g`:
// the input var sits on g's output var and the output var `periods` units
// further along the axis. Border clues keep their pattern neighbours, which
// become unlabelled covered cells where they leave the segment.
Gadget open_wire(const Gadget& g, int periods);

// Inputs and outputs bind to the gadget's input and output ports in order;
// internals are label names. Each row maps an input tuple to the admissible
// (internals..., outputs...) tuples.
struct TruthTable {
    std::vector<std::string> inputs;
    std::vector<std::string> internals;
    std::vector<std::string> outputs;
    std::map<std::vector<bool>, std::set<std::vector<bool>>> rows;
};

std::optional<TruthTable> expected_table(const std::string& gadget_name);

struct VerifyRow {
    std::vector<bool> inputs;
    std::set<std::vector<bool>> expected;
    std::set<std::vector<bool>> observed;
    bool inconsistent = false;  // no solution under this pinning
    bool pass = false;
};

struct VerifyReport {
    std::string gadget;
    std::vector<std::string> columns;
    std::vector<VerifyRow> rows;
    bool pass() const;
};

VerifyReport verify_gadget(const Gadget& g, const TruthTable& expected, const Limits& limits = {});

// Value of a named label in one solution: the first plain label cell in
// canonical order, else the complement of the first primed one.
bool label_value(const Board& b, const SolutionSet& s, std::size_t solution,
                 const std::string& name);

struct LoopbackReport {
    std::set<std::pair<bool, bool>> pairs;
    bool full_support() const { return pairs.size() == 4; }
};

LoopbackReport loopback_independence(const Gadget& g, const Port& a, const Port& b,
                                     const Limits& limits = {});

// Two copies of a NOT gadget joined output to input: the signal keeps its
// value while its phase moves by one cell.
Gadget compose_phase_changer(const std::string& not_name, const std::string& name);

Limits gadget_limits();
std::string format_bits(const std::vector<bool>& bits);

}  // namespace mines

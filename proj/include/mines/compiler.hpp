#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mines/gadgets.hpp"
#include "mines/grid.hpp"

namespace mines {

enum class GateKind { And, Or, Not };

struct Gate {
    std::string net;  // the net this gate drives
    GateKind kind = GateKind::And;
    std::vector<std::string> operands;
};

struct Netlist {
    std::vector<std::string> inputs;
    std::vector<Gate> gates;  // topologically ordered
    std::vector<std::string> outputs;
    // (output, input) pairs to wire back; a bare `loopback` flag on an
    // output pairs it with the first declared input.
    std::vector<std::pair<std::string, std::string>> loopbacks;
};

class NetlistError : public std::runtime_error {
public:
    NetlistError(int line, const std::string& reason)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + reason : reason),
          line(line) {}
    int line;
};
class UnknownNet : public NetlistError {
public:
    using NetlistError::NetlistError;
};
class CycleError : public NetlistError {
public:
    using NetlistError::NetlistError;
};
class ArityError : public NetlistError {
public:
    using NetlistError::NetlistError;
};

class RoutingFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GridMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Statements end at ';' or a newline: `in u;`, `n1 = AND u v;`, `out n1 [loopback];`.
// Gates wider than two operands are expanded into balanced trees.
Netlist parse_netlist(std::string_view text);

// One placed piece. Wire segments are cut from the grid's periodic wire
// (`periods` > = 0); everything else is a catalog gadget. Wire cells are
// labelled with their net; gate internals keep their labels under a
// "<net>." prefix; other labels are dropped.
struct PlacedPiece {
    std::string gadget;
    Placement placement;
    int periods = -1;
    std::string net;
    std::string label_prefix;
};

struct Junction {
    Coord var;
    Coord comp;
    Coord dir;
    int out_phase = 0;
    int in_phase = 0;
};

struct Layout {
    GridKind grid = GridKind::Hex;
    std::vector<PlacedPiece> pieces;
    std::vector<Junction> junctions;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    int spacing = 0;
    // Filled by place_and_route so that a loop-back can be attached later.
    struct TrackEnd {
        std::string net;
        Coord head;  // last var cell of the open east end
    };
    std::vector<TrackEnd> open_ends;  // top to bottom
    struct TrackStart {
        std::string net;
        Coord var;  // first var cell of the input wire
        std::size_t piece;  // index of the input's starting piece
    };
    std::vector<TrackStart> starts;  // top to bottom
    std::map<std::string, std::string> loopback;  // output net -> input net
};

Layout place_and_route(const Netlist& n, GridKind grid);
Board emit_board(const Layout& l);
Board compile(std::string_view text, GridKind grid);
Layout apply_loopback(const Layout& l, const std::string& output, const std::string& input);

// Structural phase check over every junction, independent of the solver.
bool phases_match(const Layout& l);

// Gadget pieces used by the router that are not catalog entries.
Gadget build_piece(GridKind grid, const std::string& name, int periods);

// Direct evaluation of the netlist, for oracle comparisons.
std::map<std::string, bool> evaluate(const Netlist& n, const std::map<std::string, bool>& inputs);

}  // namespace mines

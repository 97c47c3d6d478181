#include "doctest.h"

#include <algorithm>
#include <random>

#include "mines/compiler.hpp"
#include "mines/solver.hpp"
#include "support.hpp"

using namespace mines;

namespace {

// Input/output value tuples read through the net labels of every solution.
std::set<std::vector<bool>> label_projection(const Board& b, const std::vector<std::string>& names) {
    SolutionSet s = enumerate_solutions(b, {}, Limits{100000, 100000});
    std::set<std::vector<bool>> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<bool> row;
        for (const auto& n : names) row.push_back(label_value(b, s, i, n));
        out.insert(row);
    }
    return out;
}

std::set<std::vector<bool>> function_graph(const Netlist& n) {
    std::set<std::vector<bool>> out;
    for (unsigned m = 0; m < (1u << n.inputs.size()); ++m) {
        std::map<std::string, bool> in;
        std::vector<bool> row;
        for (std::size_t i = 0; i < n.inputs.size(); ++i) {
            in[n.inputs[i]] = (m >> i) & 1;
            row.push_back(in[n.inputs[i]]);
        }
        auto v = evaluate(n, in);
        for (const auto& o : n.outputs) row.push_back(v.at(o));
        out.insert(row);
    }
    return out;
}

// Pins every input start, then checks that all solutions carry the
// evaluated values at every open output end, and that there is one.
void check_function(const Netlist& n, const Layout& l) {
    Board b = emit_board(l);
    for (unsigned m = 0; m < (1u << n.inputs.size()); ++m) {
        std::map<std::string, bool> in;
        for (std::size_t i = 0; i < n.inputs.size(); ++i) in[n.inputs[i]] = (m >> i) & 1;
        std::vector<Pin> pins;
        for (const auto& s : l.starts) pins.push_back({s.var, in.at(s.net)});
        auto want = evaluate(n, in);
        std::size_t count = 0;
        bool ok = true;
        for_each_solution(b, pins, Limits{100000, 100000},
                          [&](const std::vector<Coord>& coords, const Assignment& a) {
                              ++count;
                              for (const auto& e : l.open_ends) {
                                  auto it = std::lower_bound(coords.begin(), coords.end(), e.head);
                                  if (a[static_cast<std::size_t>(it - coords.begin())] != want.at(e.net)) ok = false;
                              }
                              return ok;
                          });
        CHECK(count > 0);
        CHECK(ok);
    }
}

std::string random_netlist(std::mt19937& rng) {
    int ni = 1 + static_cast<int>(rng() % 3), ng = 1 + static_cast<int>(rng() % 3);
    std::vector<std::string> nets;
    std::string t;
    for (int i = 0; i < ni; ++i) {
        nets.push_back(std::string(1, static_cast<char>('a' + i)));
        t += "in " + nets.back() + "; ";
    }
    for (int g = 0; g < ng; ++g) {
        std::string name = "g" + std::to_string(g);
        const std::string& a = nets[rng() % nets.size()];
        const std::string& b = nets[rng() % nets.size()];
        switch (rng() % 3) {
            case 0: t += name + " = NOT " + a + "; "; break;
            case 1: t += name + " = AND " + a + " " + b + "; "; break;
            default: t += name + " = OR " + a + " " + b + "; "; break;
        }
        nets.push_back(name);
    }
    t += "out " + nets.back() + ";";
    if (rng() % 3 == 0) t += " out " + nets[rng() % (nets.size() - 1)] + ";";
    return t;
}

}  // namespace

TEST_CASE("netlists parse in prefix and infix form") {
    Netlist n = parse_netlist("in u; in v # two inputs\nin w\nn1 = AND u v\nn2 = NOT w; n3 = n1 OR n2\nout n3\n");
    CHECK(n.inputs == std::vector<std::string>{"u", "v", "w"});
    REQUIRE(n.gates.size() == 3);
    CHECK(n.gates[2].kind == GateKind::Or);
    CHECK(n.gates[2].operands == std::vector<std::string>{"n1", "n2"});
    CHECK(n.outputs == std::vector<std::string>{"n3"});
    CHECK(n.loopbacks.empty());
}

TEST_CASE("definitions may come in any order") {
    Netlist n = parse_netlist("in a; out c; c = NOT b; b = NOT a;");
    REQUIRE(n.gates.size() == 2);
    CHECK(n.gates[0].net == "b");
    CHECK(evaluate(n, {{"a", true}}).at("c") == true);
}

TEST_CASE("wide gates become balanced two-input trees") {
    Netlist n = parse_netlist("in a; in b; in c; in d; s = AND a b c d; out s");
    CHECK(n.gates.size() == 3);
    for (const auto& g : n.gates) CHECK(g.operands.size() == 2);
    for (unsigned m = 0; m < 16; ++m) {
        std::map<std::string, bool> in{{"a", m & 1}, {"b", m & 2}, {"c", m & 4}, {"d", m & 8}};
        CHECK(evaluate(n, in).at("s") == (m == 15));
    }
}

TEST_CASE("netlist errors") {
    CHECK_THROWS_AS(parse_netlist("in a; b = AND a c; out b"), UnknownNet);
    CHECK_THROWS_AS(parse_netlist("in a; out z"), UnknownNet);
    CHECK_THROWS_AS(parse_netlist("in a; b = AND a c; c = NOT b; out c"), CycleError);
    CHECK_THROWS_AS(parse_netlist("in a; b = NOT a a; out b"), ArityError);
    CHECK_THROWS_AS(parse_netlist("in a; b = AND a; out b"), ArityError);
    CHECK_THROWS_AS(parse_netlist("in a; b = XOR a a; out b"), ParseError);
    CHECK_THROWS_AS(parse_netlist("in a; in a; out a"), ParseError);
}

TEST_CASE("a netlist of wires passes inputs straight through") {
    for (GridKind grid : {GridKind::Hex, GridKind::Square}) {
        Board b = compile("in x; out x", grid);
        CHECK(label_projection(b, {"x", "x"}) == std::set<std::vector<bool>>{{true, true}, {false, false}});
    }
}

TEST_CASE("a square NOT inverts its input") {
    Board b = compile("in u; n = NOT u; out n", GridKind::Square);
    CHECK(label_projection(b, {"u", "n"}) == std::set<std::vector<bool>>{{true, false}, {false, true}});
}

TEST_CASE("a hexagonal AND reproduces its truth table") {
    Netlist n = parse_netlist("in u; in v; t = u AND v; out t");
    Board b = compile("in u; in v; t = u AND v; out t", GridKind::Hex);
    CHECK(label_projection(b, {"u", "v", "t"}) == function_graph(n));
}

TEST_CASE("the three-gate formula compiles on both grids") {
    const std::string text = "in u; in v; in w; n1 = AND u v; n2 = NOT w; n3 = OR n1 n2; out n3";
    Netlist n = parse_netlist(text);
    for (GridKind grid : {GridKind::Hex, GridKind::Square}) {
        Layout l = place_and_route(n, grid);
        CHECK(phases_match(l));
        Board b = emit_board(l);
        CHECK(validate_board(b).empty());
        CHECK(label_projection(b, {"u", "v", "w", "n3"}) == function_graph(n));
    }
}

TEST_CASE("compiled boards compute their netlist for every input") {
    std::mt19937 rng(11);
    int routed = 0;
    for (int i = 0; i < 40; ++i) {
        std::string text = random_netlist(rng);
        Netlist n = parse_netlist(text);
        for (GridKind grid : {GridKind::Hex, GridKind::Square}) {
            CAPTURE(text);
            Layout l;
            try {
                l = place_and_route(n, grid);
            } catch (const RoutingFailure&) {
                continue;  // needs a crossing
            }
            ++routed;
            CHECK(phases_match(l));
            check_function(n, l);
        }
    }
    CHECK(routed >= 70);
}

TEST_CASE("every gadget input in a layout is joined") {
    Layout l = place_and_route(parse_netlist("in a; in b; x = AND a b; y = NOT a; out x; out y"), GridKind::Hex);
    std::size_t inputs = 0;
    for (std::size_t i = 0; i < l.pieces.size(); ++i) {
        bool is_start = false;
        for (const auto& s : l.starts) is_start = is_start || s.piece == i;
        if (is_start) continue;
        inputs += build_piece(l.grid, l.pieces[i].gadget, l.pieces[i].periods).inputs().size();
    }
    CHECK(l.junctions.size() == inputs);
}

TEST_CASE("compilation is deterministic") {
    const std::string text = "in a; in b; x = OR a b; y = NOT x; out y; out a";
    for (GridKind grid : {GridKind::Hex, GridKind::Square})
        CHECK(serialize_board(compile(text, grid)) == serialize_board(compile(text, grid)));
}

TEST_CASE("crossings are reported as routing failures") {
    CHECK_THROWS_AS(place_and_route(parse_netlist("in a; in b; in c; g0 = AND b c; g1 = AND b b; "
                                                  "g2 = OR c g1; out g2; out g0"),
                                    GridKind::Hex),
                    RoutingFailure);
}

TEST_CASE("overlapping hand-built layouts are rejected") {
    Layout l;
    l.grid = GridKind::Hex;
    l.pieces.push_back({"hex_not", {{0, 0}, 0, false}, -1, "", ""});
    l.pieces.push_back({"hex_not", {{1, 0}, 0, false}, -1, "", ""});
    CHECK_THROWS_AS(emit_board(l), OverlapConflict);
}

TEST_CASE("loop-back wires the output to the input start") {
    Netlist n = parse_netlist("in x; out x loopback");
    REQUIRE(n.loopbacks.size() == 1);
    Layout l = place_and_route(n, GridKind::Hex);
    Layout looped = apply_loopback(l, "x", "x");
    CHECK(phases_match(looped));
    Board b = emit_board(looped);
    CHECK(validate_board(b).empty());
    const PlacedPiece& lp = looped.pieces.at(looped.starts.back().piece);
    CHECK(lp.gadget == "hex_loopback");
    Gadget g = build_piece(GridKind::Hex, "hex_loopback", -1);
    Coord s = apply_placement(GridKind::Hex, g.inputs().at(0)->var, lp.placement);
    Coord x{};
    for (const Port* p : g.outputs())
        if (p->name == "x") x = apply_placement(GridKind::Hex, p->var, lp.placement);
    SolutionSet sols = enumerate_solutions(b, {}, Limits{100000, 100000});
    CHECK(sols.size() > 0);
    // The identity circuit forces s = x.
    CHECK(project_solutions(sols, {s, x}) == std::set<std::vector<bool>>{{true, true}, {false, false}});
}

TEST_CASE("loop-back of an output that ignores x leaves the pair free") {
    Netlist n = parse_netlist("in x; in y; o = NOT y; out o loopback");
    Layout l = apply_loopback(place_and_route(n, GridKind::Hex), "o", "x");
    Board b = emit_board(l);
    const PlacedPiece& lp = l.pieces.at(l.starts.back().piece);
    Gadget g = build_piece(GridKind::Hex, "hex_loopback", -1);
    Coord s = apply_placement(GridKind::Hex, g.inputs().at(0)->var, lp.placement);
    Coord x{};
    for (const Port* p : g.outputs())
        if (p->name == "x") x = apply_placement(GridKind::Hex, p->var, lp.placement);
    SolutionSet sols = enumerate_solutions(b, {}, Limits{100000, 100000});
    CHECK(project_solutions(sols, {s, x}).size() == 4);
}

TEST_CASE("loop-back restrictions") {
    Netlist n = parse_netlist("in x; out x");
    CHECK_THROWS_AS(apply_loopback(place_and_route(n, GridKind::Square), "x", "x"), GridMismatch);
    Netlist two = parse_netlist("in a; in b; y = NOT a; out y; out b");
    Layout l = place_and_route(two, GridKind::Hex);
    const std::string inner = l.open_ends.front().net;
    CHECK_THROWS_AS(apply_loopback(l, inner, l.starts.back().net), RoutingFailure);
    CHECK_THROWS_AS(compile("in x; out x loopback", GridKind::Square), GridMismatch);
}

#include "mines/compiler.hpp"
#include "mines/solver.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace mines {

// ---------------------------------------------------------------------------
// Netlist

namespace {

std::vector<std::pair<int, std::string>> statements(std::string_view text) {
    std::vector<std::pair<int, std::string>> out;
    int lineno = 0;
    for (std::string_view line : split_lines(text)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::size_t start = 0;
        while (start <= line.size()) {
            auto semi = line.find(';', start);
            std::string_view part = line.substr(start, semi == std::string_view::npos ? semi : semi - start);
            if (part.find_first_not_of(" \t\r") != std::string_view::npos)
                out.push_back({lineno, std::string(part)});
            if (semi == std::string_view::npos) break;
            start = semi + 1;
        }
    }
    return out;
}

std::optional<GateKind> gate_kind(const std::string& s) {
    if (s == "AND") return GateKind::And;
    if (s == "OR") return GateKind::Or;
    if (s == "NOT") return GateKind::Not;
    return std::nullopt;
}

bool valid_name(const std::string& s) {
    if (s.empty() || gate_kind(s) || s == "in" || s == "=") return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '~';
    });
}

// Expands a wide AND/OR into a balanced tree of two-input gates.
void expand(std::vector<Gate>& out, const std::string& net, GateKind kind,
            std::vector<std::string> ops, int& fresh) {
    while (ops.size() > 2) {
        std::vector<std::string> next;
        for (std::size_t i = 0; i + 1 < ops.size(); i += 2) {
            std::string t = net + "~" + std::to_string(++fresh);
            out.push_back({t, kind, {ops[i], ops[i + 1]}});
            next.push_back(t);
        }
        if (ops.size() % 2) next.push_back(ops.back());
        ops = std::move(next);
    }
    out.push_back({net, kind, std::move(ops)});
}

}  // namespace

Netlist parse_netlist(std::string_view text) {
    Netlist n;
    std::vector<Gate> raw;
    std::map<std::string, int> defined_at;
    std::vector<std::tuple<int, std::string, bool>> outs;
    for (const auto& [line, stmt] : statements(text)) {
        auto t = tokenize_line(stmt);
        if (t.size() >= 2 && t[1] == "=") {
            if (!valid_name(t[0])) throw ParseError(line, "bad net name '" + t[0] + "'");
            std::vector<std::string> rhs(t.begin() + 2, t.end());
            GateKind kind;
            std::vector<std::string> ops;
            if (!rhs.empty() && gate_kind(rhs[0])) {
                kind = *gate_kind(rhs[0]);
                ops.assign(rhs.begin() + 1, rhs.end());
            } else if (rhs.size() == 3 && gate_kind(rhs[1]) && *gate_kind(rhs[1]) != GateKind::Not) {
                kind = *gate_kind(rhs[1]);  // infix form: a AND b
                ops = {rhs[0], rhs[2]};
            } else {
                throw ParseError(line, "expected AND, OR or NOT after '='");
            }
            for (const auto& o : ops)
                if (!valid_name(o)) throw ParseError(line, "bad operand '" + o + "'");
            if (kind == GateKind::Not && ops.size() != 1)
                throw ArityError(line, "NOT takes exactly one operand");
            if (kind != GateKind::Not && ops.size() < 2)
                throw ArityError(line, std::string(kind == GateKind::And ? "AND" : "OR") +
                                           " takes at least two operands");
            if (defined_at.count(t[0])) throw ParseError(line, "net '" + t[0] + "' defined twice");
            defined_at[t[0]] = line;
            raw.push_back({t[0], kind, ops});
        } else if (t[0] == "in") {
            if (t.size() != 2 || !valid_name(t[1])) throw ParseError(line, "expected 'in <name>'");
            if (defined_at.count(t[1])) throw ParseError(line, "net '" + t[1] + "' defined twice");
            defined_at[t[1]] = line;
            n.inputs.push_back(t[1]);
        } else if (t[0] == "out") {
            if (t.size() < 2 || t.size() > 3 || (t.size() == 3 && t[2] != "loopback"))
                throw ParseError(line, "expected 'out <name> [loopback]'");
            outs.emplace_back(line, t[1], t.size() == 3);
        } else {
            throw ParseError(line, "unknown statement '" + stmt + "'");
        }
    }
    std::map<std::string, int> gate_line;
    for (const auto& g : raw) gate_line[g.net] = defined_at[g.net];
    for (const auto& g : raw)
        for (const auto& o : g.operands)
            if (!defined_at.count(o)) throw UnknownNet(gate_line[g.net], "unknown net '" + o + "'");
    for (const auto& [line, name, lb] : outs)
        if (!defined_at.count(name)) throw UnknownNet(line, "unknown net '" + name + "'");

    // Topological order, stable with respect to the source order.
    std::map<std::string, const Gate*> by_net;
    for (const auto& g : raw) by_net[g.net] = &g;
    std::map<std::string, int> state;  // 1 = visiting, 2 = done
    std::vector<const Gate*> order;
    std::function<void(const Gate&)> visit = [&](const Gate& g) {
        int& s = state[g.net];
        if (s == 2) return;
        if (s == 1) throw CycleError(gate_line[g.net], "cycle through net '" + g.net + "'");
        s = 1;
        for (const auto& o : g.operands)
            if (auto it = by_net.find(o); it != by_net.end()) visit(*it->second);
        s = 2;
        order.push_back(&g);
    };
    for (const auto& g : raw) visit(g);
    int fresh = 0;
    for (const Gate* g : order) expand(n.gates, g->net, g->kind, g->operands, fresh);

    for (const auto& [line, name, lb] : outs) {
        n.outputs.push_back(name);
        if (lb) {
            if (n.inputs.empty()) throw ParseError(line, "loopback needs an input to return to");
            n.loopbacks.push_back({name, n.inputs.front()});
        }
    }
    return n;
}

std::map<std::string, bool> evaluate(const Netlist& n, const std::map<std::string, bool>& inputs) {
    std::map<std::string, bool> v;
    for (const auto& i : n.inputs) v[i] = inputs.at(i);
    for (const auto& g : n.gates) {
        switch (g.kind) {
            case GateKind::Not: v[g.net] = !v.at(g.operands[0]); break;
            case GateKind::And: v[g.net] = v.at(g.operands[0]) && v.at(g.operands[1]); break;
            case GateKind::Or: v[g.net] = v.at(g.operands[0]) || v.at(g.operands[1]); break;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Pieces and their join points

namespace {

struct GridNames {
    std::string wire, not_gate, phase, curve, splitter, and_gate, or_gate;
};

const GridNames& names(GridKind g) {
    static const GridNames hex{"hex_wire", "hex_not",      "hex_phase_changer", "hex_curve",
                               "hex_splitter", "hex_and", "hex_or"};
    static const GridNames sq{"sq_wire", "sq_not",      "sq_phase_changer", "sq_curve",
                              "sq_splitter", "sq_and", "sq_or"};
    return g == GridKind::Hex ? hex : sq;
}

constexpr Coord k_east{1, 0};

std::recursive_mutex& cache_mutex() {
    static std::recursive_mutex m;
    return m;
}

const Gadget& piece_gadget(GridKind grid, const std::string& name, int periods) {
    static std::map<std::tuple<int, std::string, int>, Gadget> cache;
    std::lock_guard lock(cache_mutex());
    auto key = std::make_tuple(static_cast<int>(grid), name, periods);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Gadget g;
    if (periods >= 0)
        g = open_wire(get_gadget(names(grid).wire), periods);
    else if (name == "sq_phase_changer")
        g = compose_phase_changer("sq_not", name);
    else
        g = get_gadget(name);
    return cache.emplace(key, std::move(g)).first->second;
}

int rotation_for(GridKind grid, Coord d) {
    for (int k = 0; k < (grid == GridKind::Hex ? 6 : 4); ++k)
        if (apply_linear(grid, k_east, k, false) == d) return k;
    throw RoutingFailure("no rotation reaches direction " + to_string(d));
}

// Orientation of a two-port piece turning from d_in to d_out.
Placement turning(GridKind grid, const Gadget& g, Coord d_in, Coord d_out) {
    for (bool mirror : {false, true})
        for (int k = 0; k < (grid == GridKind::Hex ? 6 : 4); ++k)
            if (apply_linear(grid, g.ports[0].dir, k, mirror) == d_in &&
                apply_linear(grid, g.ports[1].dir, k, mirror) == d_out)
                return {{0, 0}, k, mirror};
    throw RoutingFailure(g.name + " cannot turn " + to_string(d_in) + " into " + to_string(d_out));
}

// The cell where a neighbouring wire meets a port: the port's var cell or a
// var cell one period further into the gadget's own wire stub, whichever the
// wire pattern overlaps without disagreement.
Coord join_var(GridKind grid, const std::string& name, int periods, std::size_t port) {
    const Gadget& g = piece_gadget(grid, name, periods);
    if (periods >= 0) return g.ports.at(port).var;
    static std::map<std::tuple<int, std::string, std::size_t>, Coord> cache;
    std::lock_guard lock(cache_mutex());
    auto key = std::make_tuple(static_cast<int>(grid), name, port);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const Port& p = g.ports.at(port);
    const Gadget& w = piece_gadget(grid, names(grid).wire, 2);
    const int k = rotation_for(grid, p.dir);
    const bool in = p.role == Port::Role::Input;
    for (int s = 0; s <= 2; ++s) {
        Coord j = in ? p.var - p.dir * (3 * s) : p.var + p.dir * (3 * s);
        Coord anchor = apply_linear(grid, (in ? w.ports[1] : w.ports[0]).var, k, false);
        Coord far = apply_linear(grid, (in ? w.ports[0] : w.ports[1]).var, k, false) + (j - anchor);
        try {
            Board joined = merge_boards(g.footprint, transform_gadget(w, {j - anchor, k, false}).footprint);
            auto sols = enumerate_solutions(joined, {}, gadget_limits());
            auto proj = project_solutions(sols, {far, p.var});
            if (proj.size() != 2 || proj.count({true, false}) || proj.count({false, true})) continue;
        } catch (const OverlapConflict&) {
            continue;
        }
        cache[key] = j;
        return j;
    }
    throw RoutingFailure("no wire can join port " + std::to_string(port) + " of " + name);
}

Coord world_join(GridKind grid, const PlacedPiece& p, std::size_t port) {
    return apply_placement(grid, join_var(grid, p.gadget, p.periods, port), p.placement);
}

Gadget realize(GridKind grid, const PlacedPiece& p) {
    Gadget g = piece_gadget(grid, p.gadget, p.periods);
    if (!p.net.empty()) {
        for (auto& l : g.footprint.labels) l.name = p.net;
    } else if (!p.label_prefix.empty()) {
        for (auto& l : g.footprint.labels) l.name = p.label_prefix + "." + l.name;
    } else {
        g.footprint.labels.clear();
    }
    g.footprint.highlights.clear();
    return transform_gadget(g, p.placement);
}

int phase_changer_length(GridKind grid) {
    const std::string& pc = names(grid).phase;
    return dot(join_var(grid, pc, -1, 1) - join_var(grid, pc, -1, 0), k_east);
}

// ---------------------------------------------------------------------------
// Canvas: the board under construction plus the bookkeeping for junctions.

struct Canvas {
    GridKind grid = GridKind::Hex;
    Board board;
    std::vector<PlacedPiece> pieces;
    std::vector<Junction> junctions;
    std::map<Coord, Port> open_outputs;  // keyed by join point
    std::map<Coord, Port> open_inputs;
    int max_col = 0;
    int max_row = 0;
    int min_row = 0;

    explicit Canvas(GridKind g) : grid(g) { board.grid = g; }

    Gadget add(const PlacedPiece& p) {
        Gadget g = realize(grid, p);
        merge_into(board, g.footprint);
        if (pieces.empty()) {
            max_col = g.footprint.cells.begin()->first.col;
            max_row = min_row = g.footprint.cells.begin()->first.row;
        }
        for (const auto& [c, cell] : g.footprint.cells) {
            max_col = std::max(max_col, c.col);
            max_row = std::max(max_row, c.row);
            min_row = std::min(min_row, c.row);
        }
        pieces.push_back(p);
        for (std::size_t i = 0; i < g.ports.size(); ++i) {
            const Port& port = g.ports[i];
            Coord j = world_join(grid, p, i);
            bool in = port.role == Port::Role::Input;
            auto& mine = in ? open_inputs : open_outputs;
            auto& other = in ? open_outputs : open_inputs;
            if (auto it = other.find(j); it != other.end()) {
                const Port& out = in ? it->second : port;
                const Port& inp = in ? port : it->second;
                if (out.dir != inp.dir)
                    throw RoutingFailure("junction at " + to_string(j) + " changes direction");
                junctions.push_back({j, j - out.dir, out.dir, phase_of(out.var, out.dir),
                                     phase_of(inp.var, inp.dir)});
                other.erase(it);
            } else {
                mine[j] = port;
            }
        }
        return g;
    }

    // Places p with its join point `port` on `at`.
    Gadget add_at(PlacedPiece p, std::size_t port, Coord at) {
        Coord j = join_var(grid, p.gadget, p.periods, port);
        p.placement.offset = at - apply_linear(grid, j, p.placement.rotation, p.placement.mirror);
        return add(p);
    }
};

struct ChainPlan {
    int pcs = 0;
    std::vector<int> wires;  // periods per wire segment
};

std::optional<int> steps_between(Coord a, Coord b, Coord d) {
    int n = d.col != 0 ? (b.col - a.col) / d.col : (b.row - a.row) / d.row;
    if (a + d * n != b || n < 0) return std::nullopt;
    return n;
}

// A straight run of n cells: wire segments of at least one period with
// phase changers between them when n is not a multiple of three.
std::optional<ChainPlan> plan_chain(GridKind grid, int n) {
    // Two gadget stubs never meet head-on: there is always at least one
    // period of plain wire between them.
    ChainPlan plan;
    if (n <= 0) return std::nullopt;
    const int len = phase_changer_length(grid);
    for (int m = 0; m <= 2; ++m) {
        int rest = n - m * len;
        if (rest < 3 * (m + 1) || rest % 3 != 0) continue;
        plan.pcs = m;
        plan.wires.assign(m + 1, 1);
        plan.wires.back() = rest / 3 - m;
        return plan;
    }
    return std::nullopt;
}

std::optional<ChainPlan> plan_chain(GridKind grid, Coord a, Coord b, Coord d) {
    auto n = steps_between(a, b, d);
    if (!n) return std::nullopt;
    return plan_chain(grid, *n);
}

void build_chain(Canvas& c, const std::string& net, Coord a, Coord b, Coord d) {
    auto plan = plan_chain(c.grid, a, b, d);
    if (!plan)
        throw RoutingFailure("no straight run from " + to_string(a) + " to " + to_string(b));
    const int k = rotation_for(c.grid, d);
    Coord pos = a;
    for (std::size_t i = 0; i < plan->wires.size(); ++i) {
        PlacedPiece w{names(c.grid).wire, {{0, 0}, k, false}, plan->wires[i], net, ""};
        c.add_at(w, 0, pos);
        pos = world_join(c.grid, c.pieces.back(), 1);
        if (static_cast<int>(i) < plan->pcs) {
            PlacedPiece pc{names(c.grid).phase, {{0, 0}, k, false}, -1, "", ""};
            c.add_at(pc, 0, pos);
            pos = world_join(c.grid, c.pieces.back(), 1);
        }
    }
    if (pos != b) throw RoutingFailure("straight run missed its target " + to_string(b));
}

bool screen_down(GridKind grid, Coord d) { return grid == GridKind::Hex ? d.row > 0 : d.row < 0; }
int row_above(GridKind grid, int row, int h) { return grid == GridKind::Hex ? row - h : row + h; }

// Tries candidates in order on a scratch copy of the canvas; the first one
// that places without conflict is kept.
template <class Fn>
void first_fit(Canvas& c, const std::vector<int>& candidates, const std::string& what, Fn&& fn) {
    std::string last = "no candidate positions";
    for (int cand : candidates) {
        Canvas trial = c;
        try {
            fn(trial, cand);
            c = std::move(trial);
            return;
        } catch (const OverlapConflict& e) {
            last = e.what();
        } catch (const RoutingFailure& e) {
            last = e.what();
        }
    }
    throw RoutingFailure(what + ": " + last);
}

// ---------------------------------------------------------------------------
// Schedule: the order in which gates and splits happen on an ordered stack
// of horizontal tracks. Two-input gates need their operands on adjacent
// tracks; there is no crossing gadget, so the search permutes the inputs and
// tries all interleavings of gates and splits.

struct Move {
    enum class Kind { Split, Gate } kind;
    std::size_t track = 0;  // for two-input gates: the upper operand
    std::size_t gate = 0;
};

struct Schedule {
    std::vector<std::string> order;  // inputs, top to bottom
    std::vector<Move> moves;
};

class ScheduleSearch {
public:
    ScheduleSearch(const Netlist& n, std::optional<std::pair<std::string, std::string>> loop)
        : n_(n), loop_(std::move(loop)) {
        for (const auto& g : n.gates)
            for (const auto& o : g.operands) ++total_uses_[o];
        for (const auto& o : n.outputs) ++total_uses_[o];
    }

    std::optional<Schedule> run() {
        std::vector<std::string> order = n_.inputs;
        std::sort(order.begin(), order.end());
        do {
            if (loop_ && order.back() != loop_->second) continue;
            std::vector<std::string> tracks;
            for (const auto& i : order)
                if (total_uses_[i] > 0) tracks.push_back(i);
            std::vector<Move> moves;
            std::vector<bool> done(n_.gates.size(), false);
            auto uses = total_uses_;
            if (dfs(tracks, done, uses, moves)) return Schedule{order, moves};
            if (budget_ <= 0) break;
        } while (std::next_permutation(order.begin(), order.end()));
        return std::nullopt;
    }

private:
    bool goal(const std::vector<std::string>& tracks, const std::vector<bool>& done,
              std::map<std::string, int>& uses) const {
        if (std::find(done.begin(), done.end(), false) != done.end()) return false;
        std::map<std::string, int> count;
        for (const auto& t : tracks) ++count[t];
        for (const auto& [net, u] : uses)
            if (u > 0 && count[net] != u) return false;
        if (loop_ && (tracks.empty() || tracks.back() != loop_->first)) return false;
        return true;
    }

    bool dfs(std::vector<std::string>& tracks, std::vector<bool>& done,
             std::map<std::string, int>& uses, std::vector<Move>& moves) {
        if (--budget_ <= 0) return false;
        if (goal(tracks, done, uses)) return true;
        std::string key;
        for (const auto& t : tracks) key += t + ",";
        key += "|";
        for (bool d : done) key += d ? '1' : '0';
        if (!seen_.insert(key).second) return false;

        for (std::size_t gi = 0; gi < n_.gates.size(); ++gi) {
            if (done[gi]) continue;
            const Gate& g = n_.gates[gi];
            if (g.kind == GateKind::Not) {
                for (std::size_t t = 0; t < tracks.size(); ++t) {
                    if (tracks[t] != g.operands[0]) continue;
                    auto saved = tracks;
                    apply_gate(tracks, uses, g, t, 1);
                    done[gi] = true;
                    moves.push_back({Move::Kind::Gate, t, gi});
                    if (dfs(tracks, done, uses, moves)) return true;
                    moves.pop_back();
                    done[gi] = false;
                    undo_gate(tracks, uses, g, saved);
                }
            } else {
                for (std::size_t t = 0; t + 1 < tracks.size(); ++t) {
                    bool fits = (tracks[t] == g.operands[0] && tracks[t + 1] == g.operands[1]) ||
                                (tracks[t] == g.operands[1] && tracks[t + 1] == g.operands[0]);
                    if (!fits) continue;
                    auto saved = tracks;
                    apply_gate(tracks, uses, g, t, 2);
                    done[gi] = true;
                    moves.push_back({Move::Kind::Gate, t, gi});
                    if (dfs(tracks, done, uses, moves)) return true;
                    moves.pop_back();
                    done[gi] = false;
                    undo_gate(tracks, uses, g, saved);
                }
            }
        }
        for (std::size_t t = 0; t < tracks.size(); ++t) {
            const std::string net = tracks[t];
            auto copies = std::count(tracks.begin(), tracks.end(), net);
            if (uses[net] <= copies) continue;
            tracks.insert(tracks.begin() + static_cast<long>(t), net);
            moves.push_back({Move::Kind::Split, t, 0});
            if (dfs(tracks, done, uses, moves)) return true;
            moves.pop_back();
            tracks.erase(tracks.begin() + static_cast<long>(t));
        }
        return false;
    }

    void apply_gate(std::vector<std::string>& tracks, std::map<std::string, int>& uses,
                    const Gate& g, std::size_t t, std::size_t width) {
        for (const auto& o : g.operands) --uses[o];
        tracks.erase(tracks.begin() + static_cast<long>(t),
                     tracks.begin() + static_cast<long>(t + width));
        uses[g.net] = total_uses_[g.net];
        if (uses[g.net] > 0) tracks.insert(tracks.begin() + static_cast<long>(t), g.net);
    }

    void undo_gate(std::vector<std::string>& tracks, std::map<std::string, int>& uses,
                   const Gate& g, const std::vector<std::string>& saved) {
        for (const auto& o : g.operands) ++uses[o];
        uses[g.net] = 0;
        tracks = saved;
    }

    const Netlist& n_;
    std::optional<std::pair<std::string, std::string>> loop_;
    std::map<std::string, int> total_uses_;
    std::set<std::string> seen_;
    long budget_ = 200000;
};

// ---------------------------------------------------------------------------
// Router: realizes a schedule on the grid. Tracks run east; every operation
// gets its own slab of columns to the right of everything placed so far.

class Router {
public:
    Router(GridKind grid, int spacing) : grid_(grid), spacing_(spacing), canvas_(grid) {}

    Layout run(const Netlist& n, const Schedule& s) {
        const GridNames& nm = names(grid_);
        for (std::size_t k = 0; k < s.order.size(); ++k) {
            int row = row_above(grid_, 0, -static_cast<int>(k) * spacing_);
            PlacedPiece start{nm.wire, {}, -1, s.order[k], ""};
            const Gadget& wire = piece_gadget(grid_, nm.wire, -1);
            std::size_t out = 0;
            while (wire.ports[out].role != Port::Role::Output) ++out;
            canvas_.add_at(start, out, {0, row});
            Coord head = world_join(grid_, canvas_.pieces.back(), out);
            starts_.push_back({s.order[k], head, canvas_.pieces.size() - 1});
            tracks_.push_back({s.order[k], row, head});
        }
        std::map<std::string, int> uses;
        for (const auto& g : n.gates)
            for (const auto& o : g.operands) ++uses[o];
        for (const auto& o : n.outputs) ++uses[o];
        drop_dead(uses);
        cursor_ = canvas_.max_col + 3;
        for (const Move& m : s.moves) {
            if (m.kind == Move::Kind::Split) {
                split(m.track);
            } else {
                const Gate& g = n.gates[m.gate];
                if (g.kind == GateKind::Not)
                    not_gate(m.track, g.net);
                else
                    two_input(m.track, g.kind, g.net);
                for (const auto& o : g.operands) --uses[o];
            }
            drop_dead(uses);
            cursor_ = canvas_.max_col + 3;
        }
        finish();

        Layout l;
        l.grid = grid_;
        l.pieces = canvas_.pieces;
        l.junctions = canvas_.junctions;
        l.inputs = n.inputs;
        l.outputs = n.outputs;
        l.spacing = spacing_;
        l.starts = starts_;
        for (const auto& t : tracks_) l.open_ends.push_back({t.net, t.head});
        return l;
    }

private:
    struct Track {
        std::string net;
        int row;
        Coord head;
    };

    void drop_dead(const std::map<std::string, int>& uses) {
        std::map<std::string, int> seen;
        std::vector<Track> kept;
        for (const auto& t : tracks_) {
            auto it = uses.find(t.net);
            int allowed = it == uses.end() ? 0 : it->second;
            if (seen[t.net]++ < allowed) kept.push_back(t);
        }
        tracks_ = std::move(kept);
    }

    // Candidate columns for an east-heading join point, cheapest first.
    std::vector<int> columns(int from, const std::function<std::optional<int>(int)>& cost) {
        std::vector<std::pair<int, int>> scored;
        for (int q = from; q < from + 120 && scored.size() < 12; ++q)
            if (auto c = cost(q)) scored.push_back({*c, q});
        std::stable_sort(scored.begin(), scored.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<int> out;
        for (const auto& s : scored) out.push_back(s.second);
        return out;
    }

    std::optional<int> run_cost(Coord a, Coord b, Coord d) const {
        auto p = plan_chain(grid_, a, b, d);
        if (!p) return std::nullopt;
        return p->pcs;
    }

    void not_gate(std::size_t t, const std::string& net) {
        const std::string& name = names(grid_).not_gate;
        Track& tr = tracks_[t];
        Coord jin = join_var(grid_, name, -1, 0);
        int left = min_col(name) - jin.col;
        auto cands = columns(cursor_ - left, [&](int q) {
            return run_cost(tr.head, {q, tr.row}, k_east);
        });
        first_fit(canvas_, cands, "NOT gate for " + net, [&](Canvas& c, int q) {
            build_chain(c, tr.net, tr.head, {q, tr.row}, k_east);
            c.add_at({name, {}, -1, "", ""}, 0, {q, tr.row});
            tr.head = world_join(grid_, c.pieces.back(), 1);
        });
        tr.net = net;
    }

    struct Attach {
        bool straight = true;
        Placement curve;
        Coord curve_in, curve_out;  // world join points of the curve
    };

    // How track `tr` reaches the input join point j heading d: straight, or
    // through a curve followed by a straight run along d.
    std::optional<std::pair<Attach, int>> attach(const Track& tr, Coord j, Coord d) const {
        Attach a;
        if (d == k_east) {
            if (j.row != tr.row) return std::nullopt;
            auto c = run_cost(tr.head, j, k_east);
            if (!c) return std::nullopt;
            return std::pair{a, *c};
        }
        const std::string& curve = names(grid_).curve;
        a.straight = false;
        a.curve = turning(grid_, piece_gadget(grid_, curve, -1), k_east, d);
        Coord cin = apply_linear(grid_, join_var(grid_, curve, -1, 0), a.curve.rotation, a.curve.mirror);
        Coord cout = apply_linear(grid_, join_var(grid_, curve, -1, 1), a.curve.rotation, a.curve.mirror);
        Coord t;
        t.row = tr.row - cin.row;
        int n = (j.row - cout.row - t.row) / d.row;
        if (n < 0 || (j.row - cout.row - t.row) % d.row) return std::nullopt;
        t.col = j.col - n * d.col - cout.col;
        a.curve.offset = t;
        a.curve_in = cin + t;
        a.curve_out = cout + t;
        auto c1 = run_cost(tr.head, a.curve_in, k_east);
        auto c2 = run_cost(a.curve_out, j, d);
        if (!c1 || !c2) return std::nullopt;
        return std::pair{a, *c1 + *c2};
    }

    void connect(Canvas& c, const Track& tr, const Attach& a, Coord j, Coord d) {
        if (a.straight) {
            build_chain(c, tr.net, tr.head, j, k_east);
            return;
        }
        build_chain(c, tr.net, tr.head, a.curve_in, k_east);
        c.add({names(grid_).curve, a.curve, -1, "", ""});
        build_chain(c, tr.net, a.curve_out, j, d);
    }

    int min_col(const std::string& name) const {
        return leftmost(piece_gadget(grid_, name, -1).footprint);
    }

    void two_input(std::size_t upper, GateKind kind, const std::string& net) {
        const GridNames& nm = names(grid_);
        const std::string& name = kind == GateKind::And ? nm.and_gate : nm.or_gate;
        const Gadget& g = piece_gadget(grid_, name, -1);
        std::size_t pu = 0, pv = 0, po = 0;
        for (std::size_t i = 0; i < g.ports.size(); ++i) {
            if (g.ports[i].role == Port::Role::Output)
                po = i;
            else if (screen_down(grid_, g.ports[i].dir))
                pu = i;
            else
                pv = i;
        }
        Track tu = tracks_[upper];
        Track tv = tracks_[upper + 1];
        Coord ju = join_var(grid_, name, -1, pu);
        Coord jv = join_var(grid_, name, -1, pv);
        std::vector<int> grows;
        if (g.ports[pv].dir == k_east) {
            grows.push_back(tv.row - jv.row);
        } else {
            int mid = (tu.row + tv.row) / 2 - join_var(grid_, name, -1, po).row;
            grows.push_back(mid);
            for (int d = 1; d <= std::abs(tu.row - tv.row) / 2; ++d) {
                grows.push_back(mid + d);
                grows.push_back(mid - d);
            }
        }
        int left = leftmost(g.footprint);
        std::string last = "no placement";
        for (int grow : grows) {
            auto cost = [&](int gq) -> std::optional<int> {
                Coord off{gq, grow};
                auto a = attach(tu, ju + off, g.ports[pu].dir);
                auto b = attach(tv, jv + off, g.ports[pv].dir);
                if (!a || !b) return std::nullopt;
                return a->second + b->second;
            };
            auto cands = columns(cursor_ - left + 2, cost);
            try {
                first_fit(canvas_, cands, net, [&](Canvas& c, int gq) {
                    Coord off{gq, grow};
                    auto a = attach(tu, ju + off, g.ports[pu].dir);
                    auto b = attach(tv, jv + off, g.ports[pv].dir);
                    c.add({name, {off, 0, false}, -1, "", net});
                    connect(c, tu, a->first, ju + off, g.ports[pu].dir);
                    connect(c, tv, b->first, jv + off, g.ports[pv].dir);
                });
            } catch (const RoutingFailure& e) {
                last = e.what();
                continue;
            }
            Coord out = world_join(grid_, canvas_.pieces[gate_piece_index(name)], po);
            tracks_.erase(tracks_.begin() + static_cast<long>(upper),
                          tracks_.begin() + static_cast<long>(upper + 2));
            tracks_.insert(tracks_.begin() + static_cast<long>(upper), Track{net, out.row, out});
            return;
        }
        throw RoutingFailure("gate " + net + " with operands at " + to_string(tu.head) + " and " +
                             to_string(tv.head) + ": " + last);
    }

    std::size_t gate_piece_index(const std::string& name) const {
        for (std::size_t i = canvas_.pieces.size(); i-- > 0;)
            if (canvas_.pieces[i].gadget == name && canvas_.pieces[i].periods < 0) return i;
        throw RoutingFailure("gate piece vanished");
    }

    static int leftmost(const Board& b) {
        int m = b.cells.begin()->first.col;
        for (const auto& [c, cell] : b.cells) m = std::min(m, c.col);
        return m;
    }

    void split(std::size_t t) {
        const GridNames& nm = names(grid_);
        const Gadget& g = piece_gadget(grid_, nm.splitter, -1);
        const Gadget& curve = piece_gadget(grid_, nm.curve, -1);
        Track tr = tracks_[t];
        std::size_t up_port = 0, down_port = 0;
        for (std::size_t i = 1; i < g.ports.size(); ++i)
            (screen_down(grid_, g.ports[i].dir) ? down_port : up_port) = i;
        auto gap = [&](bool above) {
            if (above && t > 0) return std::abs(tr.row - tracks_[t - 1].row);
            if (!above && t + 1 < tracks_.size()) return std::abs(tr.row - tracks_[t + 1].row);
            return spacing_;
        };
        Coord jin = join_var(grid_, nm.splitter, -1, 0);
        int left = leftmost(g.footprint) - jin.col;

        struct Branch {
            Placement curve;
            Coord from, curve_in, head;
            Coord dir;
            int row;
        };
        // Branch from the splitter port (world join `p`, direction d) back to
        // an east-heading track about h rows away.
        auto branch = [&](Coord p, Coord d, int target) -> std::optional<Branch> {
            Branch b;
            b.curve = turning(grid_, curve, d, k_east);
            Coord cin = apply_linear(grid_, join_var(grid_, nm.curve, -1, 0), b.curve.rotation, b.curve.mirror);
            Coord cout = apply_linear(grid_, join_var(grid_, nm.curve, -1, 1), b.curve.rotation, b.curve.mirror);
            Coord off;
            off.row = target - cout.row;
            int dr = cin.row + off.row - p.row;
            if (dr % d.row) return std::nullopt;
            int n = dr / d.row;
            if (n < 0) return std::nullopt;
            off.col = p.col + n * d.col - cin.col;
            b.curve.offset = off;
            b.from = p;
            b.dir = d;
            b.curve_in = cin + off;
            b.head = cout + off;
            b.row = target;
            if (!plan_chain(grid_, n)) return std::nullopt;
            return b;
        };
        auto pick = [&](Coord p, Coord d, bool above) -> std::optional<Branch> {
            // Children keep the parent's row modulo 3 where possible, so
            // that later vertical runs between tracks need no phase repair.
            int h = std::max(gap(above) / 3, 3);
            std::optional<Branch> best;
            int best_score = 99;
            for (int dh = 0; dh < 9; ++dh) {
                int target = row_above(grid_, tr.row, above ? h + dh : -(h + dh));
                auto b = branch(p, d, target);
                if (!b) continue;
                int pcs = plan_chain(grid_, *steps_between(b->from, b->curve_in, d))->pcs;
                int score = pcs + ((target - tr.row) % 3 != 0 ? 10 : 0);
                if (score < best_score) best = b, best_score = score;
                if (score == 0) break;
            }
            return best;
        };

        auto cands = columns(cursor_ - left + 2, [&](int q) { return run_cost(tr.head, {q, tr.row}, k_east); });
        std::vector<Track> children;
        first_fit(canvas_, cands, "splitter for " + tr.net, [&](Canvas& c, int q) {
            build_chain(c, tr.net, tr.head, {q, tr.row}, k_east);
            c.add_at({nm.splitter, {}, -1, "", ""}, 0, {q, tr.row});
            const PlacedPiece& sp = c.pieces.back();
            Coord pu = world_join(grid_, sp, up_port), pd = world_join(grid_, sp, down_port);
            Coord du = g.ports[up_port].dir, dd = g.ports[down_port].dir;
            auto bu = pick(pu, du, true);
            auto bd = pick(pd, dd, false);
            if (!bu || !bd) throw RoutingFailure("no room for splitter branches");
            children.clear();
            for (const Branch* b : {&*bu, &*bd}) {
                build_chain(c, tr.net, b->from, b->curve_in, b->dir);
                c.add({nm.curve, b->curve, -1, "", ""});
                children.push_back({tr.net, b->row, b->head});
            }
        });
        tracks_.erase(tracks_.begin() + static_cast<long>(t));
        tracks_.insert(tracks_.begin() + static_cast<long>(t), children.begin(), children.end());
    }

    void finish() {
        for (auto& tr : tracks_) {
            int q = cursor_;
            while ((q - tr.head.col) % 3 != 0) ++q;
            build_chain(canvas_, tr.net, tr.head, {q, tr.row}, k_east);
            tr.head = {q, tr.row};
        }
    }

    GridKind grid_;
    int spacing_;
    Canvas canvas_;
    std::vector<Track> tracks_;
    std::vector<Layout::TrackStart> starts_;
    int cursor_ = 0;
};

}  // namespace

Gadget build_piece(GridKind grid, const std::string& name, int periods) {
    return piece_gadget(grid, name, periods);
}

Layout place_and_route(const Netlist& n, GridKind grid) {
    std::optional<std::pair<std::string, std::string>> loop;
    if (n.loopbacks.size() > 1) throw RoutingFailure("at most one loop-back is supported");
    if (!n.loopbacks.empty()) loop = n.loopbacks.front();
    auto schedule = ScheduleSearch(n, loop).run();
    if (!schedule)
        throw RoutingFailure("the circuit cannot be laid out without crossing wires");
    std::string last;
    for (int spacing : {36, 48, 72, 96, 144, 192, 288, 384}) {
        try {
            return Router(grid, spacing).run(n, *schedule);
        } catch (const RoutingFailure& e) {
            last = e.what();
        } catch (const OverlapConflict& e) {
            last = e.what();
        }
    }
    throw RoutingFailure(last);
}

Board emit_board(const Layout& l) {
    Canvas c(l.grid);
    for (const auto& p : l.pieces) c.add(p);
    return c.board;
}

bool phases_match(const Layout& l) {
    for (const auto& j : l.junctions)
        if (j.out_phase != j.in_phase || j.comp != j.var - j.dir) return false;
    return true;
}

Layout apply_loopback(const Layout& l, const std::string& output, const std::string& input) {
    if (l.grid != GridKind::Hex)
        throw GridMismatch("loop-back gadgets exist only on the hexagonal grid");
    if (l.open_ends.empty() || l.open_ends.back().net != output)
        throw RoutingFailure("loop-back output " + output + " is not the bottom track");
    if (l.starts.empty() || l.starts.back().net != input)
        throw RoutingFailure("loop-back input " + input + " is not the bottom input");
    const GridNames& nm = names(l.grid);
    const Layout::TrackStart start = l.starts.back();
    const Coord end = l.open_ends.back().head;

    Canvas base(l.grid);
    std::vector<std::size_t> remap(l.pieces.size(), 0);
    for (std::size_t i = 0; i < l.pieces.size(); ++i) {
        if (i == start.piece) continue;
        remap[i] = base.pieces.size();
        base.add(l.pieces[i]);
    }
    const Gadget& lg = piece_gadget(l.grid, "hex_loopback", -1);
    std::size_t s_port = 0, x_port = 0;
    for (std::size_t i = 0; i < lg.ports.size(); ++i) {
        if (lg.ports[i].role == Port::Role::Input) s_port = i;
        else x_port = i;
    }
    base.add_at({"hex_loopback", {}, -1, "", ""}, x_port, start.var);
    const std::size_t loop_piece = base.pieces.size() - 1;
    const Coord s_join = world_join(l.grid, base.pieces.back(), s_port);

    // Five left turns: east, down, down-left, west, up, up-right.
    const Gadget& curve = piece_gadget(l.grid, nm.curve, -1);
    std::vector<Coord> dirs;
    for (int k = 0; k <= 5; ++k) dirs.push_back(apply_linear(l.grid, k_east, k, false));
    std::vector<Placement> turns;
    std::vector<Coord> cin, cout;
    Coord delta{0, 0};
    for (int k = 0; k < 5; ++k) {
        turns.push_back(turning(l.grid, curve, dirs[k], dirs[k + 1]));
        cin.push_back(apply_linear(l.grid, join_var(l.grid, nm.curve, -1, 0), turns[k].rotation, turns[k].mirror));
        cout.push_back(apply_linear(l.grid, join_var(l.grid, nm.curve, -1, 1), turns[k].rotation, turns[k].mirror));
        delta = delta + (cout[k] - cin[k]);
    }
    const Coord d = s_join - end - delta;
    const int min_leg = 3 * phase_changer_length(l.grid);

    std::string last = "no loop path";
    for (int n5 : {6, 9, 12, 15, 21, 30}) {
        for (int n2 : {6, 9}) {
            // The west leg must run below everything already placed.
            int row_west = end.row + cout[0].row - cin[0].row + cout[1].row - cin[1].row + n2 +
                           cout[2].row - cin[2].row;
            int n1 = std::max(min_leg, base.max_row + 12 - row_west);
            int n4 = n1 + n2 - n5 - d.row;
            if (n4 < min_leg) n1 += min_leg - n4, n4 = min_leg;
            int e0 = 3;
            int n3 = e0 - d.col - n2 + n5;
            if (n3 < min_leg) e0 += min_leg - n3, n3 = min_leg;
            std::vector<int> legs{e0, n1, n2, n3, n4, n5};
            bool ok = true;
            for (int leg : legs) ok = ok && plan_chain(l.grid, leg).has_value();
            if (!ok) {
                last = "loop legs cannot be phase-matched";
                continue;
            }
            Canvas c = base;
            try {
                Coord pos = end;
                for (int k = 0; k < 5; ++k) {
                    Coord next = pos + dirs[k] * legs[k];
                    build_chain(c, output, pos, next, dirs[k]);
                    Placement pl = turns[k];
                    pl.offset = next - cin[k];
                    c.add({nm.curve, pl, -1, "", ""});
                    pos = next - cin[k] + cout[k];
                }
                build_chain(c, output, pos, s_join, dirs[5]);
            } catch (const OverlapConflict& e) {
                last = e.what();
                continue;
            } catch (const RoutingFailure& e) {
                last = e.what();
                continue;
            }
            Layout out = l;
            out.pieces = c.pieces;
            out.junctions = c.junctions;
            for (auto& s : out.starts) s.piece = remap[s.piece];
            out.starts.back().piece = loop_piece;
            out.open_ends.pop_back();
            out.loopback[output] = input;
            return out;
        }
    }
    throw RoutingFailure("loop-back " + output + " -> " + input + ": " + last);
}

Board compile(std::string_view text, GridKind grid) {
    Netlist n = parse_netlist(text);
    Layout l = place_and_route(n, grid);
    for (const auto& [o, i] : n.loopbacks) l = apply_loopback(l, o, i);
    return emit_board(l);
}

}  // namespace mines

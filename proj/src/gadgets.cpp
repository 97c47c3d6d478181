#include "mines/gadgets.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "embedded.hpp"

namespace mines {

namespace {

const std::vector<std::string> k_catalog = {
    "sq_wire",   "sq_curve",       "sq_splitter",     "sq_not",   "sq_and",
    "sq_or",     "hex_wire_legacy", "hex_not_legacy", "hex_wire", "hex_curve",
    "hex_splitter", "hex_not",     "hex_phase_changer", "hex_or", "hex_and",
    "hex_loopback"};

int mod3(int v) { return ((v % 3) + 3) % 3; }

std::string port_name(const Board& b, Coord var) {
    for (const auto& l : b.labels)
        if (l.at == var) return l.name;
    return {};
}

}  // namespace

Gadget compose_phase_changer(const std::string& not_name, const std::string& name) {
    Gadget first = get_gadget(not_name);
    Gadget second = first;
    // The second NOT sees the complement of the first one's signal, so its
    // labels flip polarity in the composite.
    for (auto& l : second.footprint.labels) l.primed = !l.primed;
    Placement shift{first.outputs().front()->var - second.inputs().front()->var, 0, false};
    Gadget moved = transform_gadget(second, shift);
    Gadget g;
    g.name = name;
    g.footprint = merge_boards(first.footprint, moved.footprint);
    g.ports.push_back(*first.inputs().front());
    g.ports.push_back(*moved.outputs().front());
    return g;
}

int dot(Coord a, Coord b) { return a.col * b.col + a.row * b.row; }
int phase_of(Coord var, Coord dir) { return mod3(dot(var, dir)); }

std::vector<const Port*> Gadget::inputs() const {
    std::vector<const Port*> out;
    for (const auto& p : ports)
        if (p.role == Port::Role::Input) out.push_back(&p);
    return out;
}

std::vector<const Port*> Gadget::outputs() const {
    std::vector<const Port*> out;
    for (const auto& p : ports)
        if (p.role == Port::Role::Output) out.push_back(&p);
    return out;
}

Coord apply_linear(GridKind g, Coord p, int rotation, bool mirror) {
    if (g == GridKind::Square) {
        if (mirror) p = {p.col, -p.row};
        for (int k = ((rotation % 4) + 4) % 4; k > 0; --k) p = {-p.row, p.col};
    } else {
        if (mirror) p = {p.col + p.row, -p.row};
        for (int k = ((rotation % 6) + 6) % 6; k > 0; --k) p = {-p.row, p.col + p.row};
    }
    return p;
}

Coord apply_placement(GridKind g, Coord p, const Placement& pl) {
    return apply_linear(g, p, pl.rotation, pl.mirror) + pl.offset;
}

const std::vector<std::string>& catalog_names() { return k_catalog; }

Gadget parse_gadget(std::string_view text, const std::string& name) {
    Gadget g;
    g.name = name;
    std::string board_text;
    int lineno = 0;
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ParseError(lineno, "expected an integer, got '" + s + "'");
        }
    };
    for (std::string_view raw : split_lines(text)) {
        ++lineno;
        auto t = tokenize_line(raw);
        if (!t.empty() && t[0] == "port") {
            if (t.size() != 9 || (t[1] != "input" && t[1] != "output"))
                throw ParseError(lineno, "port expects input|output and 7 integers");
            Port p;
            p.role = t[1] == "input" ? Port::Role::Input : Port::Role::Output;
            p.var = {to_int(t[2]), to_int(t[3])};
            p.comp = {to_int(t[4]), to_int(t[5])};
            p.dir = {to_int(t[6]), to_int(t[7])};
            p.phase = to_int(t[8]);
            if (p.phase < 0 || p.phase > 2) throw ParseError(lineno, "phase must be 0, 1 or 2");
            g.ports.push_back(p);
            board_text += "#\n";
        } else if (!t.empty() && t[0] == "period") {
            if (t.size() != 5) throw ParseError(lineno, "period expects 4 integers");
            g.period = Period{{to_int(t[1]), to_int(t[2])}, to_int(t[3]), to_int(t[4])};
            if (g.period->length <= 0) throw ParseError(lineno, "period length must be positive");
            board_text += "#\n";
        } else {
            board_text.append(raw);
            board_text += '\n';
        }
    }
    g.footprint = parse_board(board_text);
    for (auto& p : g.ports) {
        for (Coord c : {p.var, p.comp}) {
            const Cell* cell = g.footprint.find(c);
            if (!cell || !cell->is_covered())
                throw ValidationError("port cell " + to_string(c) + " is not a covered cell");
        }
        if (p.comp != p.var - p.dir)
            throw ValidationError("port at " + to_string(p.var) + ": comp must equal var - dir");
        if (p.phase != phase_of(p.var, p.dir))
            throw ValidationError("port at " + to_string(p.var) + ": phase must be (var . dir) mod 3");
        p.name = port_name(g.footprint, p.var);
    }
    return g;
}

std::string serialize_gadget(const Gadget& g) {
    std::ostringstream out;
    out << serialize_board(g.footprint);
    for (const auto& p : g.ports)
        out << "port " << (p.role == Port::Role::Input ? "input" : "output") << ' ' << p.var.col
            << ' ' << p.var.row << ' ' << p.comp.col << ' ' << p.comp.row << ' ' << p.dir.col
            << ' ' << p.dir.row << ' ' << p.phase << '\n';
    if (g.period)
        out << "period " << g.period->axis.col << ' ' << g.period->axis.row << ' '
            << g.period->cut << ' ' << g.period->length << '\n';
    return out.str();
}

Gadget get_gadget(const std::string& name) {
    if (name == "hex_phase_changer") return compose_phase_changer("hex_not", name);
    const auto& texts = detail::embedded_gadgets();
    auto it = texts.find(name);
    if (it == texts.end()) throw UnknownGadget(name);
    return parse_gadget(it->second, name);
}

Gadget transform_gadget(const Gadget& g, const Placement& pl) {
    const GridKind grid = g.footprint.grid;
    auto at = [&](Coord c) { return apply_placement(grid, c, pl); };
    Gadget out;
    out.name = g.name;
    out.footprint.grid = grid;
    for (const auto& [c, cell] : g.footprint.cells) out.footprint.cells[at(c)] = cell;
    for (const auto& l : g.footprint.labels) out.footprint.labels.push_back({at(l.at), l.name, l.primed});
    for (Coord c : g.footprint.mines) out.footprint.mines.insert(at(c));
    for (Coord c : g.footprint.highlights) out.footprint.highlights.insert(at(c));
    for (const auto& p : g.ports) {
        Port q = p;
        q.var = at(p.var);
        q.comp = at(p.comp);
        q.dir = apply_linear(grid, p.dir, pl.rotation, pl.mirror);
        q.phase = phase_of(q.var, q.dir);
        out.ports.push_back(q);
    }
    // Rotated wires lose their axis-aligned period; only translations keep it.
    if (g.period && pl.rotation == 0 && !pl.mirror) {
        Period p = *g.period;
        p.cut += dot(pl.offset, p.axis);
        out.period = p;
    }
    return out;
}

void merge_into(Board& into, const Board& piece) {
    if (!into.cells.empty() && !piece.cells.empty() && into.grid != piece.grid)
        throw OverlapConflict({0, 0}, "grid kinds differ");
    if (into.cells.empty()) into.grid = piece.grid;
    std::set<Coord> shared;
    for (const auto& [c, cell] : piece.cells) {
        const Cell* old = into.find(c);
        if (!old) continue;
        if (!(*old == cell)) throw OverlapConflict(c, "cells disagree");
        shared.insert(c);
    }
    auto gained = [](Coord clue, Coord n) {
        return OverlapConflict(n, "clue at " + to_string(clue) + " gains a new neighbour");
    };
    for (const auto& [c, cell] : piece.cells) {
        if (cell.is_clue()) {
            for (Coord n : neighbors(piece.grid, c)) {
                if (piece.contains(n)) continue;
                const Cell* h = into.find(n);
                if (h && !h->is_clue()) throw gained(c, n);
            }
        } else if (!shared.count(c)) {
            for (Coord n : neighbors(piece.grid, c)) {
                const Cell* h = into.find(n);
                if (h && h->is_clue()) throw gained(n, c);
            }
        }
    }
    for (const auto& [c, cell] : piece.cells) into.cells.emplace(c, cell);
    for (const auto& l : piece.labels)
        if (!shared.count(l.at) ||
            std::find(into.labels.begin(), into.labels.end(), l) == into.labels.end())
            into.labels.push_back(l);
    into.mines.insert(piece.mines.begin(), piece.mines.end());
    into.highlights.insert(piece.highlights.begin(), piece.highlights.end());
}

Board merge_boards(const Board& into, const Board& piece) {
    Board out = into;
    merge_into(out, piece);
    return out;
}

Board instantiate(const Gadget& g, const Placement& p, const Board& into) {
    return merge_boards(into, transform_gadget(g, p).footprint);
}

Gadget extend_wire(const Gadget& g, int periods) {
    if (!g.period) throw NotPeriodic(g.name);
    if (periods < 0) throw std::invalid_argument("periods must be nonnegative");
    if (periods == 0) return g;
    const Period& per = *g.period;
    const Coord step = per.axis * per.length;
    const Coord shift = step * periods;
    auto after_cut = [&](Coord c) { return dot(c, per.axis) >= per.cut; };
    auto in_window = [&](Coord c) {
        int d = dot(c, per.axis);
        return d >= per.cut - per.length && d < per.cut;
    };
    auto moved = [&](Coord c) { return after_cut(c) ? c + shift : c; };

    Gadget out = g;
    Board& b = out.footprint;
    const Board& src = g.footprint;
    b.cells.clear();
    b.labels.clear();
    b.mines.clear();
    b.highlights.clear();
    for (const auto& [c, cell] : src.cells) {
        b.cells[moved(c)] = cell;
        if (in_window(c))
            for (int k = 1; k <= periods; ++k) b.cells[c + step * k] = cell;
    }
    for (const auto& l : src.labels) {
        if (after_cut(l.at)) continue;
        b.labels.push_back(l);
    }
    for (const auto& l : src.labels)
        if (in_window(l.at))
            for (int k = 1; k <= periods; ++k) b.labels.push_back({l.at + step * k, l.name, l.primed});
    for (const auto& l : src.labels)
        if (after_cut(l.at)) b.labels.push_back({l.at + shift, l.name, l.primed});
    for (Coord c : src.mines) {
        b.mines.insert(moved(c));
        if (in_window(c))
            for (int k = 1; k <= periods; ++k) b.mines.insert(c + step * k);
    }
    for (Coord c : src.highlights) b.highlights.insert(moved(c));
    for (auto& p : out.ports) {
        if (after_cut(p.var)) {
            p.var = p.var + shift;
            p.comp = p.comp + shift;
        }
        p.phase = phase_of(p.var, p.dir);
    }
    return out;
}

Gadget open_wire(const Gadget& g, int periods) {
    if (!g.period || g.outputs().empty()) throw NotPeriodic(g.name);
    if (periods < 0) throw std::invalid_argument("periods must be nonnegative");
    const Period& per = *g.period;
    const Port& tail = *g.outputs().front();
    const Coord step = per.axis * per.length;
    const int lo = dot(tail.var, per.axis) - 1;
    const int hi = dot(tail.var, per.axis) + periods * per.length + 1;
    const Board& src = g.footprint;
    auto in_window = [&](Coord c) {
        int d = dot(c, per.axis);
        return d >= per.cut - per.length && d < per.cut;
    };
    // Shift that brings c into the window, in whole units.
    auto fold = [&](Coord c) {
        int d = dot(c, per.axis) - (per.cut - per.length);
        int k = d >= 0 ? d / per.length : -((-d + per.length - 1) / per.length);
        return c - step * k;
    };

    const int k_lo = (lo - per.cut) / per.length - 2;
    const int k_hi = (hi - per.cut) / per.length + 2;

    Gadget out;
    out.name = g.name + "_open";
    out.footprint.grid = src.grid;
    Board& b = out.footprint;
    for (const auto& [c, cell] : src.cells) {
        if (!in_window(c)) continue;
        for (int k = k_lo; k <= k_hi; ++k) {
            Coord p = c + step * k;
            int d = dot(p, per.axis);
            if (d >= lo && d <= hi) b.cells[p] = cell;
        }
    }
    std::vector<std::pair<Coord, Cell>> extra;
    for (const auto& [c, cell] : b.cells) {
        if (!cell.is_clue()) continue;
        for (Coord n : neighbors(b.grid, c)) {
            if (b.contains(n)) continue;
            const Cell* pc = src.find(fold(n));
            if (pc && !pc->is_clue()) extra.push_back({n, Cell::make_covered()});
        }
    }
    for (const auto& [c, cell] : extra) b.cells.emplace(c, cell);
    for (const auto& l : src.labels) {
        if (!in_window(l.at)) continue;
        for (int k = k_lo; k <= k_hi; ++k) {
            Coord p = l.at + step * k;
            int d = dot(p, per.axis);
            if (d >= lo && d <= hi && b.find(p) && b.find(p)->is_covered())
                b.labels.push_back({p, l.name, l.primed});
        }
    }
    for (Coord c : src.mines) {
        if (!in_window(c)) continue;
        for (int k = k_lo; k <= k_hi; ++k) {
            Coord p = c + step * k;
            int d = dot(p, per.axis);
            if (d >= lo && d <= hi && b.find(p) && b.find(p)->is_covered()) b.mines.insert(p);
        }
    }
    std::sort(b.labels.begin(), b.labels.end(),
              [](const Label& x, const Label& y) { return x.at < y.at; });
    Port in = tail;
    in.role = Port::Role::Input;
    Port last = tail;
    last.var = tail.var + step * periods;
    last.comp = last.var - tail.dir;
    last.phase = phase_of(last.var, last.dir);
    out.ports = {in, last};
    return out;
}

bool label_value(const Board& b, const SolutionSet& s, std::size_t solution,
                 const std::string& name) {
    const Label* plain = nullptr;
    const Label* primed = nullptr;
    for (const Label* l : b.labels_named(name)) {
        const Label*& slot = l->primed ? primed : plain;
        if (!slot || l->at < slot->at) slot = l;
    }
    if (plain) return s.solutions[solution][s.index_of(plain->at)];
    if (primed) return !s.solutions[solution][s.index_of(primed->at)];
    throw std::invalid_argument("no label named '" + name + "'");
}

bool VerifyReport::pass() const {
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.pass; });
}

VerifyReport verify_gadget(const Gadget& g, const TruthTable& expected, const Limits& limits) {
    auto ins = g.inputs();
    auto outs = g.outputs();
    if (ins.size() != expected.inputs.size() || outs.size() != expected.outputs.size())
        throw std::invalid_argument("truth table does not match the ports of " + g.name);
    VerifyReport report;
    report.gadget = g.name;
    report.columns = expected.inputs;
    for (const auto& n : expected.internals) report.columns.push_back(n);
    for (const auto& n : expected.outputs) report.columns.push_back(n);

    const std::size_t k = ins.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        VerifyRow row;
        std::vector<Pin> pins;
        for (std::size_t i = 0; i < k; ++i) {
            bool t = (bits >> (k - 1 - i)) & 1U ? false : true;  // T before F
            row.inputs.push_back(t);
            pins.push_back({ins[i]->var, t});
        }
        SolutionSet s = enumerate_solutions(g.footprint, pins, limits);
        for (std::size_t j = 0; j < s.size(); ++j) {
            std::vector<bool> t;
            for (const auto& n : expected.internals) t.push_back(label_value(g.footprint, s, j, n));
            for (const Port* p : outs) t.push_back(s.solutions[j][s.index_of(p->var)]);
            row.observed.insert(std::move(t));
        }
        row.inconsistent = s.empty();
        auto it = expected.rows.find(row.inputs);
        if (it != expected.rows.end()) row.expected = it->second;
        row.pass = !row.inconsistent && it != expected.rows.end() && row.observed == row.expected;
        report.rows.push_back(std::move(row));
    }
    return report;
}

LoopbackReport loopback_independence(const Gadget& g, const Port& a, const Port& b,
                                     const Limits& limits) {
    SolutionSet s = enumerate_solutions(g.footprint, {}, limits);
    if (s.empty()) throw EmptySolutionSet();
    LoopbackReport r;
    for (const auto& t : project_solutions(s, {a.var, b.var})) r.pairs.insert({t[0], t[1]});
    return r;
}

Limits gadget_limits() { return Limits{512, 1'000'000}; }

std::string format_bits(const std::vector<bool>& bits) {
    std::string s;
    for (bool b : bits) s += b ? 'T' : 'F';
    return s;
}

}  // namespace mines

#include "mines/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mines/compiler.hpp"
#include "mines/gadgets.hpp"
#include "mines/render.hpp"
#include "mines/solver.hpp"

namespace mines {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

Coord parse_coord(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("expected col,row but got '" + text + "'");
    try {
        std::size_t used_c = 0, used_r = 0;
        int c = std::stoi(text.substr(0, comma), &used_c);
        int r = std::stoi(text.substr(comma + 1), &used_r);
        if (used_c != comma || used_r != text.size() - comma - 1) throw std::invalid_argument(text);
        return {c, r};
    } catch (const std::logic_error&) {
        throw UsageError("expected col,row but got '" + text + "'");
    }
}

Pin parse_pin(const std::string& text) {
    auto eq = text.find('=');
    if (eq == std::string::npos || eq + 2 != text.size() ||
        (text[eq + 1] != 'M' && text[eq + 1] != 'C'))
        throw UsageError("expected col,row=M|C but got '" + text + "'");
    return {parse_coord(text.substr(0, eq)), text[eq + 1] == 'M'};
}

struct EnumerateArgs {
    std::string board;
    std::vector<std::string> pins;
    std::vector<std::string> project;
    bool count_only = false;
    std::size_t max_covered = Limits{}.max_covered;
    std::size_t max_solutions = Limits{}.max_solutions;
    std::string output;
};

int do_enumerate(const EnumerateArgs& a, std::ostream& out) {
    Board b = parse_board(read_file(a.board));
    std::vector<Pin> pins;
    for (const auto& p : a.pins) pins.push_back(parse_pin(p));
    Limits limits{a.max_covered, a.max_solutions};
    std::ostringstream text;
    if (a.count_only) {
        text << count_solutions(b, pins, limits) << '\n';
    } else if (!a.project.empty()) {
        std::vector<Coord> cells;
        for (const auto& p : a.project) cells.push_back(parse_coord(p));
        auto proj = project_solutions(enumerate_solutions(b, pins, limits), cells);
        text << "coords";
        for (Coord c : cells) text << ' ' << c.col << ',' << c.row;
        text << '\n';
        for (const auto& row : proj) {
            for (bool v : row) text << (v ? 'M' : '.');
            text << '\n';
        }
    } else {
        text << dump_solutions(enumerate_solutions(b, pins, limits));
    }
    write_output(a.output, text.str(), out);
    return 0;
}

int do_verify(const std::string& name, bool all, std::ostream& out) {
    if (all == !name.empty()) throw UsageError("verify takes a gadget name or --all");
    std::vector<std::string> names = all ? catalog_names() : std::vector<std::string>{name};
    bool ok = true;
    for (const auto& n : names) {
        Gadget g = get_gadget(n);
        ClaimReport claims = check_claims(g.footprint, gadget_limits());
        bool mines_ok = claims.pass(ClaimResult::Kind::ForcedMine);
        bool labels_ok = claims.pass(ClaimResult::Kind::LabelConsistency);
        out << n << ": " << claims.solutions << " solutions, forced mines "
            << (mines_ok ? "PASS" : "FAIL");
        bool table_ok = true;
        if (auto table = expected_table(n)) {
            VerifyReport r = verify_gadget(g, *table, gadget_limits());
            table_ok = r.pass();
            out << ", truth table " << (table_ok ? "PASS" : "FAIL");
            if (!table_ok)
                for (const auto& row : r.rows)
                    if (!row.pass) out << " [row " << format_bits(row.inputs) << " mismatch]";
        } else {
            out << ", no truth table";
        }
        if (!labels_ok) out << " (note: label values are not uniform across solutions)";
        out << '\n';
        ok = ok && mines_ok && table_ok;
    }
    return ok ? 0 : 1;
}

int do_compile(const std::string& path, const std::string& grid, const std::string& loopback,
               const std::string& output, std::ostream& out) {
    Netlist n = parse_netlist(read_file(path));
    if (!loopback.empty()) {
        auto eq = loopback.find('=');
        if (eq == std::string::npos) throw UsageError("--loopback expects out=in");
        n.loopbacks = {{loopback.substr(0, eq), loopback.substr(eq + 1)}};
    }
    GridKind g = grid == "square" ? GridKind::Square : GridKind::Hex;
    Layout l = place_and_route(n, g);
    for (const auto& [o, i] : n.loopbacks) l = apply_loopback(l, o, i);
    write_output(output, serialize_board(emit_board(l)), out);
    return 0;
}

int do_render(const std::string& path, const std::string& format, const std::string& output,
              std::ostream& out) {
    Board b = parse_board(read_file(path));
    write_output(output, format == "svg" ? render_svg(b) : render_ascii(b), out);
    return 0;
}

void subsets(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            f(idx);
            return;
        }
        for (int i = start; i <= n - (k - depth); ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

}  // namespace

std::string export_dimacs(const Board& b) {
    std::vector<Coord> vars = b.covered_cells();
    std::map<Coord, int> index;
    for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = static_cast<int>(i) + 1;
    std::vector<std::vector<int>> clauses;
    for (const auto& [c, cell] : b.cells) {
        if (!cell.is_clue()) continue;
        std::vector<int> around;
        int need = cell.clue;
        for (Coord n : neighbors(b.grid, c)) {
            const Cell* nc = b.find(n);
            if (!nc) continue;
            if (nc->kind == Cell::Kind::Flagged) --need;
            if (nc->is_covered()) around.push_back(index[n]);
        }
        const int n = static_cast<int>(around.size());
        if (need < 0 || need > n) {
            clauses.push_back({});
            continue;
        }
        // at most `need`: every need+1 subset has a clear cell
        subsets(n, need + 1, [&](const std::vector<int>& s) {
            std::vector<int> cl;
            for (int i : s) cl.push_back(-around[static_cast<std::size_t>(i)]);
            clauses.push_back(cl);
        });
        // at least `need`: every n-need+1 subset has a mine
        subsets(n, n - need + 1, [&](const std::vector<int>& s) {
            std::vector<int> cl;
            for (int i : s) cl.push_back(around[static_cast<std::size_t>(i)]);
            clauses.push_back(cl);
        });
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < vars.size(); ++i)
        out << "c var " << i + 1 << " = " << vars[i].col << ',' << vars[i].row << '\n';
    out << "p cnf " << vars.size() << ' ' << clauses.size() << '\n';
    for (const auto& cl : clauses) {
        for (int lit : cl) out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minesweeper board solver, gadget verifier and circuit compiler", "mines"};
    app.require_subcommand(1);

    EnumerateArgs ea;
    auto* en = app.add_subcommand("enumerate", "list, project or count consistent mine layouts");
    en->add_option("board", ea.board, "board file")->required();
    en->add_option("--pin", ea.pins, "fix a covered cell: col,row=M|C")->allow_extra_args(false);
    en->add_option("--project", ea.project, "project onto these cells (col,row ...)");
    en->add_flag("--count-only", ea.count_only, "print only the number of solutions");
    en->add_option("--max-covered", ea.max_covered, "refuse boards with more covered cells")
        ->check(CLI::PositiveNumber);
    en->add_option("--max-solutions", ea.max_solutions, "stop when this many solutions are found")
        ->check(CLI::PositiveNumber);
    en->add_option("-o,--output", ea.output, "output file (default: stdout)");

    std::string gadget;
    bool all = false;
    auto* ve = app.add_subcommand("verify", "check catalog gadgets against their truth tables");
    ve->add_option("gadget", gadget, "catalog name");
    ve->add_flag("--all", all, "verify every catalog gadget");

    std::string netlist, grid = "hex", loopback, compile_out;
    auto* co = app.add_subcommand("compile", "compile a netlist into a board");
    co->add_option("netlist", netlist, "netlist file")->required();
    co->add_option("--grid", grid, "hex or square")->check(CLI::IsMember({"hex", "square"}));
    co->add_option("--loopback", loopback, "wire output back to input: out=in");
    co->add_option("-o,--output", compile_out, "board file (default: stdout)");

    std::string render_in, format = "ascii", render_out;
    auto* re = app.add_subcommand("render", "draw a board as ASCII or SVG");
    re->add_option("board", render_in, "board file")->required();
    re->add_option("--format", format, "ascii or svg")->check(CLI::IsMember({"ascii", "svg"}));
    re->add_option("-o,--output", render_out, "output file (default: stdout)");

    std::string dimacs_in, dimacs_out;
    auto* dx = app.add_subcommand("export-dimacs", "write the clue constraints as CNF");
    dx->add_option("board", dimacs_in, "board file")->required();
    dx->add_option("-o,--output", dimacs_out, "CNF file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*en) return do_enumerate(ea, out);
        if (*ve) return do_verify(gadget, all, out);
        if (*co) return do_compile(netlist, grid, loopback, compile_out, out);
        if (*re) return do_render(render_in, format, render_out, out);
        if (*dx) {
            write_output(dimacs_out, export_dimacs(parse_board(read_file(dimacs_in))), out);
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: ParseError: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        err << "error: ValidationError: " << e.what() << '\n';
        return 2;
    } catch (const UnknownNet& e) {
        err << "error: UnknownNet: " << e.what() << '\n';
        return 2;
    } catch (const CycleError& e) {
        err << "error: CycleError: " << e.what() << '\n';
        return 2;
    } catch (const ArityError& e) {
        err << "error: ArityError: " << e.what() << '\n';
        return 2;
    } catch (const NetlistError& e) {
        err << "error: NetlistError: " << e.what() << '\n';
        return 2;
    } catch (const PinError& e) {
        err << "error: PinError: " << e.what() << '\n';
        return 2;
    } catch (const UnknownGadget& e) {
        err << "error: UnknownGadget: " << e.what() << '\n';
        return 2;
    } catch (const UnknownCoord& e) {
        err << "error: UnknownCoord: " << e.what() << '\n';
        return 2;
    } catch (const LimitExceeded& e) {
        err << "error: LimitExceeded: " << e.what() << '\n';
        return 1;
    } catch (const EmptySolutionSet& e) {
        err << "error: EmptySolutionSet: " << e.what() << '\n';
        return 1;
    } catch (const RoutingFailure& e) {
        err << "error: RoutingFailure: " << e.what() << '\n';
        return 1;
    } catch (const GridMismatch& e) {
        err << "error: GridMismatch: " << e.what() << '\n';
        return 1;
    } catch (const OverlapConflict& e) {
        err << "error: OverlapConflict: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace mines

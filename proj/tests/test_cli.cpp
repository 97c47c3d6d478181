#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "mines/cli.hpp"
#include "mines/compiler.hpp"
#include "mines/render.hpp"
#include "mines/solver.hpp"
#include "support.hpp"

using namespace mines;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "mines");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / ("mines_test_" + name);
    std::ofstream(path, std::ios::binary) << text;
    return path.string();
}

const std::string k_example = testing::data_path("boards/example1.board");

}  // namespace

TEST_CASE("enumerate --count-only matches the library") {
    Board b = parse_board(testing::read_text(k_example));
    Result r = run({"enumerate", k_example, "--count-only"});
    CHECK(r.code == 0);
    CHECK(r.out == std::to_string(count_solutions(b)) + "\n");
}

TEST_CASE("enumerate on an empty board prints one") {
    std::string path = temp_file("empty.board", "grid square\n");
    Result r = run({"enumerate", path, "--count-only"});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");
}

TEST_CASE("enumerate dumps solutions and honours pins and projections") {
    Board b = parse_board(testing::read_text(k_example));
    CHECK(run({"enumerate", k_example}).out == dump_solutions(enumerate_solutions(b)));
    Coord first = b.covered_cells().front();
    std::string pin = std::to_string(first.col) + "," + std::to_string(first.row) + "=M";
    Result pinned = run({"enumerate", k_example, "--pin", pin, "--count-only"});
    CHECK(pinned.out == std::to_string(count_solutions(b, {{first, true}})) + "\n");
    std::string cell = std::to_string(first.col) + "," + std::to_string(first.row);
    Result proj = run({"enumerate", k_example, "--project", cell});
    CHECK(proj.code == 0);
    CHECK(proj.out == "coords " + cell + "\n.\nM\n");
    CHECK(run({"enumerate", k_example, "--max-covered", "4"}).code == 1);
    CHECK(run({"enumerate", k_example, "--pin", "nonsense"}).code == 2);
}

TEST_CASE("verify covers the catalog") {
    Result r = run({"verify", "--all"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(run({"verify", "hex_not"}).code == 0);
    Result unknown = run({"verify", "hex_xor"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("UnknownGadget") != std::string::npos);
    CHECK(run({"verify"}).code == 2);
}

TEST_CASE("compile writes the same board as the library") {
    const std::string text = "in u; in v; n = OR u v; out n";
    std::string net = temp_file("or.net", text);
    for (std::string grid : {"hex", "square"}) {
        Result r = run({"compile", net, "--grid", grid});
        CHECK(r.code == 0);
        CHECK(r.out == serialize_board(compile(text, grid == "hex" ? GridKind::Hex : GridKind::Square)));
    }
    std::string out = (std::filesystem::temp_directory_path() / "mines_test_or.board").string();
    CHECK(run({"compile", net, "-o", out}).code == 0);
    CHECK(testing::read_text(out) == serialize_board(compile(text, GridKind::Hex)));
}

TEST_CASE("compile reports netlist and routing errors") {
    std::string bad = temp_file("bad.net", "in a; b = AND a c; out b");
    Result r = run({"compile", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("UnknownNet") != std::string::npos);
    std::string id = temp_file("id.net", "in x; out x");
    Result sq = run({"compile", id, "--grid", "square", "--loopback", "x=x"});
    CHECK(sq.code == 1);
    CHECK(sq.err.find("GridMismatch") != std::string::npos);
    CHECK(run({"compile", id, "--grid", "triangle"}).code == 2);
}

TEST_CASE("compile --loopback matches apply_loopback") {
    std::string id = temp_file("id2.net", "in x; out x");
    Result r = run({"compile", id, "--loopback", "x=x"});
    CHECK(r.code == 0);
    Layout l = place_and_route(parse_netlist("in x; out x"), GridKind::Hex);
    CHECK(r.out == serialize_board(emit_board(apply_loopback(l, "x", "x"))));
}

TEST_CASE("render matches the library") {
    Board b = parse_board(testing::read_text(k_example));
    CHECK(run({"render", k_example}).out == render_ascii(b));
    CHECK(run({"render", k_example, "--format", "svg"}).out == render_svg(b));
    CHECK(run({"render", k_example, "--format", "png"}).code == 2);
}

TEST_CASE("dimacs export has exactly the board's models") {
    std::mt19937 rng(3);
    for (int i = 0; i < 30; ++i) {
        Board b = testing::random_board(rng, i % 2 ? GridKind::Hex : GridKind::Square, 10);
        std::string cnf = export_dimacs(b);
        std::istringstream in(cnf);
        std::string line;
        std::vector<std::vector<int>> clauses;
        int vars = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == 'c') continue;
            std::istringstream ls(line);
            if (line[0] == 'p') {
                std::string p, fmt;
                std::size_t n;
                ls >> p >> fmt >> vars >> n;
                continue;
            }
            std::vector<int> cl;
            for (int lit; ls >> lit && lit != 0;) cl.push_back(lit);
            clauses.push_back(cl);
        }
        CHECK(vars == static_cast<int>(b.covered_cells().size()));
        std::size_t models = 0;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << vars); ++m) {
            bool sat = std::all_of(clauses.begin(), clauses.end(), [&](const std::vector<int>& cl) {
                return std::any_of(cl.begin(), cl.end(), [&](int lit) {
                    bool v = (m >> (std::abs(lit) - 1)) & 1;
                    return lit > 0 ? v : !v;
                });
            });
            models += sat;
        }
        CHECK(models == testing::brute_force(b).size());
    }
    std::string path = temp_file("dimacs.board", "grid square\ncell 0 0 clue 1\ncell 1 0 covered\n");
    Result r = run({"export-dimacs", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("p cnf 1 ") != std::string::npos);
}

TEST_CASE("usage errors exit with two") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"enumerate"}).code == 2);
    CHECK(run({"enumerate", "/nonexistent/board"}).code == 2);
    std::string bad = temp_file("bad.board", "grid square\ncell 0 0 clue 12\n");
    CHECK(run({"enumerate", bad}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

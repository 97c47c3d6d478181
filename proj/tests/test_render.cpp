#include "doctest.h"

#include <algorithm>
#include <random>

#include "mines/gadgets.hpp"
#include "mines/render.hpp"
#include "support.hpp"

using namespace mines;

namespace {

std::size_t count(const std::string& text, const std::string& what) {
    std::size_t n = 0;
    for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + what.size())) ++n;
    return n;
}

}  // namespace

TEST_CASE("a single clue renders as its digit") {
    Board b = parse_board("grid square\ncell 0 0 clue 3\n");
    CHECK(render_ascii(b) == "3\n");
    Board h = parse_board("grid hex\ncell 4 -2 clue 3\n");
    CHECK(render_ascii(h) == "3\n");
}

TEST_CASE("the first example shows its covered ring") {
    Board b = parse_board(testing::read_text(testing::data_path("boards/example1.board")));
    std::string text = render_ascii(b);
    CHECK(count(text, "#") == 18);
    CHECK(std::count_if(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }) == 12);
    CHECK(text.substr(0, text.find('\n')) == "# # # # # #");
}

TEST_CASE("forced-mine annotations render as stars") {
    Board b = parse_board("grid square\ncell 0 0 clue 1\ncell 1 0 covered\nmine 1 0\n");
    CHECK(render_ascii(b) == "1 *\n");
    RenderStyle s;
    s.forced.insert({1, 0});
    Board plain = parse_board("grid square\ncell 0 0 clue 1\ncell 1 0 covered\n");
    CHECK(render_ascii(plain, s) == "1 *\n");
}

TEST_CASE("square rows print top row first") {
    Board b = parse_board("grid square\ncell 0 0 clue 1\ncell 0 1 clue 2\ncell 2 1 covered\n");
    CHECK(render_ascii(b) == "2 . #\n1\n");
}

TEST_CASE("hex rows shift by half a cell") {
    // axial (q, r) sits on line r at column 2q + r
    Board b = parse_board("grid hex\ncell 0 0 clue 1\ncell 1 0 clue 2\ncell 0 1 clue 3\ncell -1 2 covered\n");
    CHECK(render_ascii(b) == "1 2\n 3\n#\n");
}

TEST_CASE("every cell is drawn exactly once") {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        GridKind g = i % 2 ? GridKind::Hex : GridKind::Square;
        Board b = testing::random_board(rng, g, 16, true);
        std::string text = render_ascii(b);
        std::size_t glyphs = std::count_if(text.begin(), text.end(), [](char c) { return c != ' ' && c != '\n' && c != '.'; });
        CHECK(glyphs == b.cells.size());
        std::string svg = render_svg(b);
        CHECK(count(svg, "class=\"cell\"") == b.cells.size());
    }
}

TEST_CASE("svg uses hexagons on the hex grid") {
    Gadget w = get_gadget("hex_wire");
    std::string svg = render_svg(w.footprint);
    CHECK(count(svg, "<polygon class=\"cell\"") == w.footprint.cells.size());
    CHECK(count(svg, "<rect") == 0);
    CHECK(count(svg, "<circle class=\"mine\"") == w.footprint.mines.size());
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
}

TEST_CASE("an empty board is still a valid document") {
    Board b;
    std::string svg = render_svg(b);
    CHECK(count(svg, "class=\"cell\"") == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(render_ascii(b).empty());
}

TEST_CASE("rendering is byte-stable") {
    for (const auto& name : catalog_names()) {
        Board b = get_gadget(name).footprint;
        CHECK(render_ascii(b) == render_ascii(parse_board(serialize_board(b))));
        CHECK(render_svg(b) == render_svg(parse_board(serialize_board(b))));
    }
}

#include "doctest.h"

#include "mines/gadgets.hpp"
#include "support.hpp"

using namespace mines;

TEST_CASE("neighbourhoods have eight or six cells") {
    for (int c = -3; c <= 3; ++c) {
        for (int r = -3; r <= 3; ++r) {
            CHECK(neighbors(GridKind::Square, {c, r}).size() == 8);
            CHECK(neighbors(GridKind::Hex, {c, r}).size() == 6);
        }
    }
    CHECK(max_clue(GridKind::Square) == 8);
    CHECK(max_clue(GridKind::Hex) == 6);
}

TEST_CASE("hex neighbours are the six axial directions") {
    auto n = neighbors(GridKind::Hex, {0, 0});
    std::set<Coord> got(n.begin(), n.end());
    std::set<Coord> want{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    CHECK(got == want);
}

TEST_CASE("corner of a small square board sees three cells") {
    Board b = parse_board("grid square\ncell 0 0 covered\ncell 1 0 covered\ncell 0 1 covered\ncell 1 1 covered\n");
    CHECK(board_neighbors(b, {0, 0}).size() == 3);
    CHECK_THROWS_AS(board_neighbors(b, {5, 5}), UnknownCoord);
}

TEST_CASE("parse errors carry a line number") {
    try {
        parse_board("grid hex\ncell 0 0 clue 9\n");
        FAIL("expected an error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    } catch (const ValidationError&) {
    }
    CHECK_THROWS_AS(parse_board("grid square\ncell 0 x covered\n"), ParseError);
    CHECK_THROWS_AS(parse_board("grid triangle\n"), ParseError);
    CHECK_THROWS_AS(parse_board("grid square\nbogus 1 2\n"), ParseError);
}

TEST_CASE("validation flags labels and claims on revealed cells") {
    Board b = parse_board("grid square\ncell 0 0 clue 1\ncell 1 0 covered\n");
    CHECK(validate_board(b).empty());
    b.labels.push_back({{0, 0}, "x", false});
    CHECK_FALSE(validate_board(b).empty());
}

TEST_CASE("serialize then parse is the identity on random boards") {
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        GridKind g = i % 2 ? GridKind::Hex : GridKind::Square;
        Board b = testing::random_board(rng, g, 16, true);
        std::string text = serialize_board(b);
        Board back = parse_board(text);
        CHECK(back == b);
        CHECK(serialize_board(back) == text);
    }
}

TEST_CASE("every fixture round-trips through the text format") {
    std::vector<std::string> texts{testing::read_text(testing::data_path("boards/example1.board"))};
    for (const auto& name : catalog_names()) texts.push_back(serialize_board(get_gadget(name).footprint));
    for (const auto& text : texts) {
        Board b = parse_board(text);
        CHECK(parse_board(serialize_board(b)) == b);
        CHECK(serialize_board(parse_board(serialize_board(b))) == serialize_board(b));
    }
    for (const auto& name : catalog_names()) {
        Gadget g = get_gadget(name);
        std::string text = serialize_gadget(g);
        Gadget back = parse_gadget(text, name);
        CHECK(back.footprint == g.footprint);
        CHECK(back.ports == g.ports);
        CHECK(back.period == g.period);
        CHECK(serialize_gadget(back) == text);
    }
}

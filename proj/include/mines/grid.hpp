#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mines {

enum class GridKind { Square, Hex };

std::string to_string(GridKind g);
std::optional<GridKind> parse_grid_kind(std::string_view s);

// Square boards use (col, row) with row increasing upwards; hex boards use
// axial (q, r). Ordering is by (row, col), which is the canonical cell order
// everywhere in the library.
struct Coord {
    int col = 0;
    int row = 0;

    friend bool operator==(const Coord&, const Coord&) = default;
    friend std::strong_ordering operator<=>(const Coord& a, const Coord& b) {
        if (auto c = a.row <=> b.row; c != 0) return c;
        return a.col <=> b.col;
    }
    Coord operator+(Coord o) const { return {col + o.col, row + o.row}; }
    Coord operator-(Coord o) const { return {col - o.col, row - o.row}; }
    Coord operator*(int k) const { return {col * k, row * k}; }
};

std::string to_string(Coord c);

// Neighbourhood in canonical (row, col) order.
std::vector<Coord> neighbors(GridKind g, Coord c);
const std::vector<Coord>& neighbor_offsets(GridKind g);
int max_clue(GridKind g);

struct Cell {
    // Flagged cells are revealed mines: not variables, but they count
    // towards every neighbouring clue.
    enum class Kind { Clue, Covered, Flagged };
    Kind kind = Kind::Covered;
    int clue = 0;

    static Cell make_clue(int n) { return {Kind::Clue, n}; }
    static Cell make_covered() { return {Kind::Covered, 0}; }
    static Cell make_flagged() { return {Kind::Flagged, 0}; }
    bool is_clue() const { return kind == Kind::Clue; }
    bool is_covered() const { return kind == Kind::Covered; }
    bool is_flagged() const { return kind == Kind::Flagged; }
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Label {
    Coord at;
    std::string name;
    bool primed = false;
    friend bool operator==(const Label&, const Label&) = default;
};

struct Board {
    GridKind grid = GridKind::Square;
    std::map<Coord, Cell> cells;
    std::vector<Label> labels;
    std::set<Coord> mines;       // forced-mine claims, verified by the solver
    std::set<Coord> highlights;  // rendering hint only

    const Cell* find(Coord c) const;
    bool contains(Coord c) const { return cells.count(c) != 0; }
    std::vector<Coord> covered_cells() const;  // canonical order
    std::vector<const Label*> labels_named(std::string_view name) const;
    std::vector<std::string> label_names() const;  // sorted, unique

    friend bool operator==(const Board&, const Board&) = default;
};

struct Violation {
    Coord at;
    std::string message;
    bool warning = false;
};

std::vector<Violation> validate_board(const Board& b);
std::vector<Coord> board_neighbors(const Board& b, Coord c);

class UnknownCoord : public std::runtime_error {
public:
    explicit UnknownCoord(Coord c)
        : std::runtime_error("unknown coordinate " + to_string(c)), at(c) {}
    Coord at;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason), line(line) {}
    int line;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Board parse_board(std::string_view text);
std::string serialize_board(const Board& b);

// Splits text into lines and whitespace-separated tokens, dropping comments.
std::vector<std::string> tokenize_line(std::string_view line);
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace mines

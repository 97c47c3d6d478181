#include "mines/grid.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace mines {

std::string to_string(GridKind g) { return g == GridKind::Square ? "square" : "hex"; }

std::optional<GridKind> parse_grid_kind(std::string_view s) {
    if (s == "square") return GridKind::Square;
    if (s == "hex") return GridKind::Hex;
    return std::nullopt;
}

std::string to_string(Coord c) {
    return "(" + std::to_string(c.col) + "," + std::to_string(c.row) + ")";
}

const std::vector<Coord>& neighbor_offsets(GridKind g) {
    static const std::vector<Coord> square = {
        {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}};
    static const std::vector<Coord> hex = {{0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}};
    return g == GridKind::Square ? square : hex;
}

std::vector<Coord> neighbors(GridKind g, Coord c) {
    std::vector<Coord> out;
    for (Coord d : neighbor_offsets(g)) out.push_back(c + d);
    return out;
}

int max_clue(GridKind g) { return g == GridKind::Square ? 8 : 6; }

const Cell* Board::find(Coord c) const {
    auto it = cells.find(c);
    return it == cells.end() ? nullptr : &it->second;
}

std::vector<Coord> Board::covered_cells() const {
    std::vector<Coord> out;
    for (const auto& [c, cell] : cells)
        if (cell.is_covered()) out.push_back(c);
    return out;
}

std::vector<const Label*> Board::labels_named(std::string_view name) const {
    std::vector<const Label*> out;
    for (const auto& l : labels)
        if (l.name == name) out.push_back(&l);
    return out;
}

std::vector<std::string> Board::label_names() const {
    std::set<std::string> names;
    for (const auto& l : labels) names.insert(l.name);
    return {names.begin(), names.end()};
}

std::vector<Coord> board_neighbors(const Board& b, Coord c) {
    if (!b.contains(c)) throw UnknownCoord(c);
    std::vector<Coord> out;
    for (Coord n : neighbors(b.grid, c))
        if (b.contains(n)) out.push_back(n);
    return out;
}

std::vector<Violation> validate_board(const Board& b) {
    std::vector<Violation> out;
    const int hi = max_clue(b.grid);
    for (const auto& [c, cell] : b.cells) {
        if (!cell.is_clue()) continue;
        if (cell.clue < 0 || cell.clue > hi) {
            out.push_back({c, "clue " + std::to_string(cell.clue) + " outside [0," +
                                  std::to_string(hi) + "]"});
            continue;
        }
        int live = 0;
        for (Coord n : board_neighbors(b, c))
            if (!b.find(n)->is_clue()) ++live;
        if (cell.clue > live)
            out.push_back({c, "clue " + std::to_string(cell.clue) + " exceeds its " +
                                  std::to_string(live) + " live neighbours", true});
    }
    auto check_target = [&](Coord c, const std::string& what) {
        const Cell* cell = b.find(c);
        if (!cell)
            out.push_back({c, what + " on a cell outside the board"});
        else if (!cell->is_covered())
            out.push_back({c, what + " on a cell that is not covered"});
    };
    for (const auto& l : b.labels) check_target(l.at, "label " + l.name);
    for (Coord c : b.mines) check_target(c, "mine claim");
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

std::vector<std::string> tokenize_line(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

namespace {

int to_int(const std::string& s, int line) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError(line, "expected an integer, got '" + s + "'");
    return v;
}

void expect_arity(const std::vector<std::string>& t, std::size_t n, int line) {
    if (t.size() != n)
        throw ParseError(line, "'" + t[0] + "' expects " + std::to_string(n - 1) + " fields");
}

}  // namespace

Board parse_board(std::string_view text) {
    Board b;
    bool have_grid = false;
    int lineno = 0;
    for (std::string_view raw : split_lines(text)) {
        ++lineno;
        auto t = tokenize_line(raw);
        if (t.empty()) continue;
        const std::string& kw = t[0];
        if (kw == "grid") {
            expect_arity(t, 2, lineno);
            if (have_grid) throw ParseError(lineno, "duplicate grid line");
            auto g = parse_grid_kind(t[1]);
            if (!g) throw ParseError(lineno, "unknown grid kind '" + t[1] + "'");
            b.grid = *g;
            have_grid = true;
            continue;
        }
        if (!have_grid) throw ParseError(lineno, "board must start with a grid line");
        if (kw == "cell") {
            if (t.size() < 4) throw ParseError(lineno, "'cell' expects col row kind");
            Coord c{to_int(t[1], lineno), to_int(t[2], lineno)};
            Cell cell;
            if (t[3] == "clue") {
                expect_arity(t, 5, lineno);
                cell = Cell::make_clue(to_int(t[4], lineno));
            } else if (t[3] == "covered") {
                expect_arity(t, 4, lineno);
                cell = Cell::make_covered();
            } else if (t[3] == "flagged") {
                expect_arity(t, 4, lineno);
                cell = Cell::make_flagged();
            } else {
                throw ParseError(lineno, "unknown cell kind '" + t[3] + "'");
            }
            if (!b.cells.emplace(c, cell).second)
                throw ParseError(lineno, "duplicate cell " + to_string(c));
        } else if (kw == "label") {
            expect_arity(t, 5, lineno);
            if (t[4] != "plain" && t[4] != "primed")
                throw ParseError(lineno, "label polarity must be plain or primed");
            b.labels.push_back(
                {{to_int(t[1], lineno), to_int(t[2], lineno)}, t[3], t[4] == "primed"});
        } else if (kw == "mine") {
            expect_arity(t, 3, lineno);
            b.mines.insert({to_int(t[1], lineno), to_int(t[2], lineno)});
        } else if (kw == "highlight") {
            expect_arity(t, 3, lineno);
            b.highlights.insert({to_int(t[1], lineno), to_int(t[2], lineno)});
        } else {
            throw ParseError(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (!have_grid) throw ParseError(lineno, "missing grid line");
    for (const auto& v : validate_board(b))
        if (!v.warning) throw ValidationError(to_string(v.at) + ": " + v.message);
    return b;
}

std::string serialize_board(const Board& b) {
    std::ostringstream out;
    out << "grid " << to_string(b.grid) << '\n';
    for (const auto& [c, cell] : b.cells) {
        out << "cell " << c.col << ' ' << c.row << ' ';
        switch (cell.kind) {
            case Cell::Kind::Clue: out << "clue " << cell.clue; break;
            case Cell::Kind::Covered: out << "covered"; break;
            case Cell::Kind::Flagged: out << "flagged"; break;
        }
        out << '\n';
    }
    for (const auto& l : b.labels)
        out << "label " << l.at.col << ' ' << l.at.row << ' ' << l.name << ' '
            << (l.primed ? "primed" : "plain") << '\n';
    for (Coord c : b.mines) out << "mine " << c.col << ' ' << c.row << '\n';
    for (Coord c : b.highlights) out << "highlight " << c.col << ' ' << c.row << '\n';
    return out.str();
}

}  // namespace mines

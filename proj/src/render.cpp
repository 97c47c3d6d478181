#include "mines/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace mines {

namespace {

char glyph(const Board& b, Coord c, const Cell& cell, const RenderStyle& s) {
    if (cell.is_clue()) return static_cast<char>('0' + cell.clue);
    if (cell.kind == Cell::Kind::Flagged) return s.flagged;
    if (b.mines.count(c) || s.forced.count(c)) return s.mine;
    if (s.ascii_labels)
        for (const auto& l : b.labels)
            if (l.at == c && !l.name.empty()) return l.name[0];
    return s.covered;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string out = buf;
    if (out == "-0.00") out = "0.00";
    return out;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

struct Point {
    double x, y;
};

Point center(GridKind g, Coord c, double size) {
    if (g == GridKind::Square) return {c.col * size, -c.row * size};
    return {size * std::sqrt(3.0) * (c.col + c.row / 2.0), size * 1.5 * c.row};
}

}  // namespace

std::string render_ascii(const Board& b, const RenderStyle& s) {
    if (b.cells.empty()) return "";
    std::map<int, std::map<int, char>> lines;  // text line -> column -> glyph
    for (const auto& [c, cell] : b.cells) {
        int line = b.grid == GridKind::Hex ? c.row : -c.row;
        int col = b.grid == GridKind::Hex ? 2 * c.col + c.row : 2 * c.col;
        lines[line][col] = glyph(b, c, cell, s);
    }
    int min_col = 0;
    bool first = true;
    for (const auto& [line, cols] : lines) {
        if (first || cols.begin()->first < min_col) min_col = cols.begin()->first;
        first = false;
    }
    std::ostringstream out;
    const int top = lines.begin()->first, bottom = lines.rbegin()->first;
    for (int line = top; line <= bottom; ++line) {
        std::string text;
        auto it = lines.find(line);
        if (it != lines.end()) {
            const int last = it->second.rbegin()->first;
            text.assign(static_cast<std::size_t>(last - min_col + 1), ' ');
            if (b.grid == GridKind::Square)
                for (int col = it->second.begin()->first; col <= last; col += 2)
                    text[static_cast<std::size_t>(col - min_col)] = s.blank;
            for (const auto& [col, ch] : it->second) text[static_cast<std::size_t>(col - min_col)] = ch;
        }
        out << text << '\n';
    }
    return out.str();
}

std::string render_svg(const Board& b, const RenderStyle& s) {
    const double size = s.cell_size;
    const bool hex = b.grid == GridKind::Hex;
    const double half_w = hex ? size * std::sqrt(3.0) / 2 : size / 2;
    const double half_h = hex ? size : size / 2;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool first = true;
    for (const auto& [c, cell] : b.cells) {
        Point p = center(b.grid, c, size);
        if (first) x0 = x1 = p.x, y0 = y1 = p.y;
        first = false;
        x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    }
    x0 -= half_w + 2, y0 -= half_h + 2, x1 += half_w + 2, y1 += half_h + 2;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(x0) << ' '
        << num(y0) << ' ' << num(x1 - x0) << ' ' << num(y1 - y0) << "\" width=\"" << num(x1 - x0)
        << "\" height=\"" << num(y1 - y0) << "\">\n";
    out << "<g font-family=\"sans-serif\" font-size=\"" << num(size * 0.6)
        << "\" text-anchor=\"middle\" dominant-baseline=\"central\">\n";
    std::ostringstream overlay;
    for (const auto& [c, cell] : b.cells) {
        Point p = center(b.grid, c, size);
        std::string fill = cell.is_clue() ? s.clue_fill
                           : cell.kind == Cell::Kind::Flagged ? s.flagged_fill
                                                              : s.covered_fill;
        if (b.highlights.count(c)) fill = s.highlight_fill;
        if (hex) {
            out << "<polygon class=\"cell\" points=\"";
            for (int k = 0; k < 6; ++k) {
                double a = (60.0 * k - 90.0) * M_PI / 180.0;
                out << (k ? " " : "") << num(p.x + size * std::cos(a)) << ','
                    << num(p.y + size * std::sin(a));
            }
            out << "\" fill=\"" << fill << "\" stroke=\"#000000\"/>\n";
        } else {
            out << "<rect class=\"cell\" x=\"" << num(p.x - half_w) << "\" y=\"" << num(p.y - half_h)
                << "\" width=\"" << num(size) << "\" height=\"" << num(size) << "\" fill=\"" << fill
                << "\" stroke=\"#000000\"/>\n";
        }
        if (cell.is_clue())
            overlay << "<text x=\"" << num(p.x) << "\" y=\"" << num(p.y) << "\">" << cell.clue
                    << "</text>\n";
        if (b.mines.count(c) || s.forced.count(c))
            overlay << "<circle class=\"mine\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y)
                    << "\" r=\"" << num(size * 0.3) << "\" fill=\"#808080\"/>\n";
    }
    for (const auto& l : b.labels) {
        Point p = center(b.grid, l.at, size);
        overlay << "<text class=\"label\" x=\"" << num(p.x) << "\" y=\"" << num(p.y) << "\">"
                << escape(l.name) << (l.primed ? "&#8242;" : "") << "</text>\n";
    }
    out << overlay.str() << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace mines

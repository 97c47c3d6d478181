#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mines/grid.hpp"

namespace mines::testing {

inline std::string data_path(const std::string& rel) { return std::string(MINES_DATA_DIR) + "/" + rel; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A random board inside a small window: a mix of clues, covered and
// flagged cells, with random (possibly contradictory) clue values.
inline Board random_board(std::mt19937& rng, GridKind grid, std::size_t max_covered = 16,
                          bool decorations = false) {
    std::uniform_int_distribution<int> size(2, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Board b;
    b.grid = grid;
    int w = size(rng), h = size(rng);
    std::size_t covered = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double x = u(rng);
            if (x < 0.1) continue;
            if (x < 0.5 && covered < max_covered) {
                b.cells[{c, r}] = Cell::make_covered();
                ++covered;
            } else if (x < 0.55) {
                b.cells[{c, r}] = Cell::make_flagged();
            } else {
                b.cells[{c, r}] = Cell::make_clue(0);
            }
        }
    }
    for (auto& [c, cell] : b.cells) {
        if (!cell.is_clue()) continue;
        int live = 0;
        for (Coord n : neighbors(grid, c))
            if (b.contains(n) && !b.find(n)->is_clue()) ++live;
        cell.clue = std::uniform_int_distribution<int>(0, live)(rng);
    }
    if (decorations) {
        auto cov = b.covered_cells();
        for (std::size_t i = 0; i < cov.size(); ++i) {
            double x = u(rng);
            if (x < 0.2) b.labels.push_back({cov[i], std::string(1, static_cast<char>('a' + i % 5)), x < 0.1});
            else if (x < 0.3) b.mines.insert(cov[i]);
        }
        for (const auto& [c, cell] : b.cells)
            if (u(rng) < 0.1) b.highlights.insert(c);
    }
    return b;
}

// Brute force over all 2^n assignments of the covered cells (canonical order).
inline std::vector<std::vector<bool>> brute_force(const Board& b) {
    std::vector<Coord> vars;
    for (const auto& [c, cell] : b.cells)
        if (cell.kind == Cell::Kind::Covered) vars.push_back(c);
    std::vector<std::vector<bool>> out;
    const std::size_t n = vars.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        auto mine = [&](Coord c) {
            for (std::size_t i = 0; i < n; ++i)
                if (vars[i] == c) return ((mask >> i) & 1) != 0;
            const auto it = b.cells.find(c);
            return it != b.cells.end() && it->second.kind == Cell::Kind::Flagged;
        };
        bool ok = true;
        for (const auto& [c, cell] : b.cells) {
            if (cell.kind != Cell::Kind::Clue) continue;
            int count = 0;
            for (Coord off : neighbor_offsets(b.grid)) count += mine(c + off) ? 1 : 0;
            if (count != cell.clue) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<bool> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = (mask >> i) & 1;
        out.push_back(row);
    }
    return out;
}

}  // namespace mines::testing

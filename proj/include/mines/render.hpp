#pragma once

#include <map>
#include <set>
#include <string>

#include "mines/grid.hpp"

namespace mines {

struct RenderStyle {
    double cell_size = 24.0;  // SVG units: square side, hexagon circumradius
    char covered = '#';
    char flagged = 'F';
    char mine = '*';  // forced-mine annotations and `forced` cells
    char blank = '.';  // empty positions inside the bounding box (square only)
    bool ascii_labels = false;  // show the first letter of a label instead of `#`
    std::set<Coord> forced;  // extra cells to mark as forced mines
    std::string clue_fill = "#ffffff";
    std::string covered_fill = "#c8c8c8";
    std::string flagged_fill = "#606060";
    std::string highlight_fill = "#4169e1";
};

// Square boards print row-major with the highest row first. Hex boards use
// offset rows: axial (q, r) goes to text line r at column 2q + r, so
// successive rows shift by half a cell as in the drawings.
std::string render_ascii(const Board& b, const RenderStyle& s = {});
std::string render_svg(const Board& b, const RenderStyle& s = {});

}  // namespace mines

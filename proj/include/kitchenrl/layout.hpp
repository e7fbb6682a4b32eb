#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kitchenrl {

enum class Tile : uint8_t {
    Floor,
    Counter,
    OnionDispenser,
    DishDispenser,
    Pot,
    Delivery,
};

struct Cell {
    int x = 0;
    int y = 0;

    bool operator==(const Cell&) const = default;
};

class LayoutError : public std::runtime_error {
  public:
    LayoutError(const std::string& msg, int row, int col)
        : std::runtime_error(msg + " (row " + std::to_string(row) + ", col " +
                             std::to_string(col) + ")"),
          row(row),
          col(col) {}
    explicit LayoutError(const std::string& msg) : std::runtime_error(msg), row(-1), col(-1) {}

    int row;
    int col;
};

// Static kitchen geometry, parsed from the ASCII format:
//   X counter, O onion dispenser, D dish dispenser, P pot, S delivery,
//   ' ' floor, 1/2 spawn points (on floor).
struct Layout {
    int width = 0;
    int height = 0;
    std::vector<Tile> tiles;           // row-major, height*width
    std::array<Cell, 2> spawn_points;  // agent 0, agent 1
    std::vector<Cell> pot_cells;
    std::vector<Cell> counter_cells;
    std::vector<Cell> floor_cells;     // row-major order

    Tile at(int x, int y) const { return tiles[static_cast<size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    bool is_floor(int x, int y) const { return in_bounds(x, y) && at(x, y) == Tile::Floor; }

    // Index of a floor cell within floor_cells, -1 if not floor.
    int floor_index(Cell c) const;
    // Index of a counter cell within counter_cells, -1 if not counter.
    int counter_index(Cell c) const;
    int pot_index(Cell c) const;
};

Layout parse_layout(const std::string& text);
Layout load_layout_file(const std::string& path);

// Small hand-authored kitchen with one pot, one onion dispenser, one dish
// dispenser and one delivery tile. Used whenever no layout file is given.
const std::string& default_layout_text();

}  // namespace kitchenrl

#include "kitchenrl/layout.hpp"

#include <fstream>
#include <sstream>

namespace kitchenrl {

namespace {

std::vector<std::string> split_rows(const std::string& text) {
    std::vector<std::string> rows;
    std::string row;
    std::istringstream in(text);
    while (std::getline(in, row)) {
        if (!row.empty() && row.back() == '\r') row.pop_back();
        rows.push_back(row);
    }
    while (!rows.empty() && rows.back().empty()) rows.pop_back();
    return rows;
}

}  // namespace

int Layout::floor_index(Cell c) const {
    for (size_t i = 0; i < floor_cells.size(); ++i)
        if (floor_cells[i] == c) return static_cast<int>(i);
    return -1;
}

int Layout::counter_index(Cell c) const {
    for (size_t i = 0; i < counter_cells.size(); ++i)
        if (counter_cells[i] == c) return static_cast<int>(i);
    return -1;
}

int Layout::pot_index(Cell c) const {
    for (size_t i = 0; i < pot_cells.size(); ++i)
        if (pot_cells[i] == c) return static_cast<int>(i);
    return -1;
}

Layout parse_layout(const std::string& text) {
    const auto rows = split_rows(text);
    if (rows.empty()) throw LayoutError("empty layout");

    Layout layout;
    layout.height = static_cast<int>(rows.size());
    layout.width = static_cast<int>(rows[0].size());
    if (layout.width == 0) throw LayoutError("empty first row", 0, 0);
    layout.tiles.assign(static_cast<size_t>(layout.width) * layout.height, Tile::Floor);

    bool seen_spawn[2] = {false, false};
    int dispensers = 0, dish_dispensers = 0, deliveries = 0;

    for (int y = 0; y < layout.height; ++y) {
        if (static_cast<int>(rows[y].size()) != layout.width)
            throw LayoutError("non-rectangular grid", y, static_cast<int>(rows[y].size()));
        for (int x = 0; x < layout.width; ++x) {
            const char c = rows[y][static_cast<size_t>(x)];
            Tile tile = Tile::Floor;
            switch (c) {
                case 'X': tile = Tile::Counter; break;
                case 'O': tile = Tile::OnionDispenser; ++dispensers; break;
                case 'D': tile = Tile::DishDispenser; ++dish_dispensers; break;
                case 'P': tile = Tile::Pot; break;
                case 'S': tile = Tile::Delivery; ++deliveries; break;
                case ' ': tile = Tile::Floor; break;
                case '1':
                case '2': {
                    const int agent = c - '1';
                    if (seen_spawn[agent])
                        throw LayoutError(std::string("duplicate spawn point '") + c + "'", y, x);
                    seen_spawn[agent] = true;
                    layout.spawn_points[static_cast<size_t>(agent)] = {x, y};
                    tile = Tile::Floor;
                    break;
                }
                default:
                    throw LayoutError(std::string("unknown character '") + c + "'", y, x);
            }
            layout.tiles[static_cast<size_t>(y) * layout.width + x] = tile;
            if (tile == Tile::Pot) layout.pot_cells.push_back({x, y});
            if (tile == Tile::Counter) layout.counter_cells.push_back({x, y});
            if (tile == Tile::Floor) layout.floor_cells.push_back({x, y});
        }
    }

    if (!seen_spawn[0] || !seen_spawn[1]) throw LayoutError("layout must contain spawn points 1 and 2");
    if (layout.pot_cells.empty()) throw LayoutError("layout missing required tile: pot");
    if (dispensers == 0) throw LayoutError("layout missing required tile: onion_dispenser");
    if (dish_dispensers == 0) throw LayoutError("layout missing required tile: dish_dispenser");
    if (deliveries == 0) throw LayoutError("layout missing required tile: delivery");
    if (layout.spawn_points[0] == layout.spawn_points[1])
        throw LayoutError("spawn points coincide");

    // Agents may never leave the grid: every boundary tile must be non-floor.
    for (int x = 0; x < layout.width; ++x) {
        if (layout.at(x, 0) == Tile::Floor || layout.at(x, layout.height - 1) == Tile::Floor)
            throw LayoutError("grid boundary must be non-floor", x == 0 ? 0 : layout.height - 1, x);
    }
    for (int y = 0; y < layout.height; ++y) {
        if (layout.at(0, y) == Tile::Floor || layout.at(layout.width - 1, y) == Tile::Floor)
            throw LayoutError("grid boundary must be non-floor", y, 0);
    }

    return layout;
}

Layout load_layout_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LayoutError("cannot open layout file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_layout(buf.str());
}

const std::string& default_layout_text() {
    static const std::string text =
        "XXPXX\n"
        "O1 2D\n"
        "X   X\n"
        "XXSXX\n";
    return text;
}

}  // namespace kitchenrl

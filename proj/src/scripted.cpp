#include "kitchenrl/scripted.hpp"

#include <deque>
#include <functional>

namespace kitchenrl {

namespace {

constexpr Direction kDirections[4] = {Direction::North, Direction::South, Direction::East,
                                      Direction::West};

Action move_action(Direction d) { return static_cast<Action>(static_cast<int>(d)); }

// Direction from `from` toward an adjacent target cell satisfying `is_target`,
// in fixed N/S/E/W order. Returns false when no neighbor qualifies.
bool facing_direction(const Layout& layout, Cell from, const std::function<bool(Cell)>& is_target,
                      Direction& out) {
    for (Direction d : kDirections) {
        const Cell n = neighbor(from, d);
        if (layout.in_bounds(n.x, n.y) && is_target(n)) {
            out = d;
            return true;
        }
    }
    return false;
}

// BFS over floor cells toward any cell adjacent to a target tile. The other
// agent's cell is treated as blocked; if that disconnects the target, the
// blocked path is retried (the resulting move is a no-op until the other
// agent clears the cell).
Action goto_and_interact(const KitchenState& state, const Layout& layout, AgentId agent,
                         const std::function<bool(Cell)>& is_target) {
    const AgentPose& pose = state.poses[static_cast<size_t>(agent.index)];
    Direction face;
    if (facing_direction(layout, pose.position, is_target, face)) {
        if (pose.orientation == face) return Action::Interact;
        return move_action(face);  // moving into a non-floor tile turns in place
    }

    const Cell blocked = state.poses[static_cast<size_t>(agent.other())].position;
    for (bool respect_partner : {true, false}) {
        std::vector<int> parent_dir(layout.tiles.size(), -1);
        std::deque<Cell> queue{pose.position};
        std::vector<bool> seen(layout.tiles.size(), false);
        const auto idx = [&](Cell c) { return static_cast<size_t>(c.y) * layout.width + c.x; };
        seen[idx(pose.position)] = true;
        while (!queue.empty()) {
            const Cell cur = queue.front();
            queue.pop_front();
            Direction unused;
            if (facing_direction(layout, cur, is_target, unused) && !(cur == pose.position)) {
                // Walk back to the first step out of the start cell.
                Cell walk = cur;
                int first = -1;
                while (!(walk == pose.position)) {
                    first = parent_dir[idx(walk)];
                    const Direction d = static_cast<Direction>(first);
                    // invert the step
                    switch (d) {
                        case Direction::North: walk = neighbor(walk, Direction::South); break;
                        case Direction::South: walk = neighbor(walk, Direction::North); break;
                        case Direction::East: walk = neighbor(walk, Direction::West); break;
                        case Direction::West: walk = neighbor(walk, Direction::East); break;
                    }
                }
                return move_action(static_cast<Direction>(first));
            }
            for (Direction d : kDirections) {
                const Cell n = neighbor(cur, d);
                if (!layout.is_floor(n.x, n.y) || seen[idx(n)]) continue;
                if (respect_partner && n == blocked) continue;
                seen[idx(n)] = true;
                parent_dir[idx(n)] = static_cast<int>(d);
                queue.push_back(n);
            }
        }
    }
    return Action::Stay;
}

// First move of a BFS path to a specific floor cell; Stay when already there
// or unreachable even ignoring the partner.
Action goto_cell(const KitchenState& state, const Layout& layout, AgentId agent, Cell dest) {
    const AgentPose& pose = state.poses[static_cast<size_t>(agent.index)];
    if (pose.position == dest) return Action::Stay;
    const Cell blocked = state.poses[static_cast<size_t>(agent.other())].position;
    const auto idx = [&](Cell c) { return static_cast<size_t>(c.y) * layout.width + c.x; };
    for (bool respect_partner : {true, false}) {
        std::vector<int> parent_dir(layout.tiles.size(), -1);
        std::vector<bool> seen(layout.tiles.size(), false);
        std::deque<Cell> queue{pose.position};
        seen[idx(pose.position)] = true;
        while (!queue.empty()) {
            const Cell cur = queue.front();
            queue.pop_front();
            if (cur == dest) {
                Cell walk = cur;
                int first = -1;
                while (!(walk == pose.position)) {
                    first = parent_dir[idx(walk)];
                    const Direction d = static_cast<Direction>(first);
                    switch (d) {
                        case Direction::North: walk = neighbor(walk, Direction::South); break;
                        case Direction::South: walk = neighbor(walk, Direction::North); break;
                        case Direction::East: walk = neighbor(walk, Direction::West); break;
                        case Direction::West: walk = neighbor(walk, Direction::East); break;
                    }
                }
                return move_action(static_cast<Direction>(first));
            }
            for (Direction d : kDirections) {
                const Cell n = neighbor(cur, d);
                if (!layout.is_floor(n.x, n.y) || seen[idx(n)]) continue;
                if (respect_partner && n == blocked) continue;
                seen[idx(n)] = true;
                parent_dir[idx(n)] = static_cast<int>(d);
                queue.push_back(n);
            }
        }
    }
    return Action::Stay;
}

bool any_pot(const KitchenState& state, const std::function<bool(const PotState&)>& pred) {
    for (const PotState& pot : state.pots)
        if (pred(pot)) return true;
    return false;
}

std::function<bool(Cell)> pot_matching(const KitchenState& state, const Layout& layout,
                                       const std::function<bool(const PotState&)>& pred) {
    return [&state, &layout, pred](Cell c) {
        const int pi = layout.pot_index(c);
        return pi >= 0 && pred(state.pots[static_cast<size_t>(pi)]);
    };
}

std::function<bool(Cell)> tile_is(const Layout& layout, Tile tile) {
    return [&layout, tile](Cell c) { return layout.at(c.x, c.y) == tile; };
}

}  // namespace

Action scripted_delivery_policy(const KitchenState& state, const Layout& layout,
                                const KitchenConfig& /*config*/, AgentId agent) {
    const AgentPose& pose = state.poses[static_cast<size_t>(agent.index)];
    const auto ready = [](const PotState& p) { return p.ready; };
    const auto accepts = [](const PotState& p) { return p.accepts_onion(); };
    const auto full = [](const PotState& p) { return p.onion_count == 3; };

    switch (pose.held) {
        case Item::Soup:
            return goto_and_interact(state, layout, agent, tile_is(layout, Tile::Delivery));
        case Item::Dish:
            if (any_pot(state, ready))
                return goto_and_interact(state, layout, agent, pot_matching(state, layout, ready));
            return Action::Stay;  // wait for the cook timer
        case Item::Onion:
            if (any_pot(state, accepts))
                return goto_and_interact(state, layout, agent, pot_matching(state, layout, accepts));
            return Action::Stay;
        case Item::Nothing:
            break;
    }

    if (agent.index == 0) {
        // Onion ferry: keep the pot fed, then clear the aisle.
        if (any_pot(state, accepts))
            return goto_and_interact(state, layout, agent, tile_is(layout, Tile::OnionDispenser));
        return goto_cell(state, layout, agent, layout.spawn_points[0]);
    }
    // Plater: fetch a dish once a batch is in the pot, otherwise stand by.
    if (any_pot(state, full))
        return goto_and_interact(state, layout, agent, tile_is(layout, Tile::DishDispenser));
    return Action::Stay;
}

}  // namespace kitchenrl

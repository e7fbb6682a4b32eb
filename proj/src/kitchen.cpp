#include "kitchenrl/kitchen.hpp"

#include <sstream>
#include <stdexcept>

namespace kitchenrl {

namespace {

Direction action_direction(Action a) {
    switch (a) {
        case Action::North: return Direction::North;
        case Action::South: return Direction::South;
        case Action::East: return Direction::East;
        case Action::West: return Direction::West;
        default: break;
    }
    throw std::logic_error("not a movement action");
}

bool is_move(Action a) {
    return a == Action::North || a == Action::South || a == Action::East || a == Action::West;
}

void interact(KitchenState& state, const Layout& layout, const KitchenConfig& config, int agent,
              StepRewards& rewards) {
    AgentPose& pose = state.poses[static_cast<size_t>(agent)];
    const Cell target = neighbor(pose.position, pose.orientation);
    if (!layout.in_bounds(target.x, target.y)) return;

    switch (layout.at(target.x, target.y)) {
        case Tile::OnionDispenser:
            if (pose.held == Item::Nothing) pose.held = Item::Onion;
            break;
        case Tile::DishDispenser:
            if (pose.held == Item::Nothing) pose.held = Item::Dish;
            break;
        case Tile::Pot: {
            PotState& pot = state.pots[static_cast<size_t>(layout.pot_index(target))];
            if (pose.held == Item::Onion && pot.accepts_onion()) {
                pose.held = Item::Nothing;
                ++pot.onion_count;
                rewards.team_shaping += config.shaping_onion_in_pot;
                if (pot.onion_count == 3) pot.cook_timer = config.cook_time;  // cooking starts
            } else if (pose.held == Item::Dish && pot.ready) {
                pose.held = Item::Soup;
                pot = PotState{};
                rewards.team_shaping += config.shaping_soup_plated;
            }
            break;
        }
        case Tile::Delivery:
            if (pose.held == Item::Soup) {
                pose.held = Item::Nothing;
                rewards.individual[static_cast<size_t>(agent)] += config.delivery_reward;
            }
            break;
        case Tile::Counter: {
            Item& slot = state.counters[static_cast<size_t>(layout.counter_index(target))];
            if (pose.held != Item::Nothing && slot == Item::Nothing) {
                slot = pose.held;
                pose.held = Item::Nothing;
            } else if (pose.held == Item::Nothing && slot != Item::Nothing) {
                pose.held = slot;
                slot = Item::Nothing;
            }
            break;
        }
        case Tile::Floor:
            break;
    }
}

void one_hot(Observation& out, int index, int size) {
    for (int i = 0; i < size; ++i) out.push_back(i == index ? 1.0 : 0.0);
}

}  // namespace

KitchenState initial_state(const Layout& layout) {
    KitchenState state;
    for (int i = 0; i < kNumAgents; ++i) {
        state.poses[static_cast<size_t>(i)].position = layout.spawn_points[static_cast<size_t>(i)];
        state.poses[static_cast<size_t>(i)].orientation = Direction::North;
        state.poses[static_cast<size_t>(i)].held = Item::Nothing;
    }
    state.pots.assign(layout.pot_cells.size(), PotState{});
    state.counters.assign(layout.counter_cells.size(), Item::Nothing);
    state.step = 0;
    return state;
}

StepRewards step_kitchen(KitchenState& state, const Layout& layout, const KitchenConfig& config,
                         const JointAction& joint_action) {
    if (state.step >= config.horizon) throw std::logic_error("step_kitchen called past horizon");

    // Pot timers tick first.
    for (PotState& pot : state.pots) {
        if (pot.cook_timer > 0) {
            --pot.cook_timer;
            if (pot.cook_timer == 0) pot.ready = true;
        }
    }

    // Simultaneous movement. Moving into a non-floor tile turns in place;
    // same-cell and swap conflicts block both agents.
    std::array<Cell, kNumAgents> desired;
    for (int i = 0; i < kNumAgents; ++i) {
        AgentPose& pose = state.poses[static_cast<size_t>(i)];
        desired[static_cast<size_t>(i)] = pose.position;
        const Action a = joint_action[i];
        if (is_move(a)) {
            const Direction d = action_direction(a);
            pose.orientation = d;
            const Cell target = neighbor(pose.position, d);
            if (layout.is_floor(target.x, target.y)) desired[static_cast<size_t>(i)] = target;
        }
    }
    const bool same_cell = desired[0] == desired[1];
    const bool swap = desired[0] == state.poses[1].position && desired[1] == state.poses[0].position;
    if (!same_cell && !swap) {
        state.poses[0].position = desired[0];
        state.poses[1].position = desired[1];
    }

    StepRewards rewards;
    for (int i = 0; i < kNumAgents; ++i) {
        if (joint_action[i] == Action::Interact) interact(state, layout, config, i, rewards);
    }

    ++state.step;
    return rewards;
}

int observation_length(const Layout& layout) {
    const int floor = static_cast<int>(layout.floor_cells.size());
    const int per_agent = floor + 4 + 4;
    return kNumAgents * per_agent + 3 * static_cast<int>(layout.pot_cells.size()) +
           4 * static_cast<int>(layout.counter_cells.size()) + 1;
}

Observation observe(const KitchenState& state, const Layout& layout, const KitchenConfig& config,
                    AgentId agent) {
    Observation obs;
    obs.reserve(static_cast<size_t>(observation_length(layout)));
    const int floor = static_cast<int>(layout.floor_cells.size());
    for (int who : {agent.index, agent.other()}) {
        const AgentPose& pose = state.poses[static_cast<size_t>(who)];
        one_hot(obs, layout.floor_index(pose.position), floor);
        one_hot(obs, static_cast<int>(pose.orientation), 4);
        one_hot(obs, static_cast<int>(pose.held), 4);
    }
    for (const PotState& pot : state.pots) {
        obs.push_back(pot.onion_count / 3.0);
        obs.push_back(config.cook_time > 0 ? static_cast<double>(pot.cook_timer) / config.cook_time
                                           : 0.0);
        obs.push_back(pot.ready ? 1.0 : 0.0);
    }
    for (Item item : state.counters) one_hot(obs, static_cast<int>(item), 4);
    obs.push_back(config.horizon > 0 ? static_cast<double>(state.step) / config.horizon : 0.0);
    return obs;
}

std::string render_ascii(const KitchenState& state, const Layout& layout) {
    std::ostringstream out;
    for (int y = 0; y < layout.height; ++y) {
        for (int x = 0; x < layout.width; ++x) {
            char c = ' ';
            switch (layout.at(x, y)) {
                case Tile::Floor: c = ' '; break;
                case Tile::Counter: c = 'X'; break;
                case Tile::OnionDispenser: c = 'O'; break;
                case Tile::DishDispenser: c = 'D'; break;
                case Tile::Pot: c = 'P'; break;
                case Tile::Delivery: c = 'S'; break;
            }
            const int ci = layout.counter_index({x, y});
            if (ci >= 0 && state.counters[static_cast<size_t>(ci)] != Item::Nothing) c = 'x';
            for (int i = 0; i < kNumAgents; ++i) {
                if (state.poses[static_cast<size_t>(i)].position == Cell{x, y}) c = char('a' + i);
            }
            out << c;
        }
        out << '\n';
    }
    for (size_t p = 0; p < state.pots.size(); ++p) {
        const PotState& pot = state.pots[p];
        out << "pot " << p << ": onions=" << pot.onion_count << " timer=" << pot.cook_timer
            << (pot.ready ? " ready" : "") << '\n';
    }
    out << "step " << state.step << '\n';
    return out.str();
}

KitchenEnv::KitchenEnv(Layout layout, KitchenConfig config)
    : layout_(std::move(layout)), config_(config), state_(initial_state(layout_)) {}

std::array<Observation, kNumAgents> KitchenEnv::reset(uint64_t /*seed*/) {
    // The default dynamics and initial state are deterministic; the seed is
    // part of the contract so stochastic layouts can slot in later.
    state_ = initial_state(layout_);
    started_ = true;
    done_ = false;
    last_shaping_ = 0.0;
    return {observe(state_, layout_, config_, AgentId{0}),
            observe(state_, layout_, config_, AgentId{1})};
}

Transition KitchenEnv::step(const JointAction& joint_action) {
    if (!started_) throw std::logic_error("step called before reset");
    if (done_) throw std::logic_error("step called on a finished episode");

    Transition t;
    t.state = {observe(state_, layout_, config_, AgentId{0}),
               observe(state_, layout_, config_, AgentId{1})};
    t.joint_action = joint_action;

    const StepRewards rewards = step_kitchen(state_, layout_, config_, joint_action);
    t.individual_rewards = rewards.individual;
    t.team_reward = rewards.team_sparse();
    last_shaping_ = rewards.team_shaping;

    done_ = state_.step >= config_.horizon;
    t.done = done_;
    t.next_state = {observe(state_, layout_, config_, AgentId{0}),
                    observe(state_, layout_, config_, AgentId{1})};
    return t;
}

}  // namespace kitchenrl

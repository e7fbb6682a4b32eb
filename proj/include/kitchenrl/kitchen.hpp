#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kitchenrl/layout.hpp"
#include "kitchenrl/types.hpp"

namespace kitchenrl {

enum class Direction : int { North = 0, South = 1, East = 2, West = 3 };

enum class Item : int { Nothing = 0, Onion = 1, Dish = 2, Soup = 3 };

inline Cell neighbor(Cell c, Direction d) {
    switch (d) {
        case Direction::North: return {c.x, c.y - 1};
        case Direction::South: return {c.x, c.y + 1};
        case Direction::East: return {c.x + 1, c.y};
        case Direction::West: return {c.x - 1, c.y};
    }
    return c;
}

struct AgentPose {
    Cell position;
    Direction orientation = Direction::North;
    Item held = Item::Nothing;
};

struct PotState {
    int onion_count = 0;   // 0..3
    int cook_timer = 0;    // remaining cook steps, >0 only while cooking
    bool ready = false;

    bool cooking() const { return cook_timer > 0; }
    bool accepts_onion() const { return onion_count < 3 && !cooking() && !ready; }
};

struct KitchenState {
    std::array<AgentPose, kNumAgents> poses;
    std::vector<PotState> pots;            // one per layout pot cell
    std::vector<Item> counters;            // one per layout counter cell
    int step = 0;
};

struct KitchenConfig {
    int horizon = 500;
    int cook_time = 20;
    double delivery_reward = 20.0;
    // Shaping is off in the default configuration; when enabled, these are
    // paid as team-level bonuses on irreversible pipeline progress events.
    double shaping_onion_in_pot = 0.0;
    double shaping_soup_plated = 0.0;
};

struct StepRewards {
    std::array<double, kNumAgents> individual{0.0, 0.0};  // sparse delivery reward
    double team_shaping = 0.0;                            // progress-event bonuses

    double team_sparse() const { return individual[0] + individual[1]; }
};

KitchenState initial_state(const Layout& layout);

// Applies one joint action: simultaneous movement with collision blocking,
// then interactions (agent 0 resolved before agent 1), with pot timers
// ticking before interactions. Illegal interactions are no-ops.
StepRewards step_kitchen(KitchenState& state, const Layout& layout, const KitchenConfig& config,
                         const JointAction& joint_action);

// Flat featurization: own/partner position, orientation and held-item
// one-hots, per-pot fill/timer/ready, per-counter item one-hot, step fraction.
Observation observe(const KitchenState& state, const Layout& layout, const KitchenConfig& config,
                    AgentId agent);
int observation_length(const Layout& layout);

std::string render_ascii(const KitchenState& state, const Layout& layout);

// Environment contract used by learners and the experiment runner. Owns one
// KitchenState; deterministic given (seed, action sequence).
class KitchenEnv {
  public:
    KitchenEnv(Layout layout, KitchenConfig config);

    std::array<Observation, kNumAgents> reset(uint64_t seed);
    Transition step(const JointAction& joint_action);

    bool done() const { return done_; }
    const KitchenState& state() const { return state_; }
    const Layout& layout() const { return layout_; }
    const KitchenConfig& config() const { return config_; }
    // Shaping bonus earned on the most recent step (team-level).
    double last_step_shaping() const { return last_shaping_; }

  private:
    Layout layout_;
    KitchenConfig config_;
    KitchenState state_;
    bool started_ = false;
    bool done_ = false;
    double last_shaping_ = 0.0;
};

}  // namespace kitchenrl

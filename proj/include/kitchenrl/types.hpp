#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace kitchenrl {

// Two-agent game: agent 0 is the student, agent 1 the teammate.
inline constexpr int kNumAgents = 2;

struct AgentId {
    int index = 0;  // 0 or 1

    int other() const { return 1 - index; }
};

enum class Action : int {
    North = 0,
    South = 1,
    East = 2,
    West = 3,
    Stay = 4,
    Interact = 5,
};

inline constexpr int kNumActions = 6;

struct JointAction {
    std::array<Action, kNumAgents> actions{Action::Stay, Action::Stay};

    Action operator[](int agent) const { return actions[static_cast<size_t>(agent)]; }
};

using Observation = std::vector<double>;

// One environment step as seen by both agents.
struct Transition {
    std::array<Observation, kNumAgents> state;
    JointAction joint_action;
    std::array<double, kNumAgents> individual_rewards{0.0, 0.0};
    double team_reward = 0.0;
    std::array<Observation, kNumAgents> next_state;
    bool done = false;
};

struct DiscountFactor {
    double gamma = 0.99;
};

}  // namespace kitchenrl

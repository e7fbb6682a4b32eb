#include <random>

#include "doctest.h"
#include "kitchenrl/kitchen.hpp"
#include "kitchenrl/scripted.hpp"

using namespace kitchenrl;

namespace {

Layout default_layout() { return parse_layout(default_layout_text()); }

KitchenConfig default_config() { return KitchenConfig{}; }

// Total onions in play: held + in pots + on counters.
int onion_census(const KitchenState& state) {
    int n = 0;
    for (const AgentPose& pose : state.poses)
        if (pose.held == Item::Onion) ++n;
    for (const PotState& pot : state.pots) n += pot.onion_count;
    for (Item item : state.counters)
        if (item == Item::Onion) ++n;
    return n;
}

}  // namespace

TEST_CASE("reset is deterministic and seed-independent on the default layout") {
    KitchenEnv env(default_layout(), default_config());
    const auto a = env.reset(7);
    const auto b = env.reset(7);
    const auto c = env.reset(8);
    CHECK(a == b);
    CHECK(a == c);  // fixed spawn points, no stochastic initial state
    CHECK(env.state().step == 0);
    for (const PotState& pot : env.state().pots) CHECK(pot.onion_count == 0);
}

TEST_CASE("stepping a finished episode is an error, not a silent reset") {
    KitchenConfig config = default_config();
    config.horizon = 3;
    KitchenEnv env(default_layout(), config);
    env.reset(0);
    for (int i = 0; i < 2; ++i) CHECK_FALSE(env.step(JointAction{}).done);
    CHECK(env.step(JointAction{}).done);  // step N-1 sets done
    CHECK_THROWS_AS(env.step(JointAction{}), std::logic_error);
}

TEST_CASE("no delivery event means zero team reward") {
    KitchenEnv env(default_layout(), default_config());
    env.reset(0);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> dist(0, kNumActions - 1);
    for (int i = 0; i < 200; ++i) {
        JointAction joint;
        joint.actions[0] = static_cast<Action>(dist(rng));
        joint.actions[1] = static_cast<Action>(dist(rng));
        const Transition t = env.step(joint);
        // random play never finishes the pipeline this quickly on this layout
        CHECK(t.team_reward == t.individual_rewards[0] + t.individual_rewards[1]);
    }
}

TEST_CASE("both agents staying leaves everything but step and timers untouched") {
    const Layout layout = default_layout();
    const KitchenConfig config = default_config();
    KitchenState state = initial_state(layout);
    KitchenState before = state;
    JointAction stay;
    step_kitchen(state, layout, config, stay);
    CHECK(state.step == before.step + 1);
    CHECK(state.poses[0].position == before.poses[0].position);
    CHECK(state.poses[1].position == before.poses[1].position);
    CHECK(state.poses[0].held == before.poses[0].held);
    CHECK(state.counters == before.counters);
}

TEST_CASE("soup pipeline: onion pickup, cooking, plating, delivery") {
    const Layout layout = default_layout();
    KitchenConfig config = default_config();
    config.cook_time = 2;
    KitchenState state = initial_state(layout);

    // Agent 0 spawns at (1,1) next to the onion dispenser at (0,1).
    const auto act = [&](Action a0, Action a1 = Action::Stay) {
        JointAction joint;
        joint.actions[0] = a0;
        joint.actions[1] = a1;
        return step_kitchen(state, layout, config, joint);
    };

    act(Action::West);  // turn toward the dispenser (wall: no move)
    CHECK(state.poses[0].position == Cell{1, 1});
    act(Action::Interact);
    CHECK(state.poses[0].held == Item::Onion);

    // Ferry three onions into the pot at (2,0), reached from (2,1).
    for (int onion = 0; onion < 3; ++onion) {
        if (onion > 0) {
            act(Action::West);
            act(Action::Interact);
            CHECK(state.poses[0].held == Item::Onion);
        }
        act(Action::East);
        act(Action::North);  // face the pot
        act(Action::Interact);
        CHECK(state.poses[0].held == Item::Nothing);
        CHECK(state.pots[0].onion_count == onion + 1);
    }
    CHECK(state.pots[0].cook_timer == config.cook_time);  // cooking starts automatically
    CHECK_FALSE(state.pots[0].ready);

    // Agent 1 spawns at (3,1) next to the dish dispenser at (4,1).
    act(Action::Stay, Action::East);
    act(Action::Stay, Action::Interact);
    CHECK(state.poses[1].held == Item::Dish);
    CHECK(state.pots[0].ready);  // cook_time steps have passed

    // Agent 0 clears the pot cell so agent 1 can plate.
    act(Action::West, Action::Stay);
    act(Action::Stay, Action::West);
    CHECK(state.poses[1].position == Cell{2, 1});
    act(Action::Stay, Action::North);
    const StepRewards plate = act(Action::Stay, Action::Interact);
    CHECK(state.poses[1].held == Item::Soup);
    CHECK(state.pots[0].onion_count == 0);  // pot resets to empty
    CHECK(plate.individual[0] == 0.0);

    // Deliver at (2,3), reached from (2,2).
    act(Action::Stay, Action::South);
    act(Action::Stay, Action::South);  // wall: turn only
    const StepRewards reward = act(Action::Stay, Action::Interact);
    CHECK(state.poses[1].held == Item::Nothing);
    CHECK(reward.individual[1] == 20.0);
    CHECK(reward.individual[0] == 0.0);
}

TEST_CASE("counters hold at most one item") {
    const Layout layout = default_layout();
    KitchenConfig config = default_config();
    KitchenState state = initial_state(layout);
    // Agent 0 at (1,1): grab an onion and place it on the counter at (1,0).
    JointAction joint;
    joint.actions[0] = Action::West;
    step_kitchen(state, layout, config, joint);
    joint.actions[0] = Action::Interact;
    step_kitchen(state, layout, config, joint);
    joint.actions[0] = Action::North;
    step_kitchen(state, layout, config, joint);
    joint.actions[0] = Action::Interact;
    step_kitchen(state, layout, config, joint);
    CHECK(state.poses[0].held == Item::Nothing);
    const int ci = layout.counter_index({1, 0});
    REQUIRE(ci >= 0);
    CHECK(state.counters[static_cast<size_t>(ci)] == Item::Onion);

    // Grab a second onion; placing onto the occupied counter is a no-op.
    joint.actions[0] = Action::West;
    step_kitchen(state, layout, config, joint);
    joint.actions[0] = Action::Interact;
    step_kitchen(state, layout, config, joint);
    joint.actions[0] = Action::North;
    step_kitchen(state, layout, config, joint);
    joint.actions[0] = Action::Interact;
    step_kitchen(state, layout, config, joint);
    CHECK(state.poses[0].held == Item::Onion);
    CHECK(state.counters[static_cast<size_t>(ci)] == Item::Onion);
}

TEST_CASE("collision oracle: two-agent move conflicts never co-locate agents") {
    // Open 3x3 floor with the required tiles on the border.
    const Layout layout = parse_layout(
        "XXPXX\n"
        "O1  X\n"
        "X   D\n"
        "X  2X\n"
        "XXSXX\n");
    const KitchenConfig config{};

    // Enumerate all placements of two agents on distinct floor cells and all
    // 36 joint actions; after each step the agents must occupy distinct cells
    // and the outcome must be symmetric under agent relabeling.
    for (size_t i = 0; i < layout.floor_cells.size(); ++i) {
        for (size_t j = 0; j < layout.floor_cells.size(); ++j) {
            if (i == j) continue;
            for (int a0 = 0; a0 < kNumActions; ++a0) {
                for (int a1 = 0; a1 < kNumActions; ++a1) {
                    KitchenState state = initial_state(layout);
                    state.poses[0].position = layout.floor_cells[i];
                    state.poses[1].position = layout.floor_cells[j];
                    JointAction joint;
                    joint.actions[0] = static_cast<Action>(a0);
                    joint.actions[1] = static_cast<Action>(a1);
                    step_kitchen(state, layout, config, joint);
                    CHECK_FALSE(state.poses[0].position == state.poses[1].position);

                    KitchenState mirror = initial_state(layout);
                    mirror.poses[0].position = layout.floor_cells[j];
                    mirror.poses[1].position = layout.floor_cells[i];
                    JointAction swapped;
                    swapped.actions[0] = static_cast<Action>(a1);
                    swapped.actions[1] = static_cast<Action>(a0);
                    step_kitchen(mirror, layout, config, swapped);
                    CHECK(mirror.poses[0].position == state.poses[1].position);
                    CHECK(mirror.poses[1].position == state.poses[0].position);
                }
            }
        }
    }
}

TEST_CASE("same-cell and swap conflicts block both agents") {
    const Layout layout = default_layout();
    const KitchenConfig config{};
    KitchenState state = initial_state(layout);
    // Spawns: agent 0 at (1,1), agent 1 at (3,1); both move toward (2,1).
    JointAction joint;
    joint.actions[0] = Action::East;
    joint.actions[1] = Action::West;
    step_kitchen(state, layout, config, joint);
    CHECK(state.poses[0].position == Cell{1, 1});
    CHECK(state.poses[1].position == Cell{3, 1});

    // Adjacent swap attempt.
    state = initial_state(layout);
    state.poses[1].position = {2, 1};
    step_kitchen(state, layout, config, joint);
    CHECK(state.poses[0].position == Cell{1, 1});
    CHECK(state.poses[1].position == Cell{2, 1});
}

TEST_CASE("conservation and pot monotonicity over random play") {
    const Layout layout = default_layout();
    const KitchenConfig config{};
    KitchenEnv env(layout, config);
    env.reset(11);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dist(0, kNumActions - 1);

    int census = onion_census(env.state());
    std::vector<int> timers(env.state().pots.size(), 0);
    for (int step = 0; step < 2000; ++step) {
        if (env.done()) {
            env.reset(static_cast<uint64_t>(step));
            census = onion_census(env.state());
        }
        const KitchenState before = env.state();
        JointAction joint;
        joint.actions[0] = static_cast<Action>(dist(rng));
        joint.actions[1] = static_cast<Action>(dist(rng));
        env.step(joint);
        const KitchenState& after = env.state();

        const int new_census = onion_census(after);
        CHECK(new_census - census >= -3);  // only plating removes onions, 3 at a time
        census = new_census;
        for (size_t p = 0; p < after.pots.size(); ++p) {
            if (before.pots[p].cook_timer > 0 && after.pots[p].onion_count == 3)
                CHECK(after.pots[p].cook_timer == before.pots[p].cook_timer - 1);
        }
    }
}

TEST_CASE("observation is deterministic and distinguishes pot states") {
    const Layout layout = default_layout();
    const KitchenConfig config{};
    KitchenState state = initial_state(layout);
    CHECK(observe(state, layout, config, AgentId{0}) == observe(state, layout, config, AgentId{0}));
    CHECK(static_cast<int>(observe(state, layout, config, AgentId{0}).size()) ==
          observation_length(layout));

    // Enumerate pot states pairwise; featurizations must be distinct.
    std::vector<PotState> pot_states;
    for (int count = 0; count <= 2; ++count) pot_states.push_back({count, 0, false});
    for (int timer = 1; timer <= config.cook_time; ++timer) pot_states.push_back({3, timer, false});
    pot_states.push_back({3, 0, true});
    for (size_t a = 0; a < pot_states.size(); ++a) {
        for (size_t b = a + 1; b < pot_states.size(); ++b) {
            KitchenState sa = initial_state(layout);
            KitchenState sb = initial_state(layout);
            sa.pots[0] = pot_states[a];
            sb.pots[0] = pot_states[b];
            CHECK(observe(sa, layout, config, AgentId{0}) !=
                  observe(sb, layout, config, AgentId{0}));
        }
    }
}

TEST_CASE("initial observation encodes empty hands") {
    const Layout layout = default_layout();
    const KitchenConfig config{};
    const KitchenState state = initial_state(layout);
    const Observation obs = observe(state, layout, config, AgentId{0});
    const int floor = static_cast<int>(layout.floor_cells.size());
    // held one-hot block starts after position and orientation blocks
    for (int who = 0; who < 2; ++who) {
        const int base = who * (floor + 4 + 4) + floor + 4;
        CHECK(obs[static_cast<size_t>(base + 0)] == 1.0);  // "nothing"
        CHECK(obs[static_cast<size_t>(base + 1)] == 0.0);
        CHECK(obs[static_cast<size_t>(base + 2)] == 0.0);
        CHECK(obs[static_cast<size_t>(base + 3)] == 0.0);
    }
}

TEST_CASE("scripted policy rules: plating and delivering") {
    const Layout layout = default_layout();
    const KitchenConfig config{};

    KitchenState state = initial_state(layout);
    state.pots[0] = {3, 0, true};
    state.poses[1].position = {2, 1};  // adjacent to the pot
    state.poses[1].orientation = Direction::North;
    state.poses[1].held = Item::Dish;
    CHECK(scripted_delivery_policy(state, layout, config, AgentId{1}) == Action::Interact);

    state = initial_state(layout);
    state.poses[1].position = {2, 2};  // adjacent to delivery
    state.poses[1].orientation = Direction::South;
    state.poses[1].held = Item::Soup;
    CHECK(scripted_delivery_policy(state, layout, config, AgentId{1}) == Action::Interact);
}

TEST_CASE("two scripted agents deliver within the episode horizon") {
    const Layout layout = default_layout();
    const KitchenConfig config{};
    KitchenEnv env(layout, config);
    env.reset(0);
    double team = 0.0;
    while (!env.done()) {
        JointAction joint;
        joint.actions[0] = scripted_delivery_policy(env.state(), layout, config, AgentId{0});
        joint.actions[1] = scripted_delivery_policy(env.state(), layout, config, AgentId{1});
        team += env.step(joint).team_reward;
    }
    CHECK(team >= 20.0);
}

TEST_CASE("trajectories replay bit-for-bit from the same seed") {
    const Layout layout = default_layout();
    const KitchenConfig config{};
    std::vector<JointAction> actions;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dist(0, kNumActions - 1);
    for (int i = 0; i < 300; ++i) {
        JointAction joint;
        joint.actions[0] = static_cast<Action>(dist(rng));
        joint.actions[1] = static_cast<Action>(dist(rng));
        actions.push_back(joint);
    }

    const auto run = [&]() {
        KitchenEnv env(layout, config);
        env.reset(5);
        std::vector<Transition> transitions;
        for (const JointAction& joint : actions) transitions.push_back(env.step(joint));
        return transitions;
    };
    const auto a = run();
    const auto b = run();
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].state == b[i].state);
        CHECK(a[i].individual_rewards == b[i].individual_rewards);
        CHECK(a[i].team_reward == b[i].team_reward);
        CHECK(a[i].next_state == b[i].next_state);
        CHECK(a[i].done == b[i].done);
    }
}

#pragma once

#include "kitchenrl/kitchen.hpp"
#include "kitchenrl/types.hpp"

namespace kitchenrl {

// Hand-written finite-state controller that completes the soup pipeline.
// Used as an environment-correctness oracle independent of any learning:
// agent 0 ferries onions into the pot, agent 1 plates and delivers.
Action scripted_delivery_policy(const KitchenState& state, const Layout& layout,
                                const KitchenConfig& config, AgentId agent);

}  // namespace kitchenrl

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kitchenrl/net.hpp"
#include "kitchenrl/types.hpp"

namespace kitchenrl {

// One agent's view of a step; the unit stored in its replay buffer.
struct AgentTransition {
    Observation observation;
    int action = 0;
    double reward = 0.0;
    Observation next_observation;
    bool done = false;
};

// Fixed-capacity FIFO ring with uniform sampling.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(size_t capacity);

    void push(AgentTransition t);
    size_t size() const { return size_; }
    size_t capacity() const { return capacity_; }
    const AgentTransition& sample(std::mt19937_64& rng) const;
    // Oldest-first snapshot of the stored transitions.
    std::vector<AgentTransition> contents() const;

  private:
    size_t capacity_;
    size_t next_ = 0;
    size_t size_ = 0;
    std::vector<AgentTransition> ring_;
};

struct EpsilonSchedule {
    double eps_start = 0.9;
    double eps_end = 0.05;
    int horizon_episodes = 10000;  // K
    bool exponential = false;
};

// Linear interpolation from eps_start at episode 0 to eps_end at episode K-1,
// clamped thereafter (exponential decay available behind the flag).
double epsilon_at(const EpsilonSchedule& schedule, int episode);

int select_action(const QNetwork& net, const Observation& observation, double epsilon,
                  std::mt19937_64& rng);
int greedy_action(const QNetwork& net, const Observation& observation);

double td_target(const QNetwork& target_net, double reward, const Observation& next_observation,
                 bool done, double gamma);

struct LearnerConfig {
    double gamma = 0.99;
    int batch_size = 64;
    size_t replay_capacity = 50000;
    int target_sync_period = 1000;  // training steps between hard syncs
    double learning_rate = 1e-3;
    int train_every_steps = 1;      // environment steps between training steps
    double max_grad_norm = 0.0;     // clip batch gradient L2 norm; 0 disables
    std::vector<int> hidden_dims = {64, 64};
    OptimizerKind optimizer = OptimizerKind::Adam;
};

// One agent's Independent DQN: policy network, target network, replay buffer
// and optimizer. It never touches the other agent's state.
class DqnLearner {
  public:
    DqnLearner(int observation_dim, const LearnerConfig& config, uint64_t init_seed);

    int act(const Observation& observation, double epsilon, std::mt19937_64& rng) const;
    void record(AgentTransition t) { replay_.push(std::move(t)); }

    // One minibatch update against the target network. Returns the batch loss,
    // or nullopt while the buffer holds fewer than batch_size transitions.
    std::optional<double> train_step(std::mt19937_64& rng);
    void sync_target();

    const QNetwork& network() const { return net_; }
    const QNetwork& target_network() const { return target_; }
    const ReplayBuffer& replay() const { return replay_; }
    const LearnerConfig& config() const { return config_; }
    int64_t train_steps() const { return train_steps_; }

  private:
    LearnerConfig config_;
    QNetwork net_;
    QNetwork target_;
    OptimizerState optimizer_;
    ReplayBuffer replay_;
    int64_t train_steps_ = 0;
};

}  // namespace kitchenrl

#include "kitchenrl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kitchenrl {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
    ring_.resize(capacity);
}

void ReplayBuffer::push(AgentTransition t) {
    ring_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
}

const AgentTransition& ReplayBuffer::sample(std::mt19937_64& rng) const {
    if (size_ == 0) throw std::logic_error("sampling from empty replay buffer");
    std::uniform_int_distribution<size_t> dist(0, size_ - 1);
    return ring_[dist(rng)];
}

std::vector<AgentTransition> ReplayBuffer::contents() const {
    std::vector<AgentTransition> out;
    out.reserve(size_);
    const size_t start = size_ < capacity_ ? 0 : next_;
    for (size_t i = 0; i < size_; ++i) out.push_back(ring_[(start + i) % capacity_]);
    return out;
}

double epsilon_at(const EpsilonSchedule& schedule, int episode) {
    if (episode < 0) throw std::invalid_argument("episode must be non-negative");
    if (schedule.horizon_episodes <= 1) return schedule.eps_end;
    const double t = std::min(1.0, static_cast<double>(episode) /
                                       static_cast<double>(schedule.horizon_episodes - 1));
    double eps;
    if (schedule.exponential) {
        eps = schedule.eps_end + (schedule.eps_start - schedule.eps_end) * std::exp(-5.0 * t);
    } else {
        eps = (1.0 - t) * schedule.eps_start + t * schedule.eps_end;  // exact at both endpoints
    }
    return std::clamp(eps, schedule.eps_end, schedule.eps_start);
}

int greedy_action(const QNetwork& net, const Observation& observation) {
    const std::vector<double> q = forward(net, observation);
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a) {
        if (q[static_cast<size_t>(a)] > q[static_cast<size_t>(best)]) best = a;  // lowest index wins ties
    }
    return best;
}

int select_action(const QNetwork& net, const Observation& observation, double epsilon,
                  std::mt19937_64& rng) {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon outside [0,1]");
    if (epsilon > 0.0) {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(rng) < epsilon) {
            std::uniform_int_distribution<int> dist(0, net.output_dim() - 1);
            return dist(rng);
        }
    }
    return greedy_action(net, observation);
}

double td_target(const QNetwork& target_net, double reward, const Observation& next_observation,
                 bool done, double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma outside [0,1]");
    if (done) return reward;
    const std::vector<double> q = forward(target_net, next_observation);
    return reward + gamma * *std::max_element(q.begin(), q.end());
}

namespace {

std::vector<int> full_dims(int observation_dim, const LearnerConfig& config) {
    std::vector<int> dims;
    dims.push_back(observation_dim);
    dims.insert(dims.end(), config.hidden_dims.begin(), config.hidden_dims.end());
    dims.push_back(kNumActions);
    return dims;
}

}  // namespace

DqnLearner::DqnLearner(int observation_dim, const LearnerConfig& config, uint64_t init_seed)
    : config_(config), net_([&] {
          std::mt19937_64 init_rng(init_seed);
          return make_network(full_dims(observation_dim, config), init_rng);
      }()),
      target_(clone_parameters(net_)),
      optimizer_(make_optimizer(config.optimizer, config.learning_rate, net_)),
      replay_(config.replay_capacity) {}

int DqnLearner::act(const Observation& observation, double epsilon, std::mt19937_64& rng) const {
    return select_action(net_, observation, epsilon, rng);
}

std::optional<double> DqnLearner::train_step(std::mt19937_64& rng) {
    if (replay_.size() < static_cast<size_t>(config_.batch_size)) return std::nullopt;

    GradientSet batch_grads = zero_gradients(net_);
    double batch_loss = 0.0;
    const double weight = 1.0 / config_.batch_size;
    for (int i = 0; i < config_.batch_size; ++i) {
        const AgentTransition& t = replay_.sample(rng);
        const double y = td_target(target_, t.reward, t.next_observation, t.done, config_.gamma);
        const BackwardResult r = backward(net_, t.observation, t.action, y);
        batch_loss += weight * r.loss;
        accumulate_scaled(batch_grads, r.grads, weight);
    }
    if (!std::isfinite(batch_loss)) throw std::runtime_error("non-finite training loss");

    if (config_.max_grad_norm > 0.0) {
        double sq = 0.0;
        for (const auto& layer : batch_grads.weights)
            for (double g : layer) sq += g * g;
        for (const auto& layer : batch_grads.biases)
            for (double g : layer) sq += g * g;
        const double norm = std::sqrt(sq);
        if (norm > config_.max_grad_norm) {
            const double scale = config_.max_grad_norm / norm;
            for (auto& layer : batch_grads.weights)
                for (double& g : layer) g *= scale;
            for (auto& layer : batch_grads.biases)
                for (double& g : layer) g *= scale;
        }
    }

    apply_update(net_, optimizer_, batch_grads);
    ++train_steps_;
    if (config_.target_sync_period > 0 && train_steps_ % config_.target_sync_period == 0)
        sync_target();
    return batch_loss;
}

void DqnLearner::sync_target() { target_ = clone_parameters(net_); }

}  // namespace kitchenrl

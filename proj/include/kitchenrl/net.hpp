#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kitchenrl/types.hpp"

namespace kitchenrl {

// Fully connected Q-function approximator: rectifier hidden layers, identity
// output. Weights are row-major (out x in), 64-bit floats throughout.
struct QNetwork {
    std::vector<int> layer_dims;                // input, hidden..., output
    std::vector<std::vector<double>> weights;   // one matrix per layer
    std::vector<std::vector<double>> biases;    // one vector per layer

    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
    size_t num_layers() const { return weights.size(); }
};

struct GradientSet {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

QNetwork make_network(const std::vector<int>& layer_dims, std::mt19937_64& rng);
QNetwork zero_network(const std::vector<int>& layer_dims);

std::vector<double> forward(const QNetwork& net, const Observation& observation);

GradientSet zero_gradients(const QNetwork& net);
void accumulate_scaled(GradientSet& acc, const GradientSet& g, double scale);

struct BackwardResult {
    double loss = 0.0;
    GradientSet grads;
};

// Squared TD error for one sample; the gradient flows only through the chosen
// action's output.
BackwardResult backward(const QNetwork& net, const Observation& observation, int action,
                        double td_target);

enum class OptimizerKind { Sgd, Adam };

struct OptimizerState {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    int64_t step = 0;
    GradientSet first_moment;
    GradientSet second_moment;
};

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, const QNetwork& net);
// Throws std::runtime_error on non-finite gradient entries.
void apply_update(QNetwork& net, OptimizerState& opt, const GradientSet& grads);

QNetwork clone_parameters(const QNetwork& net);

// Snapshot format: u32 version, u32 layer count, u32 dims, then all
// parameters as little-endian 64-bit floats, weights before biases per layer.
std::vector<uint8_t> serialize_network(const QNetwork& net);
QNetwork deserialize_network(const std::vector<uint8_t>& bytes);
void save_network(const QNetwork& net, const std::string& path);
QNetwork load_network(const std::string& path);

}  // namespace kitchenrl

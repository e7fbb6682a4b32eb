#include "kitchenrl/net.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kitchenrl {

namespace {

constexpr uint32_t kFormatVersion = 1;

void check_dims(const std::vector<int>& dims) {
    if (dims.size() < 2) throw std::invalid_argument("network needs at least input and output dims");
    for (int d : dims)
        if (d <= 0) throw std::invalid_argument("layer dims must be positive");
}

// Hidden-layer activations for one input, kept for the backward pass.
struct ForwardTrace {
    std::vector<std::vector<double>> activations;  // activations[0] = input
};

std::vector<double> forward_traced(const QNetwork& net, const Observation& x, ForwardTrace* trace) {
    if (static_cast<int>(x.size()) != net.input_dim())
        throw std::invalid_argument("observation length does not match network input dim");
    std::vector<double> act = x;
    if (trace) trace->activations.push_back(act);
    for (size_t l = 0; l < net.num_layers(); ++l) {
        const int in = net.layer_dims[l];
        const int out = net.layer_dims[l + 1];
        const double* w = net.weights[l].data();
        std::vector<double> next(static_cast<size_t>(out));
        for (int o = 0; o < out; ++o) {
            double sum = net.biases[l][static_cast<size_t>(o)];
            const double* row = w + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) sum += row[i] * act[static_cast<size_t>(i)];
            next[static_cast<size_t>(o)] = sum;
        }
        const bool hidden = l + 1 < net.num_layers();
        if (hidden) {
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        }
        act = std::move(next);
        if (trace && hidden) trace->activations.push_back(act);
    }
    return act;
}

void write_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

void write_f64(std::vector<uint8_t>& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>((bits >> (8 * i)) & 0xff));
}

uint32_t read_u32(const std::vector<uint8_t>& in, size_t& pos) {
    if (pos + 4 > in.size()) throw std::runtime_error("truncated snapshot");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(in[pos++]) << (8 * i);
    return v;
}

double read_f64(const std::vector<uint8_t>& in, size_t& pos) {
    if (pos + 8 > in.size()) throw std::runtime_error("truncated snapshot");
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(in[pos++]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

QNetwork zero_network(const std::vector<int>& layer_dims) {
    check_dims(layer_dims);
    QNetwork net;
    net.layer_dims = layer_dims;
    for (size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        net.weights.emplace_back(static_cast<size_t>(layer_dims[l]) * layer_dims[l + 1], 0.0);
        net.biases.emplace_back(static_cast<size_t>(layer_dims[l + 1]), 0.0);
    }
    return net;
}

QNetwork make_network(const std::vector<int>& layer_dims, std::mt19937_64& rng) {
    QNetwork net = zero_network(layer_dims);
    for (size_t l = 0; l < net.num_layers(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.layer_dims[l]));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (double& w : net.weights[l]) w = dist(rng);
        for (double& b : net.biases[l]) b = dist(rng);
    }
    return net;
}

std::vector<double> forward(const QNetwork& net, const Observation& observation) {
    return forward_traced(net, observation, nullptr);
}

GradientSet zero_gradients(const QNetwork& net) {
    GradientSet g;
    for (size_t l = 0; l < net.num_layers(); ++l) {
        g.weights.emplace_back(net.weights[l].size(), 0.0);
        g.biases.emplace_back(net.biases[l].size(), 0.0);
    }
    return g;
}

void accumulate_scaled(GradientSet& acc, const GradientSet& g, double scale) {
    for (size_t l = 0; l < acc.weights.size(); ++l) {
        for (size_t i = 0; i < acc.weights[l].size(); ++i) acc.weights[l][i] += scale * g.weights[l][i];
        for (size_t i = 0; i < acc.biases[l].size(); ++i) acc.biases[l][i] += scale * g.biases[l][i];
    }
}

BackwardResult backward(const QNetwork& net, const Observation& observation, int action,
                        double td_target) {
    if (action < 0 || action >= net.output_dim())
        throw std::invalid_argument("action index out of range");

    ForwardTrace trace;
    const std::vector<double> q = forward_traced(net, observation, &trace);
    const double err = td_target - q[static_cast<size_t>(action)];

    BackwardResult result;
    result.loss = err * err;
    result.grads = zero_gradients(net);

    // Output delta: only the chosen action's head carries gradient.
    std::vector<double> delta(static_cast<size_t>(net.output_dim()), 0.0);
    delta[static_cast<size_t>(action)] = -2.0 * err;

    for (size_t l = net.num_layers(); l-- > 0;) {
        const int in = net.layer_dims[l];
        const int out = net.layer_dims[l + 1];
        const std::vector<double>& act = trace.activations[l];
        for (int o = 0; o < out; ++o) {
            const double d = delta[static_cast<size_t>(o)];
            if (d == 0.0) continue;
            double* wrow = result.grads.weights[l].data() + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) wrow[i] = d * act[static_cast<size_t>(i)];
            result.grads.biases[l][static_cast<size_t>(o)] = d;
        }
        if (l == 0) break;
        std::vector<double> prev(static_cast<size_t>(in), 0.0);
        const double* w = net.weights[l].data();
        for (int o = 0; o < out; ++o) {
            const double d = delta[static_cast<size_t>(o)];
            if (d == 0.0) continue;
            const double* row = w + static_cast<size_t>(o) * in;
            for (int i = 0; i < in; ++i) prev[static_cast<size_t>(i)] += d * row[i];
        }
        // Rectifier derivative: activations are post-rectifier, so > 0 marks
        // the pass-through region.
        for (int i = 0; i < in; ++i)
            if (act[static_cast<size_t>(i)] <= 0.0) prev[static_cast<size_t>(i)] = 0.0;
        delta = std::move(prev);
    }
    return result;
}

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, const QNetwork& net) {
    OptimizerState opt;
    opt.kind = kind;
    opt.learning_rate = learning_rate;
    if (kind == OptimizerKind::Adam) {
        opt.first_moment = zero_gradients(net);
        opt.second_moment = zero_gradients(net);
    }
    return opt;
}

void apply_update(QNetwork& net, OptimizerState& opt, const GradientSet& grads) {
    for (size_t l = 0; l < net.num_layers(); ++l) {
        for (double g : grads.weights[l])
            if (!std::isfinite(g)) throw std::runtime_error("non-finite weight gradient");
        for (double g : grads.biases[l])
            if (!std::isfinite(g)) throw std::runtime_error("non-finite bias gradient");
    }

    if (opt.kind == OptimizerKind::Sgd) {
        for (size_t l = 0; l < net.num_layers(); ++l) {
            for (size_t i = 0; i < net.weights[l].size(); ++i)
                net.weights[l][i] -= opt.learning_rate * grads.weights[l][i];
            for (size_t i = 0; i < net.biases[l].size(); ++i)
                net.biases[l][i] -= opt.learning_rate * grads.biases[l][i];
        }
        ++opt.step;
        return;
    }

    ++opt.step;
    const double bc1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
    const double bc2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
    const auto adam = [&](std::vector<double>& param, std::vector<double>& m, std::vector<double>& v,
                          const std::vector<double>& g) {
        for (size_t i = 0; i < param.size(); ++i) {
            m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g[i];
            v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            param[i] -= opt.learning_rate * mhat / (std::sqrt(vhat) + opt.epsilon);
        }
    };
    for (size_t l = 0; l < net.num_layers(); ++l) {
        adam(net.weights[l], opt.first_moment.weights[l], opt.second_moment.weights[l],
             grads.weights[l]);
        adam(net.biases[l], opt.first_moment.biases[l], opt.second_moment.biases[l],
             grads.biases[l]);
    }
}

QNetwork clone_parameters(const QNetwork& net) { return net; }

std::vector<uint8_t> serialize_network(const QNetwork& net) {
    std::vector<uint8_t> out;
    write_u32(out, kFormatVersion);
    write_u32(out, static_cast<uint32_t>(net.layer_dims.size()));
    for (int d : net.layer_dims) write_u32(out, static_cast<uint32_t>(d));
    for (size_t l = 0; l < net.num_layers(); ++l) {
        for (double w : net.weights[l]) write_f64(out, w);
        for (double b : net.biases[l]) write_f64(out, b);
    }
    return out;
}

QNetwork deserialize_network(const std::vector<uint8_t>& bytes) {
    size_t pos = 0;
    const uint32_t version = read_u32(bytes, pos);
    if (version != kFormatVersion)
        throw std::runtime_error("unsupported snapshot format version " + std::to_string(version));
    const uint32_t ndims = read_u32(bytes, pos);
    if (ndims < 2 || ndims > 64) throw std::runtime_error("corrupt snapshot: bad layer count");
    std::vector<int> dims(ndims);
    for (uint32_t i = 0; i < ndims; ++i) dims[i] = static_cast<int>(read_u32(bytes, pos));
    QNetwork net = zero_network(dims);
    for (size_t l = 0; l < net.num_layers(); ++l) {
        for (double& w : net.weights[l]) w = read_f64(bytes, pos);
        for (double& b : net.biases[l]) b = read_f64(bytes, pos);
    }
    if (pos != bytes.size()) throw std::runtime_error("corrupt snapshot: trailing bytes");
    return net;
}

void save_network(const QNetwork& net, const std::string& path) {
    const std::vector<uint8_t> bytes = serialize_network(net);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

QNetwork load_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_network(bytes);
}

}  // namespace kitchenrl

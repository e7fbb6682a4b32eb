#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "kitchenrl/learner.hpp"

using namespace kitchenrl;

TEST_CASE("epsilon schedule hits its endpoints exactly and decays linearly") {
    EpsilonSchedule schedule{0.9, 0.05, 10001, false};
    CHECK(epsilon_at(schedule, 0) == 0.9);
    CHECK(epsilon_at(schedule, 10000) == 0.05);
    CHECK(epsilon_at(schedule, 20000) == 0.05);  // clamped past K
    CHECK(epsilon_at(schedule, 5000) == doctest::Approx(0.475).epsilon(1e-12));  // midpoint, K odd

    double prev = 1.0;
    for (int e = 0; e < 12000; e += 37) {
        const double eps = epsilon_at(schedule, e);
        CHECK(eps <= prev);
        CHECK(eps >= 0.05);
        CHECK(eps <= 0.9);
        prev = eps;
    }
}

TEST_CASE("greedy selection breaks ties toward the lowest action index") {
    QNetwork net = zero_network({2, 6});
    // Q = [1, 5, 5, 0, 0, 0] for input (1, 0)
    const double q[6] = {1, 5, 5, 0, 0, 0};
    for (int o = 0; o < 6; ++o) net.weights[0][static_cast<size_t>(o * 2)] = q[o];
    std::mt19937_64 rng(0);
    CHECK(select_action(net, {1.0, 0.0}, 0.0, rng) == 1);

    const QNetwork zeros = zero_network({2, 6});
    CHECK(select_action(zeros, {1.0, 0.0}, 0.0, rng) == 0);  // all-tie
}

TEST_CASE("epsilon = 1 draws actions uniformly (chi-square)") {
    const QNetwork net = zero_network({2, 6});
    std::mt19937_64 rng(123);
    std::array<int, 6> counts{};
    const int draws = 60000;
    for (int i = 0; i < draws; ++i)
        ++counts[static_cast<size_t>(select_action(net, {0.5, 0.5}, 1.0, rng))];
    const double expected = draws / 6.0;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // 5 dof; 3-sigma-ish bound
    CHECK(chi2 < 20.5);
}

TEST_CASE("td target covers terminal, gamma-zero, and bootstrap cases") {
    QNetwork target = zero_network({2, 6});
    CHECK(td_target(target, 20.0, {0.0, 0.0}, true, 0.99) == 20.0);
    CHECK(td_target(target, 20.0, {0.0, 0.0}, false, 0.0) == 20.0);

    // Q(s', .) = [1, 3, 2, 0, 0, 0]
    const double q[6] = {1, 3, 2, 0, 0, 0};
    for (int o = 0; o < 6; ++o) target.biases[0][static_cast<size_t>(o)] = q[o];
    CHECK(td_target(target, 0.0, {0.0, 0.0}, false, 0.99) == doctest::Approx(2.97).epsilon(1e-12));
}

TEST_CASE("replay buffer evicts strictly FIFO") {
    ReplayBuffer buffer(5);
    for (int i = 0; i < 8; ++i) {
        AgentTransition t;
        t.reward = i;
        buffer.push(t);
    }
    CHECK(buffer.size() == 5);
    const auto contents = buffer.contents();
    for (int i = 0; i < 5; ++i) CHECK(contents[static_cast<size_t>(i)].reward == 3 + i);
}

TEST_CASE("train_step is skipped while the buffer is under batch size") {
    LearnerConfig config;
    config.batch_size = 4;
    config.hidden_dims = {8};
    DqnLearner learner(3, config, 1);
    std::mt19937_64 rng(2);
    const auto before = serialize_network(learner.network());
    for (int i = 0; i < 3; ++i) {
        learner.record({{0.0, 0.0, 0.0}, 0, 0.0, {0.0, 0.0, 0.0}, true});
        CHECK_FALSE(learner.train_step(rng).has_value());
    }
    CHECK(serialize_network(learner.network()) == before);
}

TEST_CASE("zero TD error leaves parameters unchanged under plain SGD") {
    LearnerConfig config;
    config.batch_size = 2;
    config.hidden_dims = {};
    config.optimizer = OptimizerKind::Sgd;
    DqnLearner learner(2, config, 7);
    // Terminal transitions whose reward equals the network's current output.
    const Observation obs = {0.3, -0.2};
    const double q0 = forward(learner.network(), obs)[1];
    for (int i = 0; i < 2; ++i) learner.record({obs, 1, q0, obs, true});
    std::mt19937_64 rng(3);
    const auto before = serialize_network(learner.network());
    const auto loss = learner.train_step(rng);
    REQUIRE(loss.has_value());
    CHECK(*loss == 0.0);
    CHECK(serialize_network(learner.network()) == before);
}

TEST_CASE("degenerate one-state bandit converges to the fixed point") {
    // Single terminal transition with reward 1; Q(s, a) must approach 1.
    for (uint64_t seed = 0; seed < 5; ++seed) {
        LearnerConfig config;
        config.batch_size = 8;
        config.hidden_dims = {16};
        config.learning_rate = 1e-2;
        config.target_sync_period = 50;
        DqnLearner learner(2, config, seed);
        const Observation obs = {1.0, 0.0};
        for (int i = 0; i < 8; ++i) learner.record({obs, 3, 1.0, obs, true});
        std::mt19937_64 rng(seed + 100);
        for (int step = 0; step < 500; ++step) REQUIRE(learner.train_step(rng).has_value());
        const double q = forward(learner.network(), obs)[3];
        CHECK(std::abs(q - 1.0) < 0.05);
    }
}

TEST_CASE("sync_target copies and then stays fixed") {
    LearnerConfig config;
    config.batch_size = 2;
    config.hidden_dims = {8};
    config.target_sync_period = 1000;
    DqnLearner learner(2, config, 5);
    learner.sync_target();
    CHECK(serialize_network(learner.target_network()) == serialize_network(learner.network()));

    const auto target_before = serialize_network(learner.target_network());
    std::mt19937_64 rng(8);
    for (int i = 0; i < 2; ++i) learner.record({{1.0, 0.0}, 0, 5.0, {1.0, 0.0}, true});
    REQUIRE(learner.train_step(rng).has_value());
    CHECK(serialize_network(learner.target_network()) == target_before);
    CHECK(serialize_network(learner.network()) != target_before);
}

TEST_CASE("two learners share no parameters") {
    LearnerConfig config;
    config.hidden_dims = {8};
    DqnLearner a(2, config, 1);
    DqnLearner b(2, config, 2);
    CHECK(serialize_network(a.network()) != serialize_network(b.network()));
    CHECK(&a.network() != &b.network());
}

TEST_CASE("training is deterministic under fixed seeds") {
    const auto run = [] {
        LearnerConfig config;
        config.batch_size = 4;
        config.hidden_dims = {8};
        DqnLearner learner(2, config, 77);
        std::mt19937_64 rng(78);
        std::mt19937_64 data_rng(79);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> losses;
        for (int i = 0; i < 50; ++i) {
            const Observation o = {dist(data_rng), dist(data_rng)};
            learner.record({o, static_cast<int>(data_rng() % 6), dist(data_rng), o, false});
            if (const auto loss = learner.train_step(rng)) losses.push_back(*loss);
        }
        return losses;
    };
    CHECK(run() == run());
}

TEST_CASE("gradient clipping bounds the SGD update norm and is inert when loose") {
    LearnerConfig base;
    base.batch_size = 4;
    base.hidden_dims = {8};
    base.optimizer = OptimizerKind::Sgd;
    base.learning_rate = 0.1;

    const auto param_delta_norm = [&](double max_norm) {
        LearnerConfig cfg = base;
        cfg.max_grad_norm = max_norm;
        DqnLearner learner(3, cfg, 99);
        const QNetwork before = clone_parameters(learner.network());
        std::mt19937_64 rng(7);
        for (int i = 0; i < 4; ++i)
            learner.record({{1.0, -0.5, 2.0}, i, 50.0, {0.0, 0.0, 0.0}, true});
        REQUIRE(learner.train_step(rng).has_value());
        double sq = 0.0;
        const QNetwork& after = learner.network();
        for (size_t l = 0; l < after.num_layers(); ++l) {
            for (size_t i = 0; i < after.weights[l].size(); ++i) {
                const double d = after.weights[l][i] - before.weights[l][i];
                sq += d * d;
            }
            for (size_t i = 0; i < after.biases[l].size(); ++i) {
                const double d = after.biases[l][i] - before.biases[l][i];
                sq += d * d;
            }
        }
        return std::sqrt(sq);
    };

    const double unclipped = param_delta_norm(0.0);
    // A loose ceiling leaves the update untouched; a tight one scales it to
    // exactly lr * max_norm.
    CHECK(param_delta_norm(1e9) == doctest::Approx(unclipped));
    CHECK(param_delta_norm(0.01) == doctest::Approx(0.1 * 0.01));
    CHECK(param_delta_norm(0.01) < unclipped);
}

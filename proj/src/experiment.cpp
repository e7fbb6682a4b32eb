#include "kitchenrl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace kitchenrl {

namespace fs = std::filesystem;

Layout RunConfig::resolve_layout() const {
    if (layout_path.empty()) return parse_layout(default_layout_text());
    return load_layout_file(layout_path);
}

KitchenConfig RunConfig::kitchen_config() const {
    KitchenConfig kc;
    kc.horizon = horizon;
    kc.cook_time = cook_time;
    kc.delivery_reward = delivery_reward;
    kc.shaping_onion_in_pot = shaping_onion_in_pot;
    kc.shaping_soup_plated = shaping_soup_plated;
    return kc;
}

void RunConfig::validate() const {
    if (episodes < 1) throw std::invalid_argument("episodes must be positive");
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
    if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("gamma outside [0,1]");
    if (eps_start < eps_end) throw std::invalid_argument("eps_start must be >= eps_end");
    if (eps_horizon < 0) throw std::invalid_argument("eps_horizon must be non-negative");
    if (seeds.empty()) throw std::invalid_argument("seeds list is empty");
    std::vector<uint64_t> sorted = seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("seeds must be distinct");
    for (int m : milestones)
        if (m < 1 || m > episodes)
            throw std::invalid_argument("milestones must lie in [1, episodes]");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) parts.push_back(part);
    return parts;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

template <typename T>
std::vector<T> parse_int_list(const std::string& value) {
    std::vector<T> out;
    for (const std::string& part : split(value, ',')) {
        const std::string t = trim(part);
        if (!t.empty()) out.push_back(static_cast<T>(std::stoll(t)));
    }
    return out;
}

// Mixes a run seed with a named stream so every RNG consumer gets an
// independent, reproducible stream (splitmix64 finalizer).
uint64_t stream_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed * 0x9e3779b97f4a7c15ULL + stream + 1;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum Stream : uint64_t {
    kStudentInit = 1,
    kStudentAction = 2,
    kStudentSample = 3,
    kTeammateInit = 4,
    kTeammateAction = 5,
    kTeammateSample = 6,
};

}  // namespace

void apply_config_line(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "layout") config.layout_path = value;
    else if (key == "episodes") config.episodes = std::stoi(value);
    else if (key == "horizon") config.horizon = std::stoi(value);
    else if (key == "delivery_reward") config.delivery_reward = std::stod(value);
    else if (key == "gamma") config.gamma = std::stod(value);
    else if (key == "eps_start") config.eps_start = std::stod(value);
    else if (key == "eps_end") config.eps_end = std::stod(value);
    else if (key == "eps_horizon") config.eps_horizon = std::stoi(value);
    else if (key == "milestones") config.milestones = parse_int_list<int>(value);
    else if (key == "schedule") config.schedule = schedule_kind_from_string(value);
    else if (key == "seeds") config.seeds = parse_int_list<uint64_t>(value);
    else if (key == "source_seed") config.source_seed = std::stoull(value);
    else if (key == "cook_time") config.cook_time = std::stoi(value);
    else if (key == "shaping_onion_in_pot") config.shaping_onion_in_pot = std::stod(value);
    else if (key == "shaping_soup_plated") config.shaping_soup_plated = std::stod(value);
    else if (key == "rolling_window") config.rolling_window = std::stoi(value);
    else if (key == "output_dir") config.output_dir = value;
    else if (key == "snapshot_dir") config.snapshot_dir = value;
    else if (key == "batch_size") config.learner.batch_size = std::stoi(value);
    else if (key == "replay_capacity") config.learner.replay_capacity = std::stoul(value);
    else if (key == "target_sync_period") config.learner.target_sync_period = std::stoi(value);
    else if (key == "learning_rate") config.learner.learning_rate = std::stod(value);
    else if (key == "train_every_steps") config.learner.train_every_steps = std::stoi(value);
    else if (key == "max_grad_norm") config.learner.max_grad_norm = std::stod(value);
    else if (key == "hidden_dims") config.learner.hidden_dims = parse_int_list<int>(value);
    else if (key == "optimizer") {
        if (value == "adam") config.learner.optimizer = OptimizerKind::Adam;
        else if (value == "sgd") config.learner.optimizer = OptimizerKind::Sgd;
        else throw std::invalid_argument("unknown optimizer: " + value);
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    RunConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    config.learner.gamma = config.gamma;
    return config;
}

std::string to_jsonl(const EpisodeRecord& record) {
    nlohmann::ordered_json j;
    j["seed"] = record.seed;
    j["episode"] = record.episode;
    j["teammate"] = record.teammate;
    j["student_reward"] = record.student_reward;
    j["teammate_reward"] = record.teammate_reward;
    j["team_reward"] = record.team_reward;
    j["epsilon"] = record.epsilon;
    return j.dump();
}

EpisodeRecord episode_record_from_json(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    EpisodeRecord r;
    r.seed = j.at("seed").get<uint64_t>();
    r.episode = j.at("episode").get<int>();
    r.teammate = j.at("teammate").get<std::string>();
    r.student_reward = j.at("student_reward").get<double>();
    r.teammate_reward = j.at("teammate_reward").get<double>();
    r.team_reward = j.at("team_reward").get<double>();
    r.epsilon = j.at("epsilon").get<double>();
    return r;
}

std::vector<EpisodeRecord> read_jsonl_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open log: " + path);
    std::vector<EpisodeRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) records.push_back(episode_record_from_json(line));
    }
    return records;
}

std::string log_path(const RunConfig& config, ScheduleKind kind, uint64_t seed) {
    return (fs::path(config.output_dir) /
            (to_string(kind) + "_seed" + std::to_string(seed) + ".jsonl"))
        .string();
}

std::string source_log_path(const RunConfig& config) {
    return (fs::path(config.output_dir) /
            ("source_seed" + std::to_string(config.source_seed) + ".jsonl"))
        .string();
}

namespace {

struct EpisodeTotals {
    std::array<double, kNumAgents> individual{0.0, 0.0};
    double team = 0.0;
};

// Plays one episode: the student always learns, the teammate is either a
// frozen greedy policy or a second learner. Both learners train on the
// combined team reward (sparse delivery plus any configured shaping). The
// student occupies grid slot `student_slot`; a frozen teammate keeps the slot
// it was trained in.
EpisodeTotals play_episode(KitchenEnv& env, uint64_t episode_seed, double epsilon,
                           DqnLearner& student, std::mt19937_64& student_action_rng,
                           std::mt19937_64& student_sample_rng, DqnLearner* co_teammate,
                           std::mt19937_64* teammate_action_rng,
                           std::mt19937_64* teammate_sample_rng, const FrozenPolicy* frozen,
                           int student_slot = 0) {
    auto observations = env.reset(episode_seed);
    EpisodeTotals totals;
    int env_steps = 0;
    const int train_every = std::max(1, student.config().train_every_steps);
    const size_t s = static_cast<size_t>(student_slot);
    const size_t m = 1 - s;

    while (!env.done()) {
        JointAction joint;
        joint.actions[s] = static_cast<Action>(student.act(observations[s], epsilon,
                                                           student_action_rng));
        joint.actions[m] = frozen
                               ? static_cast<Action>(frozen->act(observations[m]))
                               : static_cast<Action>(co_teammate->act(observations[m], epsilon,
                                                                      *teammate_action_rng));
        const Transition t = env.step(joint);
        const double train_reward = t.team_reward + env.last_step_shaping();

        student.record({t.state[s], static_cast<int>(joint.actions[s]), train_reward,
                        t.next_state[s], t.done});
        if (co_teammate)
            co_teammate->record({t.state[m], static_cast<int>(joint.actions[m]), train_reward,
                                 t.next_state[m], t.done});

        ++env_steps;
        if (env_steps % train_every == 0) {
            student.train_step(student_sample_rng);
            if (co_teammate) co_teammate->train_step(*teammate_sample_rng);
        }

        totals.individual[0] += t.individual_rewards[0];
        totals.individual[1] += t.individual_rewards[1];
        totals.team += t.team_reward;
        observations = t.next_state;
    }
    return totals;
}

}  // namespace

std::vector<EpisodeRecord> train_source_population(const RunConfig& config, SnapshotStore& store) {
    config.validate();
    const Layout layout = config.resolve_layout();
    KitchenEnv env(layout, config.kitchen_config());
    const int obs_dim = observation_length(layout);

    LearnerConfig lcfg = config.learner;
    lcfg.gamma = config.gamma;
    lcfg.learning_rate = config.learner.learning_rate;

    const uint64_t seed = config.source_seed;
    DqnLearner student(obs_dim, lcfg, stream_seed(seed, kStudentInit));
    DqnLearner teammate(obs_dim, lcfg, stream_seed(seed, kTeammateInit));
    std::mt19937_64 s_act(stream_seed(seed, kStudentAction));
    std::mt19937_64 s_sample(stream_seed(seed, kStudentSample));
    std::mt19937_64 t_act(stream_seed(seed, kTeammateAction));
    std::mt19937_64 t_sample(stream_seed(seed, kTeammateSample));

    EpsilonSchedule eps_schedule{config.eps_start, config.eps_end,
                                config.eps_horizon > 0 ? config.eps_horizon : config.episodes,
                                false};

    std::vector<EpisodeRecord> records;
    records.reserve(static_cast<size_t>(config.episodes));
    // Candidate parameter copies per milestone for both agents; the population
    // keeps whichever agent earned more individual reward over the whole run
    // (co-training tends to collapse deliveries onto one agent, and a useful
    // teammate policy must come from the agent that actually learned them).
    std::map<int, std::array<QNetwork, kNumAgents>> candidates;
    std::array<double, kNumAgents> cumulative{0.0, 0.0};

    for (int episode = 0; episode < config.episodes; ++episode) {
        const double eps = epsilon_at(eps_schedule, episode);
        const EpisodeTotals totals = play_episode(env, seed, eps, student, s_act, s_sample,
                                                  &teammate, &t_act, &t_sample, nullptr);
        EpisodeRecord r;
        r.seed = seed;
        r.episode = episode;
        r.teammate = "co_learning";
        r.student_reward = totals.individual[0];
        r.teammate_reward = totals.individual[1];
        r.team_reward = totals.team;
        r.epsilon = eps;
        records.push_back(r);
        cumulative[0] += totals.individual[0];
        cumulative[1] += totals.individual[1];

        // Milestone t means "after t episodes of training".
        for (int milestone : config.milestones) {
            if (episode + 1 == milestone)
                candidates[milestone] = {student.network(), teammate.network()};
        }
    }

    const int winner = cumulative[1] >= cumulative[0] ? 1 : 0;
    for (const auto& [milestone, nets] : candidates)
        store.capture_snapshot(nets[static_cast<size_t>(winner)], milestone, seed,
                               config.milestones, winner);
    return records;
}

std::vector<EpisodeRecord> run_single_seed(const RunConfig& config,
                                           const CurriculumSchedule& schedule, uint64_t seed,
                                           const SnapshotStore* store) {
    const Layout layout = config.resolve_layout();
    KitchenEnv env(layout, config.kitchen_config());
    const int obs_dim = observation_length(layout);

    LearnerConfig lcfg = config.learner;
    lcfg.gamma = config.gamma;

    DqnLearner student(obs_dim, lcfg, stream_seed(seed, kStudentInit));
    std::mt19937_64 s_act(stream_seed(seed, kStudentAction));
    std::mt19937_64 s_sample(stream_seed(seed, kStudentSample));

    // A co-learning teammate persists across the run; frozen teammates are
    // loaded when a phase switches. The student persists either way.
    std::optional<DqnLearner> co_teammate;
    std::mt19937_64 t_act(stream_seed(seed, kTeammateAction));
    std::mt19937_64 t_sample(stream_seed(seed, kTeammateSample));
    std::optional<FrozenPolicy> frozen;

    EpsilonSchedule eps_schedule{config.eps_start, config.eps_end,
                                config.eps_horizon > 0 ? config.eps_horizon : config.episodes,
                                false};

    // Frozen policies keep the grid slot they were trained in; the student
    // takes the opposite slot. All phases of one schedule must agree so the
    // student's own observations stay consistent across the run.
    int student_slot = 0;
    bool slot_fixed = false;
    for (const CurriculumPhase& phase : schedule.phases) {
        if (phase.teammate.co_learning) continue;
        const int slot = 1 - phase.teammate.frozen_tag->agent_slot;
        if (slot_fixed && slot != student_slot)
            throw std::runtime_error("schedule mixes snapshots from both agent slots");
        student_slot = slot;
        slot_fixed = true;
    }

    std::vector<EpisodeRecord> records;
    records.reserve(static_cast<size_t>(config.episodes));
    for (int episode = 0; episode < config.episodes; ++episode) {
        const TeammateSpec& spec = teammate_for_episode(schedule, episode);
        if (spec.co_learning) {
            if (!co_teammate)
                co_teammate.emplace(obs_dim, lcfg, stream_seed(seed, kTeammateInit));
            frozen.reset();
        } else {
            if (!store) throw std::runtime_error("schedule references snapshots but no store given");
            if (!frozen || !(frozen->tag() == *spec.frozen_tag)) frozen = store->load(*spec.frozen_tag);
        }

        const double eps = epsilon_at(eps_schedule, episode);
        const EpisodeTotals totals =
            play_episode(env, seed, eps, student, s_act, s_sample,
                         spec.co_learning ? &*co_teammate : nullptr, &t_act, &t_sample,
                         spec.co_learning ? nullptr : &*frozen, student_slot);

        EpisodeRecord r;
        r.seed = seed;
        r.episode = episode;
        r.teammate = to_string(spec);
        r.student_reward = totals.individual[static_cast<size_t>(student_slot)];
        r.teammate_reward = totals.individual[static_cast<size_t>(1 - student_slot)];
        r.team_reward = totals.team;
        r.epsilon = eps;
        records.push_back(r);
    }
    return records;
}

namespace {

std::optional<PopulationTags> population_tags(const SnapshotStore* store) {
    if (!store || !store->has_label(SkillLabel::Low) || !store->has_label(SkillLabel::Medium) ||
        !store->has_label(SkillLabel::High))
        return std::nullopt;
    return PopulationTags{store->load_by_label(SkillLabel::Low).tag(),
                          store->load_by_label(SkillLabel::Medium).tag(),
                          store->load_by_label(SkillLabel::High).tag()};
}

void write_log(const std::string& path, const std::vector<EpisodeRecord>& records) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write log: " + path);
    int since_flush = 0;
    for (const EpisodeRecord& r : records) {
        out << to_jsonl(r) << '\n';
        if (++since_flush == 100) {
            out.flush();
            since_flush = 0;
        }
    }
    if (!out) throw std::runtime_error("log write failed: " + path);
}

}  // namespace

std::vector<std::string> run_training(const RunConfig& config) {
    config.validate();

    std::optional<SnapshotStore> store;
    const SnapshotStore* store_ptr = nullptr;
    if (config.schedule != ScheduleKind::IdqnScratch) {
        store.emplace(config.snapshot_dir);
        store_ptr = &*store;
    }
    const CurriculumSchedule schedule =
        build_schedule(config.schedule, config.episodes, population_tags(store_ptr));

    std::vector<std::string> paths;
    for (uint64_t seed : config.seeds) {
        const std::vector<EpisodeRecord> records =
            run_single_seed(config, schedule, seed, store_ptr);
        const std::string path = log_path(config, config.schedule, seed);
        write_log(path, records);
        paths.push_back(path);
    }
    return paths;
}

std::vector<double> rolling_average(const std::vector<double>& series, int window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (series.empty()) throw std::invalid_argument("empty series");
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= static_cast<size_t>(window)) sum -= series[i - static_cast<size_t>(window)];
        const size_t n = std::min(i + 1, static_cast<size_t>(window));
        out[i] = sum / static_cast<double>(n);
    }
    return out;
}

AggregateSeries aggregate_seeds(const std::vector<std::vector<EpisodeRecord>>& logs) {
    if (logs.empty()) throw std::invalid_argument("no logs to aggregate");
    const size_t episodes = logs[0].size();
    for (const auto& log : logs)
        if (log.size() != episodes) throw std::invalid_argument("ragged logs");

    AggregateSeries agg;
    const auto stats = [&](auto field, std::vector<double>& mean_out, std::vector<double>& std_out) {
        mean_out.resize(episodes);
        std_out.resize(episodes);
        for (size_t e = 0; e < episodes; ++e) {
            double mean = 0.0;
            for (const auto& log : logs) mean += field(log[e]);
            mean /= static_cast<double>(logs.size());
            double var = 0.0;
            for (const auto& log : logs) {
                const double d = field(log[e]) - mean;
                var += d * d;
            }
            var /= static_cast<double>(logs.size());  // population std
            mean_out[e] = mean;
            std_out[e] = std::sqrt(var);
        }
    };
    stats([](const EpisodeRecord& r) { return r.student_reward; }, agg.student_mean,
          agg.student_std);
    stats([](const EpisodeRecord& r) { return r.teammate_reward; }, agg.teammate_mean,
          agg.teammate_std);
    stats([](const EpisodeRecord& r) { return r.team_reward; }, agg.team_mean, agg.team_std);
    return agg;
}

void emit_report(const std::map<ScheduleKind, AggregateSeries>& aggregates,
                 const std::string& out_dir, int episodes) {
    if (aggregates.empty()) throw std::invalid_argument("no aggregates to report");
    fs::create_directories(out_dir);

    struct Panel {
        const char* file;
        const std::vector<double> AggregateSeries::* mean;
        const std::vector<double> AggregateSeries::* std;
    };
    const Panel panels[] = {
        {"student_reward.csv", &AggregateSeries::student_mean, &AggregateSeries::student_std},
        {"teammate_reward.csv", &AggregateSeries::teammate_mean, &AggregateSeries::teammate_std},
        {"team_reward.csv", &AggregateSeries::team_mean, &AggregateSeries::team_std},
    };

    for (const Panel& panel : panels) {
        std::ofstream out(fs::path(out_dir) / panel.file, std::ios::trunc);
        if (!out) throw std::runtime_error(std::string("cannot write ") + panel.file);
        out << "episode";
        for (const auto& [kind, agg] : aggregates)
            out << ",mean_" << to_string(kind) << ",std_" << to_string(kind);
        out << '\n';
        for (int e = 0; e < episodes; ++e) {
            out << e;
            for (const auto& [kind, agg] : aggregates) {
                out << ',' << (agg.*(panel.mean))[static_cast<size_t>(e)] << ','
                    << (agg.*(panel.std))[static_cast<size_t>(e)];
            }
            out << '\n';
        }
    }

    // Summary: mean over the final 1000 episodes (or all of them when K < 1000).
    const int window = std::min(episodes, 1000);
    std::ofstream summary(fs::path(out_dir) / "summary.txt", std::ios::trunc);
    summary << "final-" << window << "-episode means\n";
    summary << "schedule,student_reward,teammate_reward,team_reward\n";
    const auto tail_mean = [&](const std::vector<double>& v) {
        double sum = 0.0;
        for (int e = episodes - window; e < episodes; ++e) sum += v[static_cast<size_t>(e)];
        return sum / window;
    };
    for (const auto& [kind, agg] : aggregates) {
        summary << to_string(kind) << ',' << tail_mean(agg.student_mean) << ','
                << tail_mean(agg.teammate_mean) << ',' << tail_mean(agg.team_mean) << '\n';
    }
}

}  // namespace kitchenrl

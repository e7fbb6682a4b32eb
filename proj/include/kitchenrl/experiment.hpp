#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kitchenrl/curriculum.hpp"
#include "kitchenrl/kitchen.hpp"
#include "kitchenrl/learner.hpp"
#include "kitchenrl/population.hpp"

namespace kitchenrl {

struct RunConfig {
    std::string layout_path;                 // empty = built-in default layout
    int episodes = 10000;                    // K
    int horizon = 500;                       // max steps per episode
    double delivery_reward = 20.0;
    double gamma = 0.99;
    double eps_start = 0.9;
    double eps_end = 0.05;
    int eps_horizon = 0;                     // ε-decay horizon in episodes; 0 = episodes
    std::vector<int> milestones = {2000, 5000, 10000};
    ScheduleKind schedule = ScheduleKind::IdqnScratch;
    std::vector<uint64_t> seeds = {0, 1, 2, 3, 4};
    uint64_t source_seed = 100;              // disjoint from evaluation seeds
    int cook_time = 20;
    double shaping_onion_in_pot = 0.0;
    double shaping_soup_plated = 0.0;
    int rolling_window = 100;
    std::string output_dir = "out";
    std::string snapshot_dir = "out/snapshots";
    LearnerConfig learner;

    Layout resolve_layout() const;
    KitchenConfig kitchen_config() const;
    void validate() const;
};

// Flat key=value config file; '#' starts a comment. Unknown keys are errors.
RunConfig load_run_config(const std::string& path);
void apply_config_line(RunConfig& config, const std::string& key, const std::string& value);

struct EpisodeRecord {
    uint64_t seed = 0;
    int episode = 0;
    std::string teammate;  // snapshot tag string or "co_learning"
    double student_reward = 0.0;
    double teammate_reward = 0.0;
    double team_reward = 0.0;
    double epsilon = 0.0;
};

std::string to_jsonl(const EpisodeRecord& record);
EpisodeRecord episode_record_from_json(const std::string& line);
std::vector<EpisodeRecord> read_jsonl_log(const std::string& path);

// Trains two agents from scratch on the source seed and captures teammate
// snapshots at every milestone. Returns the per-episode log.
std::vector<EpisodeRecord> train_source_population(const RunConfig& config, SnapshotStore& store);

// One (schedule kind, seed) training run. Deterministic given config + seed.
std::vector<EpisodeRecord> run_single_seed(const RunConfig& config,
                                           const CurriculumSchedule& schedule, uint64_t seed,
                                           const SnapshotStore* store);

// Runs every configured seed, writing <kind>_seed<S>.jsonl under output_dir.
// Returns the written log paths in seed order.
std::vector<std::string> run_training(const RunConfig& config);

std::string log_path(const RunConfig& config, ScheduleKind kind, uint64_t seed);
std::string source_log_path(const RunConfig& config);

// Left-truncated trailing-window mean: out[i] = mean(in[max(0,i-w+1)..i]).
std::vector<double> rolling_average(const std::vector<double>& series, int window);

struct AggregateSeries {
    std::vector<double> student_mean, student_std;
    std::vector<double> teammate_mean, teammate_std;
    std::vector<double> team_mean, team_std;
};

// Per-episode mean and population standard deviation across seeds.
AggregateSeries aggregate_seeds(const std::vector<std::vector<EpisodeRecord>>& logs);

// One CSV per reward panel plus a plain-text summary of final-window means.
void emit_report(const std::map<ScheduleKind, AggregateSeries>& aggregates,
                 const std::string& out_dir, int episodes);

}  // namespace kitchenrl

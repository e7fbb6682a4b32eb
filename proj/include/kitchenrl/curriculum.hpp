#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kitchenrl/population.hpp"

namespace kitchenrl {

// Teammate used for a block of episodes: a frozen snapshot, or a second
// learner trained from scratch alongside the student.
struct TeammateSpec {
    bool co_learning = false;
    std::optional<SnapshotTag> frozen_tag;  // set iff !co_learning

    static TeammateSpec frozen(SnapshotTag tag) { return {false, tag}; }
    static TeammateSpec scratch() { return {true, std::nullopt}; }
    bool operator==(const TeammateSpec&) const = default;
};

std::string to_string(const TeammateSpec& spec);

enum class ScheduleKind {
    FixedLow,
    FixedMedium,
    FixedHigh,
    Increasing,
    Decreasing,
    IdqnScratch,
};

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& s);
const std::vector<ScheduleKind>& all_schedule_kinds();

struct CurriculumPhase {
    int episode_count = 0;
    TeammateSpec teammate;
};

// Contiguous partition of [0, K) into teammate phases. Three-phase curricula
// split K as floor(K/3), floor(K/3), remainder.
struct CurriculumSchedule {
    std::vector<CurriculumPhase> phases;

    int total_episodes() const;
};

struct PopulationTags {
    SnapshotTag low;
    SnapshotTag medium;
    SnapshotTag high;
};

CurriculumSchedule build_schedule(ScheduleKind kind, int total_episodes,
                                  const std::optional<PopulationTags>& tags);
const TeammateSpec& teammate_for_episode(const CurriculumSchedule& schedule, int episode);

}  // namespace kitchenrl

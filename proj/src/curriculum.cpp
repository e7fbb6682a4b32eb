#include "kitchenrl/curriculum.hpp"

#include <numeric>
#include <stdexcept>

namespace kitchenrl {

std::string to_string(const TeammateSpec& spec) {
    if (spec.co_learning) return "co_learning";
    return to_string(spec.frozen_tag->label) + "_ep" +
           std::to_string(spec.frozen_tag->milestone_episode);
}

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::FixedLow: return "fixed_low";
        case ScheduleKind::FixedMedium: return "fixed_medium";
        case ScheduleKind::FixedHigh: return "fixed_high";
        case ScheduleKind::Increasing: return "increasing";
        case ScheduleKind::Decreasing: return "decreasing";
        case ScheduleKind::IdqnScratch: return "idqn_scratch";
    }
    return "?";
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
    for (ScheduleKind kind : all_schedule_kinds()) {
        if (to_string(kind) == s) return kind;
    }
    throw std::invalid_argument("unknown schedule kind: " + s);
}

const std::vector<ScheduleKind>& all_schedule_kinds() {
    static const std::vector<ScheduleKind> kinds = {
        ScheduleKind::FixedLow,   ScheduleKind::FixedMedium, ScheduleKind::FixedHigh,
        ScheduleKind::Increasing, ScheduleKind::Decreasing,  ScheduleKind::IdqnScratch,
    };
    return kinds;
}

int CurriculumSchedule::total_episodes() const {
    return std::accumulate(phases.begin(), phases.end(), 0,
                           [](int acc, const CurriculumPhase& p) { return acc + p.episode_count; });
}

CurriculumSchedule build_schedule(ScheduleKind kind, int total_episodes,
                                  const std::optional<PopulationTags>& tags) {
    if (total_episodes < 1) throw std::invalid_argument("total episodes must be positive");

    const auto require_tags = [&]() -> const PopulationTags& {
        if (!tags) throw std::invalid_argument("schedule kind " + to_string(kind) +
                                               " requires a snapshot population");
        return *tags;
    };

    CurriculumSchedule schedule;
    switch (kind) {
        case ScheduleKind::IdqnScratch:
            schedule.phases.push_back({total_episodes, TeammateSpec::scratch()});
            return schedule;
        case ScheduleKind::FixedLow:
            schedule.phases.push_back({total_episodes, TeammateSpec::frozen(require_tags().low)});
            return schedule;
        case ScheduleKind::FixedMedium:
            schedule.phases.push_back({total_episodes, TeammateSpec::frozen(require_tags().medium)});
            return schedule;
        case ScheduleKind::FixedHigh:
            schedule.phases.push_back({total_episodes, TeammateSpec::frozen(require_tags().high)});
            return schedule;
        case ScheduleKind::Increasing:
        case ScheduleKind::Decreasing:
            break;
    }

    if (total_episodes < 3)
        throw std::invalid_argument("a 3-phase curriculum needs at least 3 episodes");
    const PopulationTags& pop = require_tags();
    const int third = total_episodes / 3;
    const int last = total_episodes - 2 * third;  // remainder goes to the final phase
    std::vector<SnapshotTag> order = kind == ScheduleKind::Increasing
                                         ? std::vector<SnapshotTag>{pop.low, pop.medium, pop.high}
                                         : std::vector<SnapshotTag>{pop.high, pop.medium, pop.low};
    schedule.phases.push_back({third, TeammateSpec::frozen(order[0])});
    schedule.phases.push_back({third, TeammateSpec::frozen(order[1])});
    schedule.phases.push_back({last, TeammateSpec::frozen(order[2])});
    return schedule;
}

const TeammateSpec& teammate_for_episode(const CurriculumSchedule& schedule, int episode) {
    if (episode < 0 || episode >= schedule.total_episodes())
        throw std::out_of_range("episode " + std::to_string(episode) + " outside [0, K)");
    int offset = 0;
    for (const CurriculumPhase& phase : schedule.phases) {
        if (episode < offset + phase.episode_count) return phase.teammate;
        offset += phase.episode_count;
    }
    throw std::logic_error("unreachable: schedule phases do not cover K");
}

}  // namespace kitchenrl

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kitchenrl/net.hpp"
#include "kitchenrl/types.hpp"

namespace kitchenrl {

enum class SkillLabel { Low, Medium, High };

std::string to_string(SkillLabel label);
SkillLabel skill_label_from_string(const std::string& s);

struct SnapshotTag {
    int milestone_episode = 0;
    SkillLabel label = SkillLabel::Low;
    uint64_t source_seed = 0;
    // Grid slot the policy was trained in; it must be deployed in the same
    // slot, so the student takes the opposite one.
    int agent_slot = 1;

    std::string filename() const;
    bool operator==(const SnapshotTag&) const = default;
};

// Immutable greedy policy wrapped around a parameter snapshot.
class FrozenPolicy {
  public:
    FrozenPolicy(QNetwork net, SnapshotTag tag) : net_(std::move(net)), tag_(tag) {}

    int act(const Observation& observation) const;
    const QNetwork& network() const { return net_; }
    const SnapshotTag& tag() const { return tag_; }

  private:
    QNetwork net_;
    SnapshotTag tag_;
};

int frozen_act(const FrozenPolicy& policy, const Observation& observation);

// Directory of .qnet snapshot files plus a manifest mapping skill labels to
// milestone episodes. Milestones are assigned low/medium/high in ascending
// order.
class SnapshotStore {
  public:
    explicit SnapshotStore(std::string directory);

    // Persists the snapshot for a milestone episode; fails on duplicates.
    SnapshotTag capture_snapshot(const QNetwork& net, int episode, uint64_t source_seed,
                                 const std::vector<int>& milestones, int agent_slot = 1);

    FrozenPolicy load(const SnapshotTag& tag) const;
    FrozenPolicy load_by_label(SkillLabel label) const;
    bool has_label(SkillLabel label) const;
    std::vector<SnapshotTag> tags() const;

    const std::string& directory() const { return dir_; }

  private:
    void read_manifest();
    void write_manifest() const;

    std::string dir_;
    std::vector<SnapshotTag> tags_;
};

}  // namespace kitchenrl

#include "kitchenrl/population.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "kitchenrl/learner.hpp"

namespace kitchenrl {

namespace fs = std::filesystem;

std::string to_string(SkillLabel label) {
    switch (label) {
        case SkillLabel::Low: return "low";
        case SkillLabel::Medium: return "medium";
        case SkillLabel::High: return "high";
    }
    return "?";
}

SkillLabel skill_label_from_string(const std::string& s) {
    if (s == "low") return SkillLabel::Low;
    if (s == "medium") return SkillLabel::Medium;
    if (s == "high") return SkillLabel::High;
    throw std::invalid_argument("unknown skill label: " + s);
}

std::string SnapshotTag::filename() const {
    return "teammate_seed" + std::to_string(source_seed) + "_ep" +
           std::to_string(milestone_episode) + ".qnet";
}

int FrozenPolicy::act(const Observation& observation) const {
    return greedy_action(net_, observation);
}

int frozen_act(const FrozenPolicy& policy, const Observation& observation) {
    return policy.act(observation);
}

SnapshotStore::SnapshotStore(std::string directory) : dir_(std::move(directory)) {
    fs::create_directories(dir_);
    read_manifest();
}

SnapshotTag SnapshotStore::capture_snapshot(const QNetwork& net, int episode, uint64_t source_seed,
                                            const std::vector<int>& milestones, int agent_slot) {
    std::vector<int> sorted = milestones;
    std::sort(sorted.begin(), sorted.end());
    const auto it = std::find(sorted.begin(), sorted.end(), episode);
    if (it == sorted.end())
        throw std::invalid_argument("episode " + std::to_string(episode) +
                                    " is not a configured snapshot milestone");
    if (sorted.size() != 3)
        throw std::invalid_argument("expected exactly 3 milestones, got " +
                                    std::to_string(sorted.size()));

    SnapshotTag tag;
    tag.milestone_episode = episode;
    tag.source_seed = source_seed;
    tag.label = static_cast<SkillLabel>(it - sorted.begin());
    if (agent_slot < 0 || agent_slot >= kNumAgents)
        throw std::invalid_argument("agent_slot out of range");
    tag.agent_slot = agent_slot;

    for (const SnapshotTag& existing : tags_) {
        if (existing == tag) throw std::runtime_error("duplicate snapshot tag: " + tag.filename());
    }

    save_network(net, (fs::path(dir_) / tag.filename()).string());
    tags_.push_back(tag);
    write_manifest();
    return tag;
}

FrozenPolicy SnapshotStore::load(const SnapshotTag& tag) const {
    return FrozenPolicy(load_network((fs::path(dir_) / tag.filename()).string()), tag);
}

FrozenPolicy SnapshotStore::load_by_label(SkillLabel label) const {
    for (const SnapshotTag& tag : tags_) {
        if (tag.label == label) return load(tag);
    }
    throw std::runtime_error("snapshot store has no '" + to_string(label) + "' snapshot in " + dir_);
}

bool SnapshotStore::has_label(SkillLabel label) const {
    return std::any_of(tags_.begin(), tags_.end(),
                       [&](const SnapshotTag& t) { return t.label == label; });
}

std::vector<SnapshotTag> SnapshotStore::tags() const { return tags_; }

void SnapshotStore::read_manifest() {
    const fs::path manifest = fs::path(dir_) / "manifest.json";
    if (!fs::exists(manifest)) return;
    std::ifstream in(manifest);
    nlohmann::json doc = nlohmann::json::parse(in);
    tags_.clear();
    for (const auto& entry : doc.at("snapshots")) {
        SnapshotTag tag;
        tag.milestone_episode = entry.at("milestone_episode").get<int>();
        tag.label = skill_label_from_string(entry.at("label").get<std::string>());
        tag.source_seed = entry.at("source_seed").get<uint64_t>();
        tag.agent_slot = entry.value("agent_slot", 1);
        tags_.push_back(tag);
    }
}

void SnapshotStore::write_manifest() const {
    nlohmann::json doc;
    doc["snapshots"] = nlohmann::json::array();
    for (const SnapshotTag& tag : tags_) {
        doc["snapshots"].push_back({{"milestone_episode", tag.milestone_episode},
                                    {"label", to_string(tag.label)},
                                    {"source_seed", tag.source_seed},
                                    {"agent_slot", tag.agent_slot},
                                    {"file", tag.filename()}});
    }
    std::ofstream out(fs::path(dir_) / "manifest.json", std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest in " + dir_);
    out << doc.dump(2) << '\n';
}

}  // namespace kitchenrl

#pragma once

// Global model construction: breadth-first reachability over the agent
// product with interleaving of private events and synchronization on shared
// ones. State numbering is canonical (BFS discovery order, successors
// explored by (agent order, event id)), so two runs on the same system are
// bit-identical.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "amc/agent.hpp"
#include "amc/validate.hpp"

namespace amc {

struct ComposeOptions {
  uint64_t state_cap = 200'000'000;
  uint64_t local_state_cap = DEFAULT_LOCAL_STATE_CAP;
};

struct Edge {
  uint32_t src;
  uint32_t event;
  uint32_t dst;
};

struct ModelStats {
  uint64_t states = 0;
  uint64_t transitions = 0;
  double gen_seconds = 0.0;
};

class GlobalModel {
public:
  int agent_count() const { return static_cast<int>(agents_.size()); }
  uint32_t state_count() const { return state_count_; }
  uint64_t transition_count() const { return edges_.size(); }
  uint32_t initial_state() const { return 0; }

  uint32_t local_of(uint32_t state, int agent) const {
    return locals_[static_cast<size_t>(state) * agents_.size() + agent];
  }
  std::span<const uint32_t> locals_of(uint32_t state) const {
    return {locals_.data() + static_cast<size_t>(state) * agents_.size(),
            agents_.size()};
  }

  std::span<const Edge> out_edges(uint32_t state) const;
  // Indices into edges() of transitions entering `state`.
  std::span<const uint32_t> in_edge_indices(uint32_t state) const;
  const std::vector<Edge> &edges() const { return edges_; }

  const ConcreteAgent &agent(int i) const { return agents_[i]; }
  const ValidatedSystem &system() const { return *system_; }

  ModelStats stats() const;
  const Diagnostics &warnings() const { return warnings_; }

private:
  friend GlobalModel compose(const ValidatedSystem &, const ComposeOptions &);

  const ValidatedSystem *system_ = nullptr;
  std::vector<ConcreteAgent> agents_;
  uint32_t state_count_ = 0;
  std::vector<uint32_t> locals_;  // state-major, agent_count per state
  std::vector<Edge> edges_;       // ascending (src, discovery order)
  std::vector<uint64_t> out_offsets_;
  std::vector<uint32_t> in_edges_;  // edge indices grouped by dst
  std::vector<uint64_t> in_offsets_;
  double gen_seconds_ = 0.0;
  Diagnostics warnings_;
};

// Throws CapacityError past options.state_cap. A deadlocked initial state is
// legal; deadlocks are reported in the model's warnings.
GlobalModel compose(const ValidatedSystem &system,
                    const ComposeOptions &options = {});

// The stored outgoing transitions of `state`. Throws ContractError for an
// out-of-range index.
std::span<const Edge> enabled(const GlobalModel &model, uint32_t state);

ModelStats model_stats(const GlobalModel &model);

// Observation key of a coalition: members' local ids in agent order.
// Coalition must be ascending agent ids; unknown agents raise ContractError.
std::vector<uint32_t> project(const GlobalModel &model, uint32_t state,
                              std::span<const int> coalition);

struct EpistemicClass {
  std::vector<int> coalition;
  std::vector<uint32_t> key;      // shared observation
  std::vector<uint32_t> members;  // ascending state indices
};

// Partition of the state set by project(.,coalition); classes ordered by
// first member.
std::vector<EpistemicClass> epistemic_partition(const GlobalModel &model,
                                                std::span<const int> coalition);

// Human-readable "loc[var=val,...]" form of one agent component.
std::string describe_local(const GlobalModel &model, int agent, uint32_t local);
std::string describe_state(const GlobalModel &model, uint32_t state);

}  // namespace amc

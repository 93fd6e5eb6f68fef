#pragma once

// Expansion of a resolved agent into its concrete local-state space:
// local state = (location, valuation), encoded as a dense mixed-radix id so
// the composer never materializes per-state objects.

#include <cstdint>
#include <span>
#include <vector>

#include "amc/validate.hpp"

namespace amc {

inline constexpr uint64_t DEFAULT_LOCAL_STATE_CAP = 1'000'000;

class ConcreteAgent {
public:
  // Throws CapacityError when |locations| * prod(domain sizes) exceeds cap.
  explicit ConcreteAgent(const ResolvedAgent &decl,
                         uint64_t cap = DEFAULT_LOCAL_STATE_CAP);

  const ResolvedAgent &decl() const { return *decl_; }

  // Candidate local states (locations x full valuation domain); global
  // reachability restricts which of them actually occur.
  uint32_t candidate_count() const { return candidate_count_; }
  uint32_t initial_local() const { return initial_; }

  int location_of(uint32_t local) const {
    return static_cast<int>(local / valuation_space_);
  }
  int value_of(uint32_t local, int var) const;
  void decode_values(uint32_t local, std::span<int> out) const;
  uint32_t encode(int location, std::span<const int> values) const;
  // Re-encodes `local` with its valuation replaced by `values`.
  uint32_t with_values(int new_location, std::span<const int> values) const {
    return encode(new_location, values);
  }

  // Repertoire of choices: event ids available at a location, ascending.
  // Depends on the location only; guards restrict firing, not membership.
  std::span<const int> protocol(int location) const;

  // Transitions from `location` labelled `event` (guards pairwise exclusive,
  // so at most one fires in any context). Empty if the event is not offered.
  std::span<const ResolvedTransition *const> transitions_at(int location,
                                                            int event) const;

  size_t var_count() const { return decl_->vars.size(); }
  uint64_t valuation_space() const { return valuation_space_; }

private:
  const ResolvedAgent *decl_;
  uint32_t candidate_count_ = 0;
  uint32_t initial_ = 0;
  uint64_t valuation_space_ = 1;
  std::vector<uint64_t> strides_;  // per variable
  // Per location: protocol events and transition groups, both sorted by
  // event id.
  std::vector<std::vector<int>> protocol_;
  std::vector<std::vector<std::pair<int, std::vector<const ResolvedTransition *>>>>
      by_event_;
};

// Def-style expansion entry point; reports locations with no outgoing
// transitions into `warnings` when given (dead local states).
ConcreteAgent expand_template(const ResolvedAgent &decl,
                              uint64_t cap = DEFAULT_LOCAL_STATE_CAP,
                              Diagnostics *warnings = nullptr);

}  // namespace amc

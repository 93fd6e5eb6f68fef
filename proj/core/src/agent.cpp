#include "amc/agent.hpp"

#include <algorithm>

namespace amc {

ConcreteAgent::ConcreteAgent(const ResolvedAgent &decl, uint64_t cap)
    : decl_(&decl) {
  cap = std::min<uint64_t>(cap, UINT32_MAX);  // ids are 32-bit
  strides_.resize(decl.vars.size());
  uint64_t space = 1;
  for (size_t v = 0; v < decl.vars.size(); ++v) {
    strides_[v] = space;
    space *= static_cast<uint64_t>(decl.vars[v].domain_size());
    if (space > cap)
      throw CapacityError("agent '" + decl.name +
                          "': valuation domain product exceeds cap of " +
                          std::to_string(cap));
  }
  valuation_space_ = space;
  uint64_t total = space * decl.locations.size();
  if (total > cap)
    throw CapacityError("agent '" + decl.name + "': " + std::to_string(total) +
                        " candidate local states exceed cap of " +
                        std::to_string(cap));
  candidate_count_ = static_cast<uint32_t>(total);

  std::vector<int> init_vals(decl.vars.size());
  for (size_t v = 0; v < decl.vars.size(); ++v)
    init_vals[v] = decl.vars[v].init;
  initial_ = encode(decl.initial_location, init_vals);

  protocol_.resize(decl.locations.size());
  by_event_.resize(decl.locations.size());
  for (const ResolvedTransition &t : decl.transitions) {
    auto &groups = by_event_[t.source];
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto &g) { return g.first == t.event; });
    if (it == groups.end()) {
      groups.push_back({t.event, {}});
      it = std::prev(groups.end());
    }
    it->second.push_back(&t);
  }
  for (size_t l = 0; l < decl.locations.size(); ++l) {
    auto &groups = by_event_[l];
    std::sort(groups.begin(), groups.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    for (const auto &g : groups) protocol_[l].push_back(g.first);
  }
}

int ConcreteAgent::value_of(uint32_t local, int var) const {
  const VariableDecl &decl = decl_->vars[var];
  uint64_t rest = local % valuation_space_;
  return decl.lo + static_cast<int>((rest / strides_[var]) %
                                    static_cast<uint64_t>(decl.domain_size()));
}

void ConcreteAgent::decode_values(uint32_t local, std::span<int> out) const {
  uint64_t rest = local % valuation_space_;
  for (size_t v = 0; v < decl_->vars.size(); ++v) {
    const VariableDecl &decl = decl_->vars[v];
    out[v] = decl.lo + static_cast<int>((rest / strides_[v]) %
                                        static_cast<uint64_t>(decl.domain_size()));
  }
}

uint32_t ConcreteAgent::encode(int location, std::span<const int> values) const {
  uint64_t id = static_cast<uint64_t>(location) * valuation_space_;
  for (size_t v = 0; v < decl_->vars.size(); ++v)
    id += static_cast<uint64_t>(values[v] - decl_->vars[v].lo) * strides_[v];
  return static_cast<uint32_t>(id);
}

std::span<const int> ConcreteAgent::protocol(int location) const {
  return protocol_[location];
}

std::span<const ResolvedTransition *const> ConcreteAgent::transitions_at(
    int location, int event) const {
  const auto &groups = by_event_[location];
  auto it = std::lower_bound(
      groups.begin(), groups.end(), event,
      [](const auto &g, int e) { return g.first < e; });
  if (it == groups.end() || it->first != event) return {};
  return it->second;
}

ConcreteAgent expand_template(const ResolvedAgent &decl, uint64_t cap,
                              Diagnostics *warnings) {
  ConcreteAgent agent(decl, cap);
  if (warnings) {
    for (size_t l = 0; l < decl.locations.size(); ++l)
      if (agent.protocol(static_cast<int>(l)).empty())
        warnings->push_back({Severity::warning,
                             "location '" + decl.locations[l] + "' of agent '" +
                                 decl.name +
                                 "' has no outgoing transition (dead local state)",
                             {}});
  }
  return agent;
}

}  // namespace amc

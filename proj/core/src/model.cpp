#include "amc/model.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <unordered_map>

#include "amc/expr.hpp"

namespace amc {

namespace {

using u128 = unsigned __int128;

struct U128Hash {
  size_t operator()(u128 v) const noexcept {
    // splitmix-style mix of both halves
    auto mix = [](uint64_t x) {
      x += 0x9e3779b97f4a7c15ULL;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      return x ^ (x >> 31);
    };
    return mix(static_cast<uint64_t>(v)) ^
           (mix(static_cast<uint64_t>(v >> 64)) * 0x9e3779b97f4a7c15ULL);
  }
};

struct TupleHash {
  size_t operator()(const std::vector<uint32_t> &v) const noexcept {
    size_t h = 0x811c9dc5u;
    for (uint32_t x : v) h = (h ^ x) * 0x01000193u * 31u + (h >> 16);
    return h;
  }
};

// Dedup map from local-id tuples to state indices. Tuples pack into one
// 128-bit mixed-radix key whenever the candidate product fits; the tuple map
// is the fallback for pathologically wide systems.
class StateIndex {
 public:
  StateIndex(std::span<const ConcreteAgent> agents) {
    u128 product = 1;
    packed_ = true;
    for (const auto &a : agents) {
      u128 radix = a.candidate_count();
      if (product > (~static_cast<u128>(0)) / (radix == 0 ? 1 : radix)) {
        packed_ = false;
        break;
      }
      product *= radix;
      radices_.push_back(a.candidate_count());
    }
  }

  // Returns the index of the tuple, inserting `next` if new.
  uint32_t find_or_insert(std::span<const uint32_t> locals, uint32_t next,
                          bool &inserted) {
    if (packed_) {
      u128 key = 0;
      for (size_t i = 0; i < locals.size(); ++i)
        key = key * radices_[i] + locals[i];
      auto [it, fresh] = packed_map_.try_emplace(key, next);
      inserted = fresh;
      return it->second;
    }
    std::vector<uint32_t> key(locals.begin(), locals.end());
    auto [it, fresh] = tuple_map_.try_emplace(std::move(key), next);
    inserted = fresh;
    return it->second;
  }

 private:
  bool packed_ = true;
  std::vector<u128> radices_;
  std::unordered_map<u128, uint32_t, U128Hash> packed_map_;
  std::unordered_map<std::vector<uint32_t>, uint32_t, TupleHash> tuple_map_;
};

}  // namespace

std::span<const Edge> GlobalModel::out_edges(uint32_t state) const {
  return {edges_.data() + out_offsets_[state],
          static_cast<size_t>(out_offsets_[state + 1] - out_offsets_[state])};
}

std::span<const uint32_t> GlobalModel::in_edge_indices(uint32_t state) const {
  return {in_edges_.data() + in_offsets_[state],
          static_cast<size_t>(in_offsets_[state + 1] - in_offsets_[state])};
}

ModelStats GlobalModel::stats() const {
  return {state_count_, edges_.size(), gen_seconds_};
}

ModelStats model_stats(const GlobalModel &model) { return model.stats(); }

GlobalModel compose(const ValidatedSystem &system, const ComposeOptions &options) {
  auto t0 = std::chrono::steady_clock::now();
  GlobalModel m;
  m.system_ = &system;
  const size_t n = system.agents.size();
  for (const auto &agent : system.agents)
    m.agents_.push_back(ConcreteAgent(agent, options.local_state_cap));

  StateIndex index(m.agents_);

  // Per-state scratch: decoded locations and valuations of every agent.
  std::vector<int> locs(n);
  std::vector<std::vector<int>> vals(n);
  std::vector<const int *> ptrs(n);
  for (size_t a = 0; a < n; ++a) {
    vals[a].resize(system.agents[a].vars.size());
    ptrs[a] = vals[a].data();
  }
  SnapshotContext ctx{ptrs};
  std::vector<int> new_vals;
  std::vector<uint32_t> succ(n);
  std::vector<const ResolvedTransition *> firing(n);

  // Event dedup per state, epoch-versioned to avoid clearing.
  std::vector<uint32_t> seen_epoch(system.events.size(), 0);
  uint32_t epoch = 0;

  // Initial state.
  {
    std::vector<uint32_t> init(n);
    for (size_t a = 0; a < n; ++a) init[a] = m.agents_[a].initial_local();
    bool fresh = false;
    index.find_or_insert(init, 0, fresh);
    m.locals_.insert(m.locals_.end(), init.begin(), init.end());
    m.state_count_ = 1;
  }

  uint64_t deadlocks = 0;
  uint32_t first_deadlock = UINT32_MAX;

  // BFS in discovery order; successor exploration per state walks agents in
  // declaration order and each agent's protocol in ascending event id, which
  // fixes the canonical numbering.
  std::vector<uint32_t> cur(n);
  for (uint32_t s = 0; s < m.state_count_; ++s) {
    // locals_ grows while expanding, so copy the tuple out first.
    std::copy_n(m.locals_.begin() + static_cast<size_t>(s) * n, n, cur.begin());
    const uint32_t *locals = cur.data();
    for (size_t a = 0; a < n; ++a) {
      locs[a] = m.agents_[a].location_of(locals[a]);
      m.agents_[a].decode_values(locals[a], vals[a]);
    }
    ++epoch;
    size_t out_before = m.edges_.size();

    for (size_t a = 0; a < n; ++a) {
      for (int e : m.agents_[a].protocol(locs[a])) {
        if (seen_epoch[e] == epoch) continue;
        seen_epoch[e] = epoch;
        const std::vector<int> &participants = system.event_agents[e];
        // Every participant must offer an enabled e-transition here.
        bool ok = true;
        for (int p : participants) {
          auto group = m.agents_[p].transitions_at(locs[p], e);
          const ResolvedTransition *hit = nullptr;
          for (const ResolvedTransition *t : group)
            if (eval_guard(t->guard, ctx)) {
              hit = t;  // guards are mutually exclusive: first is only
              break;
            }
          if (!hit) {
            ok = false;
            break;
          }
          firing[p] = hit;
        }
        if (!ok) continue;

        // Successor: participants move (updates read the pre-state
        // snapshot), everyone else keeps its local state.
        std::copy(locals, locals + n, succ.begin());
        for (int p : participants) {
          new_vals = vals[p];
          apply_updates(firing[p]->updates, p, ctx, system.agents[p].vars,
                        new_vals);
          succ[p] = m.agents_[p].encode(firing[p]->dest, new_vals);
        }
        bool fresh = false;
        uint32_t idx = index.find_or_insert(succ, m.state_count_, fresh);
        if (fresh) {
          if (m.state_count_ >= options.state_cap)
            throw CapacityError("global state cap of " +
                                std::to_string(options.state_cap) +
                                " exceeded");
          m.locals_.insert(m.locals_.end(), succ.begin(), succ.end());
          ++m.state_count_;
        }
        m.edges_.push_back({s, static_cast<uint32_t>(e), idx});
      }
    }
    if (m.edges_.size() == out_before) {
      ++deadlocks;
      if (first_deadlock == UINT32_MAX) first_deadlock = s;
    }
  }

  // CSR over out-edges (already grouped by ascending src).
  m.out_offsets_.assign(m.state_count_ + 1, 0);
  for (const Edge &e : m.edges_) ++m.out_offsets_[e.src + 1];
  for (size_t i = 1; i < m.out_offsets_.size(); ++i)
    m.out_offsets_[i] += m.out_offsets_[i - 1];

  // Reverse CSR: edge indices grouped by destination.
  m.in_offsets_.assign(m.state_count_ + 1, 0);
  for (const Edge &e : m.edges_) ++m.in_offsets_[e.dst + 1];
  for (size_t i = 1; i < m.in_offsets_.size(); ++i)
    m.in_offsets_[i] += m.in_offsets_[i - 1];
  m.in_edges_.resize(m.edges_.size());
  {
    std::vector<uint64_t> cursor(m.in_offsets_.begin(), m.in_offsets_.end() - 1);
    for (size_t i = 0; i < m.edges_.size(); ++i)
      m.in_edges_[cursor[m.edges_[i].dst]++] = static_cast<uint32_t>(i);
  }

  if (deadlocks > 0) {
    std::string msg = std::to_string(deadlocks) +
                      " reachable deadlock state(s), first at index " +
                      std::to_string(first_deadlock);
    if (first_deadlock == 0) msg += " (the initial state)";
    m.warnings_.push_back({Severity::warning, msg, {}});
  }

  m.gen_seconds_ =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return m;
}

std::span<const Edge> enabled(const GlobalModel &model, uint32_t state) {
  if (state >= model.state_count())
    throw ContractError("state index out of range");
  return model.out_edges(state);
}

std::vector<uint32_t> project(const GlobalModel &model, uint32_t state,
                              std::span<const int> coalition) {
  if (state >= model.state_count())
    throw ContractError("state index out of range");
  std::vector<uint32_t> key;
  key.reserve(coalition.size());
  for (int a : coalition) {
    if (a < 0 || a >= model.agent_count())
      throw ContractError("unknown agent in coalition");
    key.push_back(model.local_of(state, a));
  }
  return key;
}

std::vector<EpistemicClass> epistemic_partition(const GlobalModel &model,
                                                std::span<const int> coalition) {
  std::unordered_map<std::vector<uint32_t>, size_t, TupleHash> by_key;
  std::vector<EpistemicClass> classes;
  for (uint32_t s = 0; s < model.state_count(); ++s) {
    auto key = project(model, s, coalition);
    auto [it, fresh] = by_key.try_emplace(key, classes.size());
    if (fresh) {
      EpistemicClass cls;
      cls.coalition.assign(coalition.begin(), coalition.end());
      cls.key = key;
      classes.push_back(std::move(cls));
    }
    classes[it->second].members.push_back(s);
  }
  return classes;
}

std::string describe_local(const GlobalModel &model, int agent, uint32_t local) {
  const ConcreteAgent &ca = model.agent(agent);
  const ResolvedAgent &decl = ca.decl();
  std::ostringstream out;
  out << decl.locations[ca.location_of(local)];
  if (!decl.vars.empty()) {
    out << '[';
    for (size_t v = 0; v < decl.vars.size(); ++v) {
      if (v) out << ',';
      out << decl.vars[v].name << '=' << ca.value_of(local, static_cast<int>(v));
    }
    out << ']';
  }
  return out.str();
}

std::string describe_state(const GlobalModel &model, uint32_t state) {
  std::ostringstream out;
  out << '(';
  for (int a = 0; a < model.agent_count(); ++a) {
    if (a) out << ", ";
    out << model.system().agents[a].name << ':'
        << describe_local(model, a, model.local_of(state, a));
  }
  out << ')';
  return out.str();
}

}  // namespace amc

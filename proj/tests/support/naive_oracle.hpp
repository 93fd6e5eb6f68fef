#pragma once

// Independent reference construction of the global model: direct product
// enumeration with a per-state full scan, working straight off the parsed
// SystemSpec with its own expression evaluator. Deliberately shares no code
// with the production composer (no ConcreteAgent, no GuardExpr, no
// SnapshotContext); states are compared as describable value tuples.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "amc/ast.hpp"

namespace amc::test {

struct NaiveLocal {
  std::string location;
  std::map<std::string, long> values;

  bool operator<(const NaiveLocal &o) const {
    return std::tie(location, values) < std::tie(o.location, o.values);
  }
  bool operator==(const NaiveLocal &o) const {
    return location == o.location && values == o.values;
  }
};

using NaiveState = std::vector<NaiveLocal>;  // one component per agent

struct NaiveModel {
  std::set<NaiveState> states;
  std::set<std::tuple<NaiveState, std::string, NaiveState>> edges;
  NaiveState initial;
};

class NaiveComposer {
 public:
  explicit NaiveComposer(const SystemSpec &spec) : spec_(spec) {
    for (const auto &agent : spec.agents) {
      std::vector<std::string> locs;
      for (const auto &t : agent.transitions) {
        if (std::find(locs.begin(), locs.end(), t.source) == locs.end())
          locs.push_back(t.source);
        if (std::find(locs.begin(), locs.end(), t.dest) == locs.end())
          locs.push_back(t.dest);
      }
      locations_.push_back(std::move(locs));
      std::set<std::string> alphabet;
      for (const auto &t : agent.transitions) alphabet.insert(t.event);
      alphabets_.push_back(std::move(alphabet));
    }
    for (const auto &agent : spec.agents)
      for (const auto &t : agent.transitions) all_events_.insert(t.event);
  }

  NaiveModel run() const {
    NaiveModel model;
    model.initial = initial_state();

    // All candidate states: product of (location x valuation domain) per
    // agent, materialized up front.
    std::vector<std::vector<NaiveLocal>> locals;
    for (size_t a = 0; a < spec_.agents.size(); ++a)
      locals.push_back(agent_locals(a));
    std::vector<NaiveState> candidates;
    NaiveState partial;
    build_product(locals, 0, partial, candidates);

    // Full scan: transition relation over every candidate pair.
    std::map<NaiveState, std::vector<std::pair<std::string, NaiveState>>> succ;
    for (const NaiveState &s : candidates)
      for (const std::string &event : all_events_)
        if (auto next = fire(s, event)) succ[s].push_back({event, *next});

    // Reachability restriction.
    std::vector<NaiveState> queue{model.initial};
    model.states.insert(model.initial);
    while (!queue.empty()) {
      NaiveState s = queue.back();
      queue.pop_back();
      auto it = succ.find(s);
      if (it == succ.end()) continue;
      for (const auto &[event, next] : it->second) {
        model.edges.insert({s, event, next});
        if (model.states.insert(next).second) queue.push_back(next);
      }
    }
    return model;
  }

 private:
  NaiveState initial_state() const {
    NaiveState init;
    for (const auto &agent : spec_.agents) {
      NaiveLocal l;
      l.location = agent.init_location;
      for (const auto &v : agent.vars) l.values[v.name] = v.init;
      init.push_back(std::move(l));
    }
    return init;
  }

  std::vector<NaiveLocal> agent_locals(size_t a) const {
    const AgentDecl &agent = spec_.agents[a];
    std::vector<NaiveLocal> result;
    std::vector<std::map<std::string, long>> valuations{{}};
    for (const auto &v : agent.vars) {
      std::vector<std::map<std::string, long>> grown;
      for (const auto &base : valuations)
        for (long x = v.lo; x <= v.hi; ++x) {
          auto copy = base;
          copy[v.name] = x;
          grown.push_back(std::move(copy));
        }
      valuations = std::move(grown);
    }
    for (const auto &loc : locations_[a])
      for (const auto &vals : valuations)
        result.push_back({loc, vals});
    return result;
  }

  static void build_product(const std::vector<std::vector<NaiveLocal>> &locals,
                            size_t a, NaiveState &partial,
                            std::vector<NaiveState> &out) {
    if (a == locals.size()) {
      out.push_back(partial);
      return;
    }
    for (const NaiveLocal &l : locals[a]) {
      partial.push_back(l);
      build_product(locals, a + 1, partial, out);
      partial.pop_back();
    }
  }

  long operand_value(const Operand &op, size_t self,
                     const NaiveState &state) const {
    if (op.kind == Operand::Kind::constant) return op.value;
    if (op.kind == Operand::Kind::own_var ||
        op.agent == spec_.agents[self].name)
      return state[self].values.at(op.var);
    for (size_t a = 0; a < spec_.agents.size(); ++a)
      if (spec_.agents[a].name == op.agent) return state[a].values.at(op.var);
    throw std::runtime_error("naive: unknown agent " + op.agent);
  }

  bool guard_holds(const BoolExpr &e, size_t self, const NaiveState &s) const {
    switch (e.kind) {
      case BoolExpr::Kind::constant: return e.value;
      case BoolExpr::Kind::compare:
        return cmp_holds(e.op, operand_value(e.lhs, self, s),
                         operand_value(e.rhs, self, s));
      case BoolExpr::Kind::negation: return !guard_holds(*e.a, self, s);
      case BoolExpr::Kind::conjunction:
        return guard_holds(*e.a, self, s) && guard_holds(*e.b, self, s);
      case BoolExpr::Kind::disjunction:
        return guard_holds(*e.a, self, s) || guard_holds(*e.b, self, s);
      case BoolExpr::Kind::implication:
        return !guard_holds(*e.a, self, s) || guard_holds(*e.b, self, s);
      default:
        throw std::runtime_error("naive: unsupported guard atom");
    }
  }

  // Fires `event` at `s` if every agent with the event in its alphabet has
  // exactly one enabled transition for it; participants read the pre-state.
  std::optional<NaiveState> fire(const NaiveState &s,
                                 const std::string &event) const {
    std::vector<std::pair<size_t, const TransitionDecl *>> moves;
    for (size_t a = 0; a < spec_.agents.size(); ++a) {
      if (!alphabets_[a].count(event)) continue;
      const TransitionDecl *hit = nullptr;
      for (const auto &t : spec_.agents[a].transitions) {
        if (t.event != event || t.source != s[a].location) continue;
        bool enabled = !t.guard || guard_holds(*t.guard, a, s);
        if (!enabled) continue;
        if (hit) throw std::runtime_error("naive: overlapping guards");
        hit = &t;
      }
      if (!hit) return std::nullopt;
      moves.push_back({a, hit});
    }
    if (moves.empty()) return std::nullopt;
    NaiveState next = s;
    for (const auto &[a, t] : moves) {
      next[a].location = t->dest;
      for (const auto &u : t->updates) {
        long rhs;
        if (u.rhs.kind == Operand::Kind::constant) {
          rhs = u.rhs.value;
        } else if (u.rhs.kind == Operand::Kind::own_var ||
                   u.rhs.agent == spec_.agents[a].name) {
          rhs = next[a].values.at(u.rhs.var);  // own reads see earlier updates
        } else {
          rhs = operand_value(u.rhs, a, s);  // peers read the pre-state
        }
        long cur = next[a].values.at(u.var);
        long val = u.op == AssignOp::add   ? cur + rhs
                   : u.op == AssignOp::sub ? cur - rhs
                                           : rhs;
        for (const auto &v : spec_.agents[a].vars)
          if (v.name == u.var) val = std::clamp(val, v.lo, v.hi);
        next[a].values[u.var] = val;
      }
    }
    return next;
  }

  const SystemSpec &spec_;
  std::vector<std::vector<std::string>> locations_;
  std::vector<std::set<std::string>> alphabets_;
  std::set<std::string> all_events_;
};

}  // namespace amc::test

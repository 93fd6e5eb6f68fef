#include "amc/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "amc/expr.hpp"

namespace amc {

int ResolvedAgent::location_index(std::string_view name) const {
  for (size_t i = 0; i < locations.size(); ++i)
    if (locations[i] == name) return static_cast<int>(i);
  return -1;
}

int ResolvedAgent::var_index(std::string_view name) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

int ValidatedSystem::agent_index(std::string_view name) const {
  for (size_t i = 0; i < agents.size(); ++i)
    if (agents[i].name == name) return static_cast<int>(i);
  return -1;
}

int ValidatedSystem::event_index(std::string_view name) const {
  for (size_t i = 0; i < events.size(); ++i)
    if (events[i] == name) return static_cast<int>(i);
  return -1;
}

const std::vector<int> &agents_of(const ValidatedSystem &sys, int event) {
  if (event < 0 || static_cast<size_t>(event) >= sys.events.size())
    throw ContractError("unknown event id");
  return sys.event_agents[event];
}

namespace {

class Validator {
 public:
  explicit Validator(const SystemSpec &spec) : spec_(spec) {}

  ValidateResult run() {
    ValidateResult result;
    build_tables();
    resolve_agents();
    if (!has_errors(diags_)) check_guard_exclusivity();
    if (!has_errors(diags_)) check_dead_locations();
    result.diags = diags_;
    if (!has_errors(diags_)) {
      for (const auto &d : diags_)
        if (d.severity == Severity::warning) sys_.warnings.push_back(d);
      result.system = std::move(sys_);
    }
    return result;
  }

 private:
  void error(const std::string &msg, SourceLoc loc) {
    diags_.push_back({Severity::error, msg, loc});
  }
  void warn(const std::string &msg, SourceLoc loc) {
    diags_.push_back({Severity::warning, msg, loc});
  }

  // Interns agents, locations (first-appearance over transition endpoints),
  // variables, and the global event table (first-mention order over agents
  // then transitions), and derives Agent(e).
  void build_tables() {
    sys_.name = spec_.name;
    sys_.agents.resize(spec_.agents.size());
    for (size_t i = 0; i < spec_.agents.size(); ++i) {
      const AgentDecl &decl = spec_.agents[i];
      ResolvedAgent &agent = sys_.agents[i];
      agent.name = decl.name;
      for (const auto &v : decl.vars) {
        VariableDecl var;
        var.name = v.name;
        var.lo = static_cast<int>(v.lo);
        var.hi = static_cast<int>(v.hi);
        var.init = static_cast<int>(v.init);
        if (v.lo > v.hi)
          error("variable '" + v.name + "' has empty domain " +
                    std::to_string(v.lo) + ".." + std::to_string(v.hi),
                v.loc);
        else if (v.init < v.lo || v.init > v.hi)
          error("initial value " + std::to_string(v.init) + " of variable '" +
                    v.name + "' outside bounds " + std::to_string(v.lo) +
                    ".." + std::to_string(v.hi),
                v.loc);
        agent.vars.push_back(std::move(var));
      }
      auto intern_loc = [&agent](const std::string &name) {
        int idx = agent.location_index(name);
        if (idx < 0) {
          idx = static_cast<int>(agent.locations.size());
          agent.locations.push_back(name);
        }
        return idx;
      };
      std::set<int> alphabet;
      for (const auto &t : decl.transitions) {
        intern_loc(t.source);
        intern_loc(t.dest);
        int ev = sys_.event_index(t.event);
        if (ev < 0) {
          ev = static_cast<int>(sys_.events.size());
          sys_.events.push_back(t.event);
          sys_.event_agents.emplace_back();
        }
        alphabet.insert(ev);
      }
      agent.alphabet.assign(alphabet.begin(), alphabet.end());
      for (int ev : agent.alphabet)
        sys_.event_agents[ev].push_back(static_cast<int>(i));

      if (decl.transitions.empty())
        error("agent '" + decl.name + "' declares no transitions (empty event set)",
              decl.loc);
      agent.initial_location = agent.location_index(decl.init_location);
      if (agent.initial_location < 0)
        error("unknown initial location '" + decl.init_location +
                  "' in agent '" + decl.name + "'",
              decl.init_loc_pos);
    }
  }

  // (agent id, var id) of a variable reference, honoring the locality rule:
  // peers are only visible through a shared event.
  std::optional<ResolvedOperand> resolve_var_ref(const std::string &agent_name,
                                                 const std::string &var_name,
                                                 int self, int event,
                                                 SourceLoc loc) {
    ResolvedOperand op;
    op.kind = ResolvedOperand::Kind::variable;
    if (agent_name.empty() || agent_name == spec_.agents[self].name) {
      op.agent = self;
      op.var = sys_.agents[self].var_index(var_name);
      if (op.var < 0) {
        error("unknown variable '" + var_name + "' in agent '" +
                  spec_.agents[self].name + "'",
              loc);
        return std::nullopt;
      }
      return op;
    }
    int peer = sys_.agent_index(agent_name);
    if (peer < 0) {
      error("unknown agent '" + agent_name + "'", loc);
      return std::nullopt;
    }
    op.agent = peer;
    op.var = sys_.agents[peer].var_index(var_name);
    if (op.var < 0) {
      error("unknown variable '" + var_name + "' in agent '" + agent_name + "'",
            loc);
      return std::nullopt;
    }
    const auto &sharers = sys_.event_agents[event];
    if (!std::binary_search(sharers.begin(), sharers.end(), peer)) {
      error("peer variable " + agent_name + "." + var_name +
                " read on an event not shared with '" + agent_name + "'",
            loc);
      return std::nullopt;
    }
    return op;
  }

  std::optional<ResolvedOperand> resolve_operand(const Operand &op, int self,
                                                 int event) {
    if (op.kind == Operand::Kind::constant) {
      ResolvedOperand r;
      r.kind = ResolvedOperand::Kind::constant;
      r.value = static_cast<int>(op.value);
      return r;
    }
    const std::string &agent =
        op.kind == Operand::Kind::peer_var ? op.agent : std::string();
    return resolve_var_ref(agent, op.var, self, event, op.loc);
  }

  std::optional<GuardExpr> resolve_guard(const BoolExpr &e, int self, int event) {
    GuardExpr g;
    switch (e.kind) {
      case BoolExpr::Kind::constant:
        g.kind = GuardExpr::Kind::constant;
        g.value = e.value;
        return g;
      case BoolExpr::Kind::compare: {
        g.kind = GuardExpr::Kind::compare;
        g.op = e.op;
        auto lhs = resolve_operand(e.lhs, self, event);
        auto rhs = resolve_operand(e.rhs, self, event);
        if (!lhs || !rhs) return std::nullopt;
        g.lhs = *lhs;
        g.rhs = *rhs;
        return g;
      }
      case BoolExpr::Kind::negation: {
        g.kind = GuardExpr::Kind::negation;
        auto a = resolve_guard(*e.a, self, event);
        if (!a) return std::nullopt;
        g.children.push_back(std::move(*a));
        return g;
      }
      case BoolExpr::Kind::conjunction:
      case BoolExpr::Kind::disjunction:
      case BoolExpr::Kind::implication: {
        g.kind = e.kind == BoolExpr::Kind::conjunction
                     ? GuardExpr::Kind::conjunction
                 : e.kind == BoolExpr::Kind::disjunction
                     ? GuardExpr::Kind::disjunction
                     : GuardExpr::Kind::implication;
        auto a = resolve_guard(*e.a, self, event);
        auto b = resolve_guard(*e.b, self, event);
        if (!a || !b) return std::nullopt;
        g.children.push_back(std::move(*a));
        g.children.push_back(std::move(*b));
        return g;
      }
      case BoolExpr::Kind::location_atom:
      case BoolExpr::Kind::named_atom:
        error("location and proposition atoms are not allowed in guards", e.loc);
        return std::nullopt;
    }
    return std::nullopt;
  }

  void resolve_agents() {
    for (size_t i = 0; i < spec_.agents.size(); ++i) {
      const AgentDecl &decl = spec_.agents[i];
      ResolvedAgent &agent = sys_.agents[i];
      int self = static_cast<int>(i);
      for (size_t j = 0; j < decl.transitions.size(); ++j) {
        const TransitionDecl &t = decl.transitions[j];
        ResolvedTransition rt;
        rt.decl_index = static_cast<int>(j);
        rt.source = agent.location_index(t.source);
        rt.dest = agent.location_index(t.dest);
        rt.event = sys_.event_index(t.event);
        if (t.guard) {
          auto g = resolve_guard(*t.guard, self, rt.event);
          if (!g) continue;
          rt.guard = std::move(*g);
        }
        bool bad = false;
        for (const auto &u : t.updates) {
          ResolvedUpdate ru;
          ru.var = agent.var_index(u.var);
          if (ru.var < 0) {
            error("unknown variable '" + u.var + "' in agent '" + decl.name +
                      "'",
                  u.loc);
            bad = true;
            break;
          }
          ru.op = u.op;
          auto rhs = resolve_operand(u.rhs, self, rt.event);
          if (!rhs) {
            bad = true;
            break;
          }
          ru.rhs = *rhs;
          rt.updates.push_back(std::move(ru));
        }
        if (!bad) agent.transitions.push_back(std::move(rt));
      }
    }
  }

  // Variables read by a guard, as (agent, var) pairs.
  static void collect_reads(const GuardExpr &g,
                            std::set<std::pair<int, int>> &out) {
    if (g.kind == GuardExpr::Kind::compare) {
      if (g.lhs.kind == ResolvedOperand::Kind::variable)
        out.insert({g.lhs.agent, g.lhs.var});
      if (g.rhs.kind == ResolvedOperand::Kind::variable)
        out.insert({g.rhs.agent, g.rhs.var});
      return;
    }
    for (const auto &c : g.children) collect_reads(c, out);
  }

  // T_i must stay a partial function: for transitions sharing (location,
  // event), no joint assignment of the read variables may satisfy two guards
  // at once. Domains are finite and small, so enumerate them exhaustively.
  void check_guard_exclusivity() {
    for (size_t i = 0; i < sys_.agents.size(); ++i) {
      ResolvedAgent &agent = sys_.agents[i];
      std::map<std::pair<int, int>, std::vector<const ResolvedTransition *>>
          groups;
      for (const auto &t : agent.transitions)
        groups[{t.source, t.event}].push_back(&t);
      for (const auto &[key, group] : groups) {
        if (group.size() < 2) continue;
        for (size_t a = 0; a < group.size(); ++a)
          for (size_t b = a + 1; b < group.size(); ++b)
            if (auto witness = overlap_witness(group[a]->guard, group[b]->guard)) {
              const TransitionDecl &decl =
                  spec_.agents[i].transitions[group[b]->decl_index];
              error("overlapping guards for (" + agent.locations[key.first] +
                        ", " + sys_.events[key.second] + ") in agent '" +
                        agent.name + "': both fire at " + *witness,
                    decl.loc);
            }
      }
    }
  }

  // Joint valuation satisfying g1 && g2, rendered for the diagnostic, or
  // nullopt if the guards are mutually exclusive.
  std::optional<std::string> overlap_witness(const GuardExpr &g1,
                                             const GuardExpr &g2) {
    std::set<std::pair<int, int>> reads;
    collect_reads(g1, reads);
    collect_reads(g2, reads);
    std::vector<std::pair<int, int>> vars(reads.begin(), reads.end());
    std::vector<int> values(vars.size());

    // Scratch valuations for evaluation through the SnapshotContext.
    std::vector<std::vector<int>> vals(sys_.agents.size());
    std::vector<const int *> ptrs(sys_.agents.size(), nullptr);
    for (size_t a = 0; a < sys_.agents.size(); ++a) {
      vals[a].resize(sys_.agents[a].vars.size(), 0);
      ptrs[a] = vals[a].data();
    }
    SnapshotContext ctx{ptrs};

    size_t n = vars.size();
    std::vector<int> cursor(n, 0);
    while (true) {
      for (size_t k = 0; k < n; ++k) {
        const VariableDecl &d = sys_.agents[vars[k].first].vars[vars[k].second];
        values[k] = d.lo + cursor[k];
        vals[vars[k].first][vars[k].second] = values[k];
      }
      if (eval_guard(g1, ctx) && eval_guard(g2, ctx)) {
        std::string witness;
        if (n == 0) witness = "(no variables read)";
        for (size_t k = 0; k < n; ++k) {
          if (k) witness += ", ";
          witness += sys_.agents[vars[k].first].name + "." +
                     sys_.agents[vars[k].first].vars[vars[k].second].name +
                     "=" + std::to_string(values[k]);
        }
        return witness;
      }
      // Next point of the domain product.
      size_t k = 0;
      for (; k < n; ++k) {
        const VariableDecl &d = sys_.agents[vars[k].first].vars[vars[k].second];
        if (++cursor[k] < d.domain_size()) break;
        cursor[k] = 0;
      }
      if (k == n) {
        if (n == 0) break;  // single empty-product point already tested
        return std::nullopt;
      }
      if (n == 0) break;
    }
    return std::nullopt;
  }

  void check_dead_locations() {
    for (size_t i = 0; i < sys_.agents.size(); ++i) {
      const ResolvedAgent &agent = sys_.agents[i];
      std::vector<bool> has_out(agent.locations.size(), false);
      for (const auto &t : agent.transitions) has_out[t.source] = true;
      for (size_t l = 0; l < agent.locations.size(); ++l)
        if (!has_out[l])
          warn("location '" + agent.locations[l] + "' of agent '" + agent.name +
                   "' has no outgoing transition (dead local state)",
               spec_.agents[i].loc);
    }
  }

  const SystemSpec &spec_;
  ValidatedSystem sys_;
  Diagnostics diags_;
};

}  // namespace

ValidateResult validate_system(const SystemSpec &spec) {
  return Validator(spec).run();
}

}  // namespace amc

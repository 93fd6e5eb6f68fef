#pragma once

// Name resolution and static validation of a parsed SystemSpec. The
// ValidatedSystem is the indexed form everything downstream works on: agents,
// locations, variables and events become dense integer ids, guard and update
// expressions become resolved trees over (agent, var) pairs.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amc/ast.hpp"
#include "amc/diag.hpp"

namespace amc {

// Either an integer constant or variable `var` of agent `agent`.
struct ResolvedOperand {
  enum class Kind { constant, variable };
  Kind kind = Kind::constant;
  int value = 0;
  int agent = -1;
  int var = -1;
};

struct GuardExpr {
  enum class Kind { constant, compare, negation, conjunction, disjunction, implication };
  Kind kind = Kind::constant;
  bool value = true;
  ResolvedOperand lhs, rhs;
  CmpOp op = CmpOp::eq;
  std::vector<GuardExpr> children;

  static GuardExpr constant_true() { return GuardExpr{}; }
};

struct ResolvedUpdate {
  int var = -1;  // written variable (owned by the acting agent)
  AssignOp op = AssignOp::set;
  ResolvedOperand rhs;
};

struct ResolvedTransition {
  int source = -1;
  int dest = -1;
  int event = -1;  // global event id
  GuardExpr guard;
  std::vector<ResolvedUpdate> updates;
  int decl_index = -1;  // position in the agent's source order
};

struct VariableDecl {
  std::string name;
  int lo = 0, hi = 0, init = 0;
  int domain_size() const { return hi - lo + 1; }
};

struct ResolvedAgent {
  std::string name;
  std::vector<std::string> locations;  // id -> name, first-appearance order
  int initial_location = -1;
  std::vector<VariableDecl> vars;
  std::vector<ResolvedTransition> transitions;  // source order
  std::vector<int> alphabet;                    // Evt_i, ascending global ids

  int location_index(std::string_view name) const;
  int var_index(std::string_view name) const;
};

class ValidatedSystem {
public:
  std::string name;
  std::vector<ResolvedAgent> agents;
  std::vector<std::string> events;             // global id -> name
  std::vector<std::vector<int>> event_agents;  // Agent(e), ascending agent ids
  Diagnostics warnings;

  int agent_index(std::string_view name) const;  // -1 if unknown
  int event_index(std::string_view name) const;  // -1 if unknown
  bool is_shared(int event) const { return event_agents[event].size() > 1; }
};

struct ValidateResult {
  std::optional<ValidatedSystem> system;
  Diagnostics diags;  // errors and warnings, in source order
  bool ok() const { return system.has_value(); }
};

// Checks, per the data model's invariants:
//  - at least one agent; nonempty location and event sets per agent
//  - initial location exists; variable initial values lie within bounds
//  - guard/update variable references resolve to the owning agent, or to a
//    peer only when the transition's event is shared with that peer
//  - per (location, event), guards of distinct transitions are pairwise
//    mutually exclusive (checked by exhaustive enumeration of the read
//    variables' finite domain product)
// Idempotent and side-effect free; locations with no outgoing transition are
// reported as warnings, not errors.
ValidateResult validate_system(const SystemSpec &spec);

// Agent(e): every agent whose alphabet mentions the event. Throws
// ContractError for an unknown event id.
const std::vector<int> &agents_of(const ValidatedSystem &sys, int event);

}  // namespace amc

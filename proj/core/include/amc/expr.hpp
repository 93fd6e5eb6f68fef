#pragma once

// Evaluation of resolved guards and update lists against a snapshot of the
// participating agents' valuations.

#include <span>

#include "amc/validate.hpp"

namespace amc {

// Read-only view of the pre-state valuations of the agents participating in
// a transition. values[agent] points at that agent's decoded variable array
// (index = variable id) or is null for non-participants, which validated
// expressions never reference.
struct SnapshotContext {
  std::span<const int *const> values;

  int value(int agent, int var) const {
    const int *vals = values[static_cast<size_t>(agent)];
    if (vals == nullptr) throw ContractError("unresolved variable context");
    return vals[var];
  }
};

int eval_operand(const ResolvedOperand &op, const SnapshotContext &ctx);

// Standard integer comparison and boolean connective semantics; an absent
// guard is represented by a constant-true GuardExpr.
bool eval_guard(const GuardExpr &guard, const SnapshotContext &ctx);

// Applies updates left to right into own_values (the acting agent's valuation,
// already copied from the pre-state). Right-hand sides read peer variables
// from the pre-state snapshot; reads of the agent's own variables see the
// effect of earlier updates in the same list. Every write saturates at the
// variable's declared bounds, so the result is always in-domain.
void apply_updates(std::span<const ResolvedUpdate> updates, int self_agent,
                   const SnapshotContext &ctx,
                   std::span<const VariableDecl> own_decls,
                   std::span<int> own_values);

}  // namespace amc

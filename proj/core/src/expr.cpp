#include "amc/expr.hpp"

#include <algorithm>

namespace amc {

int eval_operand(const ResolvedOperand &op, const SnapshotContext &ctx) {
  if (op.kind == ResolvedOperand::Kind::constant) return op.value;
  return ctx.value(op.agent, op.var);
}

bool eval_guard(const GuardExpr &guard, const SnapshotContext &ctx) {
  switch (guard.kind) {
    case GuardExpr::Kind::constant:
      return guard.value;
    case GuardExpr::Kind::compare:
      return cmp_holds(guard.op, eval_operand(guard.lhs, ctx),
                       eval_operand(guard.rhs, ctx));
    case GuardExpr::Kind::negation:
      return !eval_guard(guard.children[0], ctx);
    case GuardExpr::Kind::conjunction:
      return eval_guard(guard.children[0], ctx) &&
             eval_guard(guard.children[1], ctx);
    case GuardExpr::Kind::disjunction:
      return eval_guard(guard.children[0], ctx) ||
             eval_guard(guard.children[1], ctx);
    case GuardExpr::Kind::implication:
      return !eval_guard(guard.children[0], ctx) ||
             eval_guard(guard.children[1], ctx);
  }
  return false;
}

void apply_updates(std::span<const ResolvedUpdate> updates, int self_agent,
                   const SnapshotContext &ctx,
                   std::span<const VariableDecl> own_decls,
                   std::span<int> own_values) {
  for (const ResolvedUpdate &u : updates) {
    int rhs;
    if (u.rhs.kind == ResolvedOperand::Kind::constant) {
      rhs = u.rhs.value;
    } else if (u.rhs.agent == self_agent) {
      rhs = own_values[u.rhs.var];  // sees earlier updates in this list
    } else {
      rhs = ctx.value(u.rhs.agent, u.rhs.var);  // peer pre-state snapshot
    }
    long next = own_values[u.var];
    switch (u.op) {
      case AssignOp::set: next = rhs; break;
      case AssignOp::add: next += rhs; break;
      case AssignOp::sub: next -= rhs; break;
    }
    const VariableDecl &decl = own_decls[u.var];
    next = std::clamp(next, static_cast<long>(decl.lo),
                      static_cast<long>(decl.hi));
    own_values[u.var] = static_cast<int>(next);
  }
}

}  // namespace amc

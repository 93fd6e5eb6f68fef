#include "amc/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "amc/parser.hpp"

namespace amc {

std::string to_string(const Atom &atom, const ValidatedSystem &sys) {
  const ResolvedAgent &agent = sys.agents[atom.agent];
  if (atom.kind == Atom::Kind::location)
    return agent.name + "@" + agent.locations[atom.location];
  return agent.name + "." + agent.vars[atom.var].name + " " +
         to_string(atom.op) + " " + std::to_string(atom.constant);
}

namespace {

struct Binder {
  const ValidatedSystem &sys;
  Diagnostics &diags;
  bool failed = false;

  void error(const std::string &msg, SourceLoc loc) {
    diags.push_back({Severity::error, msg, loc});
    failed = true;
  }

  std::optional<int> atom_operand_const(const Operand &op) {
    if (op.kind == Operand::Kind::constant) return static_cast<int>(op.value);
    return std::nullopt;
  }

  StatePredicate bind(const BoolExpr &e) {
    StatePredicate p;
    switch (e.kind) {
      case BoolExpr::Kind::constant:
        p.kind = StatePredicate::Kind::constant;
        p.value = e.value;
        return p;
      case BoolExpr::Kind::location_atom: {
        Atom a;
        a.kind = Atom::Kind::location;
        a.agent = sys.agent_index(e.agent);
        if (a.agent < 0) {
          error("unknown agent '" + e.agent + "'", e.loc);
          return p;
        }
        a.location = sys.agents[a.agent].location_index(e.name);
        if (a.location < 0) {
          error("unknown location '" + e.name + "' of agent '" + e.agent + "'",
                e.loc);
          return p;
        }
        return StatePredicate::of(a);
      }
      case BoolExpr::Kind::named_atom:
        error("unresolved proposition '" + e.name +
                  "' (atoms are Agent@loc or Agent.var <op> const)",
              e.loc);
        return p;
      case BoolExpr::Kind::compare: {
        // One side must be Agent.var, the other a constant; a var-on-the-right
        // comparison is normalized by flipping the operator.
        Atom a;
        a.kind = Atom::Kind::comparison;
        const Operand *var_side = nullptr;
        bool flipped = false;
        if (e.lhs.kind == Operand::Kind::peer_var &&
            e.rhs.kind == Operand::Kind::constant) {
          var_side = &e.lhs;
          a.constant = static_cast<int>(e.rhs.value);
          a.op = e.op;
        } else if (e.rhs.kind == Operand::Kind::peer_var &&
                   e.lhs.kind == Operand::Kind::constant) {
          var_side = &e.rhs;
          a.constant = static_cast<int>(e.lhs.value);
          flipped = true;
        } else {
          error("malformed atom: expected Agent.var <op> constant", e.loc);
          return p;
        }
        if (flipped) {
          switch (e.op) {
            case CmpOp::lt: a.op = CmpOp::gt; break;
            case CmpOp::le: a.op = CmpOp::ge; break;
            case CmpOp::gt: a.op = CmpOp::lt; break;
            case CmpOp::ge: a.op = CmpOp::le; break;
            default: a.op = e.op; break;
          }
        }
        a.agent = sys.agent_index(var_side->agent);
        if (a.agent < 0) {
          error("unknown agent '" + var_side->agent + "'", e.loc);
          return p;
        }
        a.var = sys.agents[a.agent].var_index(var_side->var);
        if (a.var < 0) {
          error("unknown variable '" + var_side->var + "' of agent '" +
                    var_side->agent + "'",
                e.loc);
          return p;
        }
        return StatePredicate::of(a);
      }
      case BoolExpr::Kind::negation: {
        p.kind = StatePredicate::Kind::negation;
        p.children.push_back(bind(*e.a));
        return p;
      }
      case BoolExpr::Kind::conjunction:
      case BoolExpr::Kind::disjunction:
      case BoolExpr::Kind::implication: {
        p.kind = e.kind == BoolExpr::Kind::conjunction
                     ? StatePredicate::Kind::conjunction
                 : e.kind == BoolExpr::Kind::disjunction
                     ? StatePredicate::Kind::disjunction
                     : StatePredicate::Kind::implication;
        p.children.push_back(bind(*e.a));
        p.children.push_back(bind(*e.b));
        return p;
      }
    }
    return p;
  }
};

}  // namespace

ClassifyResult classify(const FormulaAst &ast, const ValidatedSystem &sys) {
  ClassifyResult result;
  Binder binder{sys, result.diags};
  FlatFormula f;
  f.text = pretty_print(ast);

  std::set<int> coalition;
  for (const auto &name : ast.coalition) {
    int idx = sys.agent_index(name);
    if (idx < 0) {
      binder.error("unknown coalition agent '" + name + "'", ast.loc);
      continue;
    }
    coalition.insert(idx);
  }
  f.coalition.assign(coalition.begin(), coalition.end());

  switch (ast.op) {
    case TemporalOp::next_op:
    case TemporalOp::globally:
      f.op = ast.op;
      f.lhs = binder.bind(*ast.lhs);
      break;
    case TemporalOp::finally_op:
      // F p == true U p
      f.op = TemporalOp::until;
      f.lhs = StatePredicate::constant_true();
      f.rhs = binder.bind(*ast.lhs);
      break;
    case TemporalOp::until:
      f.op = TemporalOp::until;
      f.lhs = binder.bind(*ast.lhs);
      f.rhs = binder.bind(*ast.rhs);
      break;
  }
  if (!binder.failed) result.formula = std::move(f);
  return result;
}

namespace {

void collect_ast_atoms(const BoolExpr &e, std::set<std::string> &out) {
  switch (e.kind) {
    case BoolExpr::Kind::location_atom:
      out.insert(e.agent + "@" + e.name);
      break;
    case BoolExpr::Kind::named_atom:
      out.insert(e.name);
      break;
    case BoolExpr::Kind::compare:
      out.insert(to_string(e));
      break;
    case BoolExpr::Kind::negation:
      collect_ast_atoms(*e.a, out);
      break;
    case BoolExpr::Kind::conjunction:
    case BoolExpr::Kind::disjunction:
    case BoolExpr::Kind::implication:
      collect_ast_atoms(*e.a, out);
      collect_ast_atoms(*e.b, out);
      break;
    case BoolExpr::Kind::constant:
      break;
  }
}

void collect_pred_atoms(const StatePredicate &p, std::vector<Atom> &out) {
  if (p.kind == StatePredicate::Kind::atom) {
    if (std::find(out.begin(), out.end(), p.atom) == out.end())
      out.push_back(p.atom);
    return;
  }
  for (const auto &c : p.children) collect_pred_atoms(c, out);
}

}  // namespace

std::vector<std::string> atoms_of(const FormulaAst &ast) {
  std::set<std::string> atoms;
  if (ast.lhs) collect_ast_atoms(*ast.lhs, atoms);
  if (ast.rhs) collect_ast_atoms(*ast.rhs, atoms);
  return {atoms.begin(), atoms.end()};
}

std::vector<Atom> atoms_of(const FlatFormula &formula) {
  std::vector<Atom> atoms;
  collect_pred_atoms(formula.lhs, atoms);
  collect_pred_atoms(formula.rhs, atoms);
  return atoms;
}

bool eval_atom(const GlobalModel &model, uint32_t state, const Atom &atom) {
  if (atom.agent < 0 || atom.agent >= model.agent_count())
    throw ContractError("unresolved atom");
  uint32_t local = model.local_of(state, atom.agent);
  const ConcreteAgent &agent = model.agent(atom.agent);
  if (atom.kind == Atom::Kind::location)
    return agent.location_of(local) == atom.location;
  return cmp_holds(atom.op, agent.value_of(local, atom.var), atom.constant);
}

bool eval_state_pred(const GlobalModel &model, uint32_t state,
                     const StatePredicate &pred) {
  switch (pred.kind) {
    case StatePredicate::Kind::constant:
      return pred.value;
    case StatePredicate::Kind::atom:
      return eval_atom(model, state, pred.atom);
    case StatePredicate::Kind::negation:
      return !eval_state_pred(model, state, pred.children[0]);
    case StatePredicate::Kind::conjunction:
      return eval_state_pred(model, state, pred.children[0]) &&
             eval_state_pred(model, state, pred.children[1]);
    case StatePredicate::Kind::disjunction:
      return eval_state_pred(model, state, pred.children[0]) ||
             eval_state_pred(model, state, pred.children[1]);
    case StatePredicate::Kind::implication:
      return !eval_state_pred(model, state, pred.children[0]) ||
             eval_state_pred(model, state, pred.children[1]);
  }
  return false;
}

std::optional<Atom> parse_atom(std::string_view text, const ValidatedSystem &sys,
                               Diagnostics *diags) {
  Diagnostics local;
  Diagnostics &sink = diags ? *diags : local;
  auto parsed = parse_formula("<<>> G (" + std::string(text) + ")");
  if (!parsed.ok()) {
    sink.insert(sink.end(), parsed.diags.begin(), parsed.diags.end());
    return std::nullopt;
  }
  ClassifyResult bound = classify(*parsed.formula, sys);
  if (!bound.ok()) {
    sink.insert(sink.end(), bound.diags.begin(), bound.diags.end());
    return std::nullopt;
  }
  auto atoms = atoms_of(*bound.formula);
  if (atoms.size() != 1) {
    sink.push_back({Severity::error, "expected a single atom", {}});
    return std::nullopt;
  }
  return atoms[0];
}

}  // namespace amc

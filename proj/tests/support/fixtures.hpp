#pragma once

// Shared fixtures and build helpers for the test suites.

#include <memory>
#include <stdexcept>
#include <string>

#include "amc/formula.hpp"
#include "amc/model.hpp"
#include "amc/parser.hpp"
#include "amc/validate.hpp"

namespace amc::test {

// Two agents synchronizing on e, then private self-loops: 2 states, 3 edges.
inline constexpr const char *T2_SRC = R"(
agent A { init a0; a0 -[e]-> a1; a1 -[x]-> a1; }
agent B { init b0; b0 -[e]-> b1; b1 -[y]-> b1; }
)";

// One agent with a binary branch into absorbing self-loops: 3 states, 4 edges.
inline constexpr const char *T3_SRC = R"(
agent C {
  init c0;
  c0 -[g]-> c1;
  c0 -[b]-> c2;
  c1 -[l1]-> c1;
  c2 -[l2]-> c2;
}
)";

// Environment branches privately, then offers exactly one of two shared
// events; the decider must pick one uniformly at d0 and loses the other
// branch to a deadlock. Minimal witness separating lower/exact/upper.
inline constexpr const char *TGAP_SRC = R"(
agent E {
  init e0;
  e0 -[u]-> e1;
  e0 -[v]-> e2;
  e1 -[lft]-> e3;
  e2 -[rgt]-> e4;
  e3 -[idle_e]-> e3;
  e4 -[idle_f]-> e4;
}
agent D {
  init d0;
  d0 -[lft]-> dl;
  d0 -[rgt]-> dr;
  dl -[idle_l]-> dl;
  dr -[idle_r]-> dr;
}
)";

inline constexpr const char *TGAP_DONE = "D@dl || D@dr";

inline SystemSpec must_parse(const std::string &text) {
  auto r = parse_system(text);
  if (!r.ok()) {
    std::string msg = "fixture does not parse:";
    for (const auto &d : r.diags) msg += "\n  " + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*r.spec);
}

inline ValidatedSystem must_validate(const std::string &text) {
  auto spec = must_parse(text);
  auto v = validate_system(spec);
  if (!v.ok()) {
    std::string msg = "fixture does not validate:";
    for (const auto &d : v.diags) msg += "\n  " + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*v.system);
}

// A model together with the system it references (the model keeps pointers
// into the system, so the pair must move as one).
struct BuiltModel {
  std::unique_ptr<ValidatedSystem> sys;
  std::unique_ptr<GlobalModel> model;
  const GlobalModel &operator*() const { return *model; }
};

inline BuiltModel must_build(const std::string &text,
                             const ComposeOptions &options = {}) {
  BuiltModel b;
  b.sys = std::make_unique<ValidatedSystem>(must_validate(text));
  b.model = std::make_unique<GlobalModel>(compose(*b.sys, options));
  return b;
}

inline FlatFormula must_formula(const std::string &text,
                                const ValidatedSystem &sys) {
  auto parsed = parse_formula(text);
  if (!parsed.ok()) throw std::runtime_error("formula does not parse: " + text);
  auto classified = classify(*parsed.formula, sys);
  if (!classified.ok())
    throw std::runtime_error("formula does not bind: " + text);
  return std::move(*classified.formula);
}

}  // namespace amc::test

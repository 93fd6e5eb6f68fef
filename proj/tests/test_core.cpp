// amas_core: template expansion, guard evaluation, saturating updates.

#include <doctest.h>

#include <set>

#include "amc/agent.hpp"
#include "amc/expr.hpp"
#include "amc/scenarios.hpp"
#include "support/fixtures.hpp"
#include "support/random_gen.hpp"

using namespace amc;

namespace {

// Context over one or two agents' raw valuation arrays.
struct Ctx {
  std::vector<const int *> ptrs;
  SnapshotContext view() { return {ptrs}; }
};

GuardExpr cmp(int agent, int var, CmpOp op, int constant) {
  GuardExpr g;
  g.kind = GuardExpr::Kind::compare;
  g.lhs = {ResolvedOperand::Kind::variable, 0, agent, var};
  g.op = op;
  g.rhs = {ResolvedOperand::Kind::constant, constant, -1, -1};
  return g;
}

GuardExpr conj(GuardExpr a, GuardExpr b) {
  GuardExpr g;
  g.kind = GuardExpr::Kind::conjunction;
  g.children.push_back(std::move(a));
  g.children.push_back(std::move(b));
  return g;
}

}  // namespace

TEST_CASE("honest-agent expansion: candidate space and initial state") {
  ScenarioConfig cfg;
  cfg.agents = 2;
  auto sys = test::must_validate(scenario_source(cfg));
  const ResolvedAgent &ai1 = sys.agents[0];
  CHECK(ai1.locations.size() == 9);
  CHECK(ai1.vars.size() == 5);
  ConcreteAgent agent(ai1);
  // 9 locations x 3*5*4*4*4 valuations
  CHECK(agent.candidate_count() == 9 * 3 * 5 * 4 * 4 * 4);
  CHECK(agent.location_of(agent.initial_local()) == ai1.initial_location);
  std::vector<int> vals(ai1.vars.size());
  agent.decode_values(agent.initial_local(), vals);
  for (size_t v = 0; v < vals.size(); ++v) CHECK(vals[v] == ai1.vars[v].init);
}

TEST_CASE("agent with no variables has one local state per location") {
  auto sys = test::must_validate("agent A { init a0; a0 -[e]-> a1; a1 -[f]-> a0; }");
  ConcreteAgent agent(sys.agents[0]);
  CHECK(agent.candidate_count() == 2);
}

TEST_CASE("mitm agent: one location, four candidates, four-event protocol") {
  ScenarioConfig cfg;
  cfg.agents = 3;
  cfg.attack = AttackKind::mitm;
  auto sys = test::must_validate(scenario_source(cfg));
  int mim = sys.agent_index("Mim");
  REQUIRE(mim >= 0);
  ConcreteAgent agent(sys.agents[mim]);
  CHECK(sys.agents[mim].locations.size() == 1);
  CHECK(agent.candidate_count() == 4);  // stored quality 0..3
  CHECK(agent.protocol(0).size() == 4);
  CHECK(agents_of(sys, sys.event_index("share_1_with_mim")) ==
        std::vector<int>{0, mim});
}

TEST_CASE("expansion cap rejects oversized domains") {
  auto sys = test::must_validate(
      "agent A { init a0; var x: 0..999 = 0; var y: 0..999 = 0;"
      "  a0 -[e when x < 1]-> a0; }");
  CHECK_THROWS_AS(ConcreteAgent(sys.agents[0], 1000), CapacityError);
}

TEST_CASE("protocol depends on the location only") {
  auto sys = test::must_validate(
      "agent A { init a0; var x: 0..1 = 0;"
      "  a0 -[e when x == 0]-> a1; a0 -[f]-> a0; a1 -[g]-> a1; }");
  ConcreteAgent agent(sys.agents[0]);
  // Both x-valuations of a0 offer {e, f}; the guard limits firing, not
  // membership.
  CHECK(agent.protocol(0).size() == 2);
  CHECK(agent.protocol(1).size() == 1);
}

TEST_CASE("eval_guard: conjunction of threshold comparisons") {
  // info < 1 && mqual > 0 over one agent's valuation [info, mqual].
  int vals[] = {0, 2};
  const int *ptr = vals;
  SnapshotContext ctx{{&ptr, 1}};
  auto g = conj(cmp(0, 0, CmpOp::lt, 1), cmp(0, 1, CmpOp::gt, 0));
  CHECK(eval_guard(g, ctx));
  vals[0] = 1;
  CHECK(!eval_guard(g, ctx));
}

TEST_CASE("absent guard defaults to true") {
  SnapshotContext ctx{{}};
  CHECK(eval_guard(GuardExpr::constant_true(), ctx));
}

TEST_CASE("eval_guard boundary: data<2 with data=2") {
  int vals[] = {2};
  const int *ptr = vals;
  SnapshotContext ctx{{&ptr, 1}};
  CHECK(!eval_guard(cmp(0, 0, CmpOp::lt, 2), ctx));
}

TEST_CASE("apply_updates: additive update saturates at the upper bound") {
  std::vector<VariableDecl> decls = {{"info", 0, 4, 0}, {"completion", 0, 3, 0}};
  std::vector<int> own = {1, 3};
  const int *ptr = own.data();
  SnapshotContext ctx{{&ptr, 1}};
  ResolvedUpdate u;
  u.var = 0;
  u.op = AssignOp::add;
  u.rhs = {ResolvedOperand::Kind::variable, 0, 0, 1};  // info += completion
  apply_updates({&u, 1}, 0, ctx, decls, own);
  CHECK(own[0] == 4);  // 1 + 3 within 0..4

  own = {3, 3};  // 3 + 3 clamps to 4
  apply_updates({&u, 1}, 0, ctx, decls, own);
  CHECK(own[0] == 4);
}

TEST_CASE("apply_updates: subtraction saturates at the lower bound") {
  std::vector<VariableDecl> decls = {{"mqual", 0, 3, 0}};
  std::vector<int> own = {0};
  SnapshotContext ctx{{}};
  ResolvedUpdate u;
  u.var = 0;
  u.op = AssignOp::sub;
  u.rhs = {ResolvedOperand::Kind::constant, 1, -1, -1};
  apply_updates({&u, 1}, 0, ctx, decls, own);
  CHECK(own[0] == 0);
}

TEST_CASE("apply_updates: peer copy reads the firing-time snapshot") {
  std::vector<VariableDecl> decls = {{"mqual", 0, 3, 0}};
  std::vector<int> own = {1};
  int peer_vals[] = {2};
  const int *ptrs[] = {own.data(), peer_vals};
  SnapshotContext ctx{{ptrs, 2}};
  ResolvedUpdate u;
  u.var = 0;
  u.op = AssignOp::set;
  u.rhs = {ResolvedOperand::Kind::variable, 0, 1, 0};  // mqual = peer.mqual
  apply_updates({&u, 1}, 0, ctx, decls, own);
  CHECK(own[0] == 2);
}

TEST_CASE("apply_updates: left-to-right, own reads see earlier writes") {
  std::vector<VariableDecl> decls = {{"a", 0, 9, 0}, {"b", 0, 9, 0}};
  std::vector<int> own = {1, 0};
  const int *ptr = own.data();
  SnapshotContext ctx{{&ptr, 1}};
  ResolvedUpdate us[2];
  us[0] = {0, AssignOp::add, {ResolvedOperand::Kind::constant, 3, -1, -1}};
  us[1] = {1, AssignOp::set, {ResolvedOperand::Kind::variable, 0, 0, 0}};
  apply_updates({us, 2}, 0, ctx, decls, own);
  CHECK(own[0] == 4);
  CHECK(own[1] == 4);  // b = a after a += 3
}

TEST_CASE("updates never leave the declared domain (random inputs)") {
  test::RandomSource rnd(7);
  std::vector<VariableDecl> decls = {{"x", -2, 3, 0}, {"y", 0, 1, 0}};
  for (int i = 0; i < 2000; ++i) {
    std::vector<int> own = {rnd.range(-2, 3), rnd.range(0, 1)};
    const int *ptr = own.data();
    SnapshotContext ctx{{&ptr, 1}};
    ResolvedUpdate u;
    u.var = rnd.range(0, 1);
    u.op = static_cast<AssignOp>(rnd.range(0, 2));
    if (rnd.chance(0.5))
      u.rhs = {ResolvedOperand::Kind::constant, rnd.range(-5, 5), -1, -1};
    else
      u.rhs = {ResolvedOperand::Kind::variable, 0, 0, rnd.range(0, 1)};
    apply_updates({&u, 1}, 0, ctx, decls, own);
    CHECK(own[0] >= -2);
    CHECK(own[0] <= 3);
    CHECK(own[1] >= 0);
    CHECK(own[1] <= 1);
  }
}

TEST_CASE("local proposition namespaces are disjoint across agents") {
  auto sys = test::must_validate(test::TGAP_SRC);
  // Location indicators are agent-qualified; their rendered names must be
  // globally unique.
  std::set<std::string> names;
  size_t total = 0;
  for (const auto &agent : sys.agents)
    for (const auto &loc : agent.locations) {
      names.insert(agent.name + "@" + loc);
      ++total;
    }
  CHECK(names.size() == total);
}

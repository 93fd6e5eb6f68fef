// scenario generator: structure, formula families, ring invariants.

#include <doctest.h>

#include <map>
#include <set>

#include "amc/model.hpp"
#include "amc/parser.hpp"
#include "amc/scenarios.hpp"
#include "support/fixtures.hpp"

using namespace amc;

namespace {

const AgentDecl &agent_named(const SystemSpec &spec, const std::string &name) {
  for (const auto &a : spec.agents)
    if (a.name == name) return a;
  throw std::runtime_error("no agent " + name);
}

int count_event(const AgentDecl &agent, const std::string &prefix) {
  int n = 0;
  for (const auto &t : agent.transitions)
    if (t.event.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("honest ring n=2: agents and share events") {
  ScenarioConfig cfg;
  cfg.agents = 2;
  auto spec = gen_honest(cfg);
  REQUIRE(spec.agents.size() == 2);
  CHECK(spec.agents[0].name == "AI1");
  CHECK(spec.agents[1].name == "AI2");
  std::string text = scenario_source(cfg);
  CHECK(text.find("share_1_with_2") != std::string::npos);
  CHECK(text.find("share_2_with_1") != std::string::npos);
}

TEST_CASE("undertrained branch decrements quality exactly as specified") {
  ScenarioConfig cfg;
  cfg.agents = 2;
  auto spec = gen_honest(cfg);
  const AgentDecl &ai1 = agent_named(spec, "AI1");
  bool found = false;
  for (const auto &t : ai1.transitions) {
    if (t.event != "stop_learning_1" || !t.guard) continue;
    // Looking for: info < 1 && mqual > 0 -> mstatus = 1, mqual -= 1.
    std::string guard = to_string(*t.guard);
    if (guard != "info < 1 && mqual > 0") continue;
    found = true;
    REQUIRE(t.updates.size() == 3);
    CHECK(t.updates[0].var == "info");
    CHECK(t.updates[1].var == "mstatus");
    CHECK(t.updates[1].rhs.value == 1);
    CHECK(t.updates[2].var == "mqual");
    CHECK(t.updates[2].op == AssignOp::sub);
    CHECK(t.updates[2].rhs.value == 1);
  }
  CHECK(found);
}

TEST_CASE("generated specs validate with zero errors across the grid") {
  for (auto attack : {AttackKind::none, AttackKind::impersonator, AttackKind::mitm})
    for (auto receive : {ReceiveSemantics::copy, ReceiveSemantics::max_merge,
                         ReceiveSemantics::accept_reject})
      for (int n : {2, 3, 4}) {
        if (attack == AttackKind::mitm && n < 3) continue;
        ScenarioConfig cfg;
        cfg.agents = n;
        cfg.attack = attack;
        cfg.receive = receive;
        auto v = gen_system(cfg);
        REQUIRE(v.ok());
        CHECK(!has_errors(v.diags));
      }
}

TEST_CASE("impersonator replaces the highest-ID agent and skips training") {
  ScenarioConfig cfg;
  cfg.agents = 3;
  cfg.attack = AttackKind::impersonator;
  auto spec = gen_attack(cfg);
  REQUIRE(spec.agents.size() == 3);
  CHECK(spec.agents[0].name == "AI1");
  CHECK(spec.agents[1].name == "AI2");
  CHECK(spec.agents[2].name == "Imp");
  const AgentDecl &imp = agent_named(spec, "Imp");
  CHECK(count_event(imp, "gather") == 0);
  CHECK(count_event(imp, "keep_learning") == 0);
  CHECK(count_event(imp, "share_2_with_3") == 1);  // receives from AI2
  CHECK(count_event(imp, "share_3_with_1") == 1);  // sends to AI1
}

TEST_CASE("impersonator fake-set family covers the configured range") {
  ScenarioConfig cfg;
  cfg.agents = 2;
  cfg.attack = AttackKind::impersonator;
  auto spec = gen_attack(cfg);
  CHECK(count_event(agent_named(spec, "Imp"), "fake_quality_") == 4);
  cfg.fake = FakeRange::low_only;
  spec = gen_attack(cfg);
  CHECK(count_event(agent_named(spec, "Imp"), "fake_quality_") == 1);
  cfg.fake = FakeRange::high_only;
  spec = gen_attack(cfg);
  const AgentDecl &imp = agent_named(spec, "Imp");
  CHECK(count_event(imp, "fake_quality_") == 1);
  CHECK(count_event(imp, "fake_quality_3") == 1);
}

TEST_CASE("mitm system: extra agent with a four-event single location") {
  ScenarioConfig cfg;
  cfg.agents = 3;
  cfg.attack = AttackKind::mitm;
  auto spec = gen_attack(cfg);
  REQUIRE(spec.agents.size() == 3);
  CHECK(spec.agents[2].name == "Mim");
  const AgentDecl &mim = agent_named(spec, "Mim");
  CHECK(mim.transitions.size() >= 4);
  std::set<std::string> events;
  std::set<std::string> locations;
  for (const auto &t : mim.transitions) {
    events.insert(t.event);
    locations.insert(t.source);
    locations.insert(t.dest);
  }
  CHECK(events == std::set<std::string>{"share_1_with_mim", "share_2_with_mim",
                                        "share_mim_with_1", "share_mim_with_2"});
  CHECK(locations.size() == 1);
}

TEST_CASE("mitm with four agents interposes only the 1->2 link") {
  ScenarioConfig cfg;
  cfg.agents = 4;
  cfg.attack = AttackKind::mitm;
  auto spec = gen_attack(cfg);
  const AgentDecl &mim = agent_named(spec, "Mim");
  std::set<std::string> events;
  for (const auto &t : mim.transitions) events.insert(t.event);
  CHECK(events == std::set<std::string>{"share_1_with_mim", "share_mim_with_2"});
}

TEST_CASE("mitm requires at least three agents") {
  ScenarioConfig cfg;
  cfg.agents = 2;
  cfg.attack = AttackKind::mitm;
  CHECK(has_errors(cfg.check()));
  CHECK_THROWS_AS(gen_attack(cfg), ContractError);
}

TEST_CASE("phi shapes: coalition, operator, expansion") {
  ScenarioConfig cfg;
  cfg.agents = 3;
  cfg.attack = AttackKind::impersonator;
  CHECK(phi_text(cfg, PhiVariant::all_of) ==
        "<<Imp>> G ((AI1@q8 && AI2@q8) -> "
        "(AI1.mqual <= 1 && AI2.mqual <= 1 && Imp.mqual <= 1))");
  CHECK(phi_text(cfg, PhiVariant::any_of) ==
        "<<Imp>> G ((AI1@q8 && AI2@q8) -> "
        "(AI1.mqual <= 1 || AI2.mqual <= 1 || Imp.mqual <= 1))");
  cfg.shared = SharedReading::any_at_end;
  CHECK(phi_text(cfg, PhiVariant::all_of).find("AI1@q8 || AI2@q8") !=
        std::string::npos);
}

TEST_CASE("phi arity: two quality atoms at n=2") {
  ScenarioConfig cfg;
  cfg.agents = 2;
  cfg.attack = AttackKind::impersonator;
  auto ast = phi(cfg, PhiVariant::all_of);
  auto atoms = atoms_of(ast);
  int quality_atoms = 0;
  for (const auto &a : atoms)
    if (a.find(".mqual") != std::string::npos) ++quality_atoms;
  CHECK(quality_atoms == 2);
}

TEST_CASE("phi requires an intruder") {
  ScenarioConfig cfg;
  cfg.agents = 2;
  CHECK_THROWS_AS(phi_text(cfg, PhiVariant::all_of), ContractError);
}

TEST_CASE("phi binds against its own generated system") {
  for (auto attack : {AttackKind::impersonator, AttackKind::mitm}) {
    ScenarioConfig cfg;
    cfg.agents = 3;
    cfg.attack = attack;
    auto v = gen_system(cfg);
    REQUIRE(v.ok());
    for (auto variant : {PhiVariant::all_of, PhiVariant::any_of}) {
      auto ast = phi(cfg, variant);
      CHECK(classify(ast, *v.system).ok());
    }
  }
}

TEST_CASE("ring closure: sends and receives pair up") {
  for (int n : {2, 3, 4, 5}) {
    ScenarioConfig cfg;
    cfg.agents = n;
    auto spec = gen_honest(cfg);
    std::multiset<std::string> sends, receives;
    for (int i = 1; i <= n; ++i) {
      const AgentDecl &agent = agent_named(spec, "AI" + std::to_string(i));
      int next = i == n ? 1 : i + 1;
      int prev = i == 1 ? n : i - 1;
      std::string send =
          "share_" + std::to_string(i) + "_with_" + std::to_string(next);
      std::string recv =
          "share_" + std::to_string(prev) + "_with_" + std::to_string(i);
      CHECK(count_event(agent, send) >= 1);
      CHECK(count_event(agent, recv) >= 1);
      sends.insert(send);
      receives.insert(recv);
    }
    CHECK(sends == receives);
  }
}

TEST_CASE("honest rings are deadlock-free for n in {2,3}") {
  for (int n : {2, 3}) {
    ScenarioConfig cfg;
    cfg.agents = n;
    auto v = gen_system(cfg);
    REQUIRE(v.ok());
    GlobalModel m = compose(*v.system);
    for (uint32_t s = 0; s < m.state_count(); ++s)
      CHECK(!m.out_edges(s).empty());
    CHECK(m.warnings().empty());
  }
}

TEST_CASE("state counts grow strictly with the ring size") {
  uint64_t last = 0;
  for (int n : {2, 3}) {
    ScenarioConfig cfg;
    cfg.agents = n;
    auto v = gen_system(cfg);
    REQUIRE(v.ok());
    GlobalModel m = compose(*v.system);
    CHECK(m.state_count() > last);
    last = m.state_count();
  }
}

TEST_CASE("generated source self-parses and re-validates") {
  ScenarioConfig cfg;
  cfg.agents = 3;
  cfg.attack = AttackKind::mitm;
  std::string text = scenario_source(cfg);
  auto parsed = parse_system(text);
  REQUIRE(parsed.ok());
  CHECK(!has_errors(validate_system(*parsed.spec).diags));
  // Emitted text round-trips through the pretty printer.
  CHECK(structurally_equal(*parsed.spec,
                           *parse_system(pretty_print(*parsed.spec)).spec));
}

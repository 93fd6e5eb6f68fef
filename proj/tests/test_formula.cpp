// logic: atoms, state predicates, classification.

#include <doctest.h>

#include "amc/formula.hpp"
#include "support/fixtures.hpp"
#include "support/random_gen.hpp"

using namespace amc;
using test::must_build;
using test::must_formula;

TEST_CASE("eval_state_pred: direct comparison") {
  auto built = must_build(
      "agent AI1 { init q0; var mqual: 0..3 = 0; q0 -[tick]-> q0; }");
  auto f = must_formula("<<>> G (AI1.mqual <= 1)", (*built).system());
  CHECK(eval_state_pred(*built, 0, f.lhs));
}

TEST_CASE("eval_state_pred: vacuous implication") {
  auto built = must_build(test::T3_SRC);
  // C@c1 is false at the initial state, so anything follows from it.
  auto f = must_formula("<<>> G (C@c1 -> C@c2)", (*built).system());
  CHECK(eval_state_pred(*built, (*built).initial_state(), f.lhs));
}

TEST_CASE("eval_state_pred: failed quality conjunction at the shared point") {
  // Both honest agents sit at q8 with qualities (2, 0); k = 1.
  auto built = must_build(
      "agent AI1 { init q8; var mqual: 0..3 = 2; q8 -[w1]-> q8; }"
      "agent AI2 { init q8; var mqual: 0..3 = 0; q8 -[w2]-> q8; }");
  auto f = must_formula(
      "<<>> G ((AI1@q8 && AI2@q8) -> (AI1.mqual <= 1 && AI2.mqual <= 1))",
      (*built).system());
  CHECK(!eval_state_pred(*built, 0, f.lhs));  // AI1.mqual = 2 breaks it
}

TEST_CASE("classify: G keeps its operator, coalition resolves") {
  auto sys = test::must_validate(test::T3_SRC);
  auto f = must_formula("<<C>> G (C@c1)", sys);
  CHECK(f.op == TemporalOp::globally);
  CHECK(f.coalition == std::vector<int>{0});
}

TEST_CASE("classify rewrites F to true U p") {
  auto sys = test::must_validate(test::T3_SRC);
  auto f = must_formula("<<C>> F (C@c1)", sys);
  CHECK(f.op == TemporalOp::until);
  CHECK(f.lhs.kind == StatePredicate::Kind::constant);
  CHECK(f.lhs.value);
  CHECK(f.rhs.kind == StatePredicate::Kind::atom);
}

TEST_CASE("classify rejects unresolved names") {
  auto sys = test::must_validate(test::T3_SRC);
  auto parsed = parse_formula("<<C>> G (shared)");
  REQUIRE(parsed.ok());
  auto r = classify(*parsed.formula, sys);
  CHECK(!r.ok());
  CHECK(r.diags[0].message.find("unresolved proposition") != std::string::npos);
}

TEST_CASE("classify rejects unknown coalition agents and atoms") {
  auto sys = test::must_validate(test::T3_SRC);
  auto parsed = parse_formula("<<Z>> G (C@c1)");
  REQUIRE(parsed.ok());
  CHECK(!classify(*parsed.formula, sys).ok());
  parsed = parse_formula("<<C>> G (C@nowhere)");
  REQUIRE(parsed.ok());
  CHECK(!classify(*parsed.formula, sys).ok());
  parsed = parse_formula("<<C>> G (C.nope <= 1)");
  REQUIRE(parsed.ok());
  CHECK(!classify(*parsed.formula, sys).ok());
}

TEST_CASE("atoms_of counts the syntactic closure") {
  auto phi2_n3 = parse_formula(
      "<<Imp>> G (shared -> (AI1.mqual <= 1 || AI2.mqual <= 1 || Imp.mqual <= 1))");
  REQUIRE(phi2_n3.ok());
  CHECK(atoms_of(*phi2_n3.formula).size() == 4);  // shared + three qualities

  auto phi1_n2 = parse_formula(
      "<<Imp>> G (shared -> (AI1.mqual <= 1 && Imp.mqual <= 1))");
  REQUIRE(phi1_n2.ok());
  CHECK(atoms_of(*phi1_n2.formula).size() == 3);

  auto trivial = parse_formula("<<>> G true");
  REQUIRE(trivial.ok());
  CHECK(atoms_of(*trivial.formula).empty());
}

TEST_CASE("atoms_of on classified formulas deduplicates") {
  auto sys = test::must_validate(test::T3_SRC);
  auto f = must_formula("<<C>> G ((C@c1 || C@c2) && C@c1)", sys);
  CHECK(atoms_of(f).size() == 2);
}

TEST_CASE("boolean laws hold under evaluation (randomized)") {
  auto built = must_build(test::TGAP_SRC);
  const GlobalModel &m = *built;
  test::RandomSource rnd(99);
  for (int i = 0; i < 200; ++i) {
    std::string a = test::random_pred_text(rnd, m.system(), 2);
    std::string b = test::random_pred_text(rnd, m.system(), 2);
    auto de_morgan_l =
        must_formula("<<>> G (!((" + a + ") && (" + b + ")))", m.system());
    auto de_morgan_r =
        must_formula("<<>> G ((!(" + a + ")) || (!(" + b + ")))", m.system());
    auto double_neg = must_formula("<<>> G (!(!(" + a + ")))", m.system());
    auto plain = must_formula("<<>> G (" + a + ")", m.system());
    for (uint32_t s = 0; s < m.state_count(); ++s) {
      CHECK(eval_state_pred(m, s, de_morgan_l.lhs) ==
            eval_state_pred(m, s, de_morgan_r.lhs));
      CHECK(eval_state_pred(m, s, double_neg.lhs) ==
            eval_state_pred(m, s, plain.lhs));
    }
  }
}

TEST_CASE("classify of a reprinted formula is a fixpoint") {
  auto sys = test::must_validate(test::TGAP_SRC);
  for (const char *text :
       {"<<D>> F (D@dl || D@dr)", "<<D,E>> G (E@e0 -> !(D@dl))",
        "<<>> (E@e0) U (D@dl)"}) {
    auto first = must_formula(text, sys);
    auto second = must_formula(first.text, sys);
    CHECK(first.text == second.text);
    CHECK(first.op == second.op);
    CHECK(first.coalition == second.coalition);
    CHECK(atoms_of(first) == atoms_of(second));
  }
}

TEST_CASE("comparison atoms normalize constants on the left") {
  auto sys = test::must_validate(
      "agent A { init a0; var x: 0..3 = 0; a0 -[e]-> a0; }");
  auto f1 = must_formula("<<>> G (A.x <= 1)", sys);
  auto f2 = must_formula("<<>> G (1 >= A.x)", sys);
  CHECK(atoms_of(f1) == atoms_of(f2));
}

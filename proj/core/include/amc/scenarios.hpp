#pragma once

// Generator for the gossip-learning ring scenarios: n agents training local
// models in gather/learn/share phases and exchanging them around a ring,
// optionally with one compromised agent (impersonator) or an interposed
// man-in-the-middle, plus the two quality-threshold formula families.

#include <string>
#include <vector>

#include "amc/ast.hpp"
#include "amc/diag.hpp"
#include "amc/validate.hpp"

namespace amc {

enum class AttackKind { none, impersonator, mitm };
enum class ReceiveSemantics { copy, max_merge, accept_reject };
enum class SharedReading { all_at_end, any_at_end };
enum class FakeRange { low_only, high_only, full };

const char *to_string(AttackKind a);
const char *to_string(ReceiveSemantics r);
const char *to_string(SharedReading s);
const char *to_string(FakeRange f);

struct ScenarioConfig {
  int agents = 2;  // total count, including the intruder when attack != none
  AttackKind attack = AttackKind::none;
  int quality_threshold = 1;  // k
  int data_lo = 0, data_hi = 2;
  int info_lo = 0, info_hi = 4;
  int quality_lo = 0, quality_hi = 3;
  ReceiveSemantics receive = ReceiveSemantics::max_merge;
  SharedReading shared = SharedReading::all_at_end;
  FakeRange fake = FakeRange::full;
  bool keep_direct_link = true;  // mitm: honest agents may still bypass Mim

  // n >= 2, k within quality bounds, mitm needs n >= 3.
  Diagnostics check() const;
};

enum class PhiVariant { all_of, any_of };  // phi1 / phi2

// The .amas source of the configured system (honest ring, or ring plus
// attacker). Generated text parses and validates with zero errors.
std::string scenario_source(const ScenarioConfig &config);

// Honest-only ring (ignores config.attack). Throws ContractError when the
// config is invalid.
SystemSpec gen_honest(const ScenarioConfig &config);

// Full system for config.attack in {impersonator, mitm}.
SystemSpec gen_attack(const ScenarioConfig &config);

// Parse + validate of scenario_source(config).
ValidateResult gen_system(const ScenarioConfig &config);

// phi(all_of):  <<Intruder>> G (shared_p -> AND_i quality_i <= k)
// phi(any_of):  same with OR. The quality conjuncts range over every agent
// carrying a model-quality variable, intruder included; shared_p expands to
// end-of-sharing location atoms over the honest agents per config.shared.
// Requires an attack (there is no intruder to quantify otherwise).
std::string phi_text(const ScenarioConfig &config, PhiVariant variant);
FormulaAst phi(const ScenarioConfig &config, PhiVariant variant);

// Name of the intruder agent for the configured attack.
std::string intruder_name(const ScenarioConfig &config);

}  // namespace amc

#pragma once

// The three decision engines for flat strategic formulas under imperfect
// information, and their combination:
//
//   verify_upper  perfect-information fixpoint. FALSE here refutes the
//                 formula; TRUE is inconclusive.
//   verify_lower  uniformity-constrained fixpoint with per-local-state
//                 choice commitments. TRUE here proves the formula and
//                 carries a checked witness; FALSE is inconclusive.
//   verify_exact  backtracking synthesis over uniform strategies, assigning
//                 choices lazily as local states are first encountered.
//
// Outcome paths are infinite: a strategy whose restricted subgraph can reach
// a deadlock is rejected, and a strategy with an empty outcome from the
// initial state is invalid.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amc/formula.hpp"
#include "amc/model.hpp"

namespace amc {

inline constexpr uint32_t NO_CHOICE = UINT32_MAX;

// One protocol event per coalition-agent local state. Uniform by
// construction: the choice depends on the local state alone.
struct UniformStrategy {
  std::vector<int> coalition;               // ascending agent ids
  std::vector<std::vector<uint32_t>> choice;  // [coalition pos][local id] -> event or NO_CHOICE

  static UniformStrategy empty_for(const GlobalModel &model,
                                   std::span<const int> coalition);
  int coalition_pos(int agent) const;  // -1 if not a member
  // Human-readable "Agent: local -> event" lines for assigned entries.
  std::string describe(const GlobalModel &model) const;
};

enum class VerdictValue { TRUE_, FALSE_, INCONCLUSIVE };
enum class EngineKind { lower, upper, exact, combined };

const char *to_string(VerdictValue v);
const char *to_string(EngineKind e);

struct Verdict {
  VerdictValue value = VerdictValue::INCONCLUSIVE;
  EngineKind engine = EngineKind::combined;
  std::optional<UniformStrategy> witness;  // present on TRUE from lower/exact
};

struct EngineTiming {
  EngineKind engine;
  double seconds = 0.0;
};

struct VerificationReport {
  std::string formula_text;
  Verdict verdict;
  std::vector<EngineTiming> timings;
  ModelStats stats;
};

enum class VerifyMode { auto_mode, lower, upper, exact };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::auto_mode;
  uint64_t exact_node_budget = 200'000'000;
  double timeout_seconds = 900.0;  // 15 minutes
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

// True iff the outcome of `strategy` from the initial state is nonempty,
// deadlock-free, and every outcome path satisfies the goal. The strategy must
// be protocol-respecting and total on the local states reachable under
// itself; anything else raises ContractError.
bool check_strategy(const GlobalModel &model, const UniformStrategy &strategy,
                    const FlatFormula &goal);

// Controllable preimage under perfect information: states where some
// per-global-state selection of one protocol event per coalition agent leaves
// a nonempty enabled set, all of it inside `target`.
std::vector<bool> pre_perfect(const GlobalModel &model,
                              std::span<const int> coalition,
                              const std::vector<bool> &target);

bool verify_upper(const GlobalModel &model, const FlatFormula &formula);

Verdict verify_lower(const GlobalModel &model, const FlatFormula &formula);

// Exact decision; throws BudgetError when the node budget or deadline is
// exhausted before an answer is reached.
Verdict verify_exact(const GlobalModel &model, const FlatFormula &formula,
                     uint64_t node_budget = 200'000'000,
                     Deadline deadline = {});

// Engine cascade: lower, then upper, then exact within budget; INCONCLUSIVE
// only when the budget or deadline ran out first.
VerificationReport verify(const GlobalModel &model, const FlatFormula &formula,
                          const VerifyOptions &options = {});

}  // namespace amc

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace amc {

enum class Severity { warning, error };

// 1-based position inside the input text.
struct SourceLoc {
  int line = 1;
  int column = 1;
};

struct Diagnostic {
  Severity severity = Severity::error;
  std::string message;
  SourceLoc loc;
};

using Diagnostics = std::vector<Diagnostic>;

bool has_errors(const Diagnostics &diags);

// Renders as "file:line:col: severity: message".
std::string format_diagnostic(const Diagnostic &d,
                              const std::string &filename = "<input>");

// A declared variable/location domain or the composed state space outgrew a
// configured cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Search node budget or wall-clock deadline exhausted inside an engine.
// Distinct from a FALSE verdict; callers map it to INCONCLUSIVE.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// API misuse that validation should have made impossible (unresolved atom,
// protocol-violating strategy, index out of range).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace amc

#include "amc/diag.hpp"

#include <sstream>

namespace amc {

bool has_errors(const Diagnostics &diags) {
  for (const auto &d : diags)
    if (d.severity == Severity::error) return true;
  return false;
}

std::string format_diagnostic(const Diagnostic &d, const std::string &filename) {
  std::ostringstream out;
  out << filename << ':' << d.loc.line << ':' << d.loc.column << ": "
      << (d.severity == Severity::error ? "error" : "warning") << ": "
      << d.message;
  return out.str();
}

}  // namespace amc

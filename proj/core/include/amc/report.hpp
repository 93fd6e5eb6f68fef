#pragma once

// Run reports and their serializations. Field order is stable and timing
// values are isolated in *_seconds fields so reports are byte-comparable
// after masking those.

#include <string>
#include <vector>

#include <json.hpp>

#include "amc/model.hpp"
#include "amc/verifier.hpp"

namespace amc {

struct RunResult {
  std::string formula;
  std::string verdict;  // TRUE | FALSE | INCONCLUSIVE
  std::string engine;
  double seconds = 0.0;
  std::string witness;  // empty when none
};

struct RunReport {
  std::vector<std::pair<std::string, std::string>> config;  // echo, ordered
  ModelStats stats;
  std::vector<RunResult> results;
};

enum class ReportFormat { json, csv, md };

RunResult to_run_result(const VerificationReport &report,
                        const GlobalModel &model);

nlohmann::ordered_json report_json(const RunReport &report);
std::string emit_report(const RunReport &report, ReportFormat format);

// Multi-row document (one report per bench row). The md form mirrors the
// bench table layout: #Ag | #st | #tr | Gen. | Verif. phi1 | Verif. phi2.
nlohmann::ordered_json bench_json(const std::vector<RunReport> &rows);
std::string emit_bench(const std::vector<RunReport> &rows, ReportFormat format);

// Serialized model dump (state table + edge list) with a version header.
nlohmann::ordered_json model_to_json(const GlobalModel &model);

}  // namespace amc

// cli/report: serialization formats and their consistency.

#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "amc/report.hpp"
#include "amc/verifier.hpp"
#include "support/fixtures.hpp"

using namespace amc;
using test::must_build;
using test::must_formula;

namespace {

RunReport sample_report() {
  auto built = must_build(test::T3_SRC);
  const GlobalModel &m = *built;
  auto rep = verify(m, must_formula("<<C>> G true", m.system()));
  RunReport run;
  run.config = {{"scenario", "fixture"}, {"agents", "1"}};
  run.stats = m.stats();
  run.results.push_back(to_run_result(rep, m));
  return run;
}

}  // namespace

TEST_CASE("empty run list still serializes to valid documents") {
  RunReport run;
  run.config = {{"scenario", "none"}};
  auto j = report_json(run);
  CHECK(j["schema"] == 1);
  CHECK(j["results"].is_array());
  CHECK(j["results"].empty());
  std::string csv = emit_report(run, ReportFormat::csv);
  CHECK(csv.find("states,transitions") == 0);
  CHECK(std::ranges::count(csv, '\n') == 1);  // header only
  std::string md = emit_report(run, ReportFormat::md);
  CHECK(md.find("| #st |") == 0);
}

TEST_CASE("a single G run serializes with its engine name") {
  RunReport run = sample_report();
  std::string json = emit_report(run, ReportFormat::json);
  auto parsed = nlohmann::json::parse(json);
  REQUIRE(parsed["results"].size() == 1);
  CHECK(parsed["results"][0]["engine"] == "lower");
  CHECK(parsed["results"][0]["verdict"] == "TRUE");
  std::string csv = emit_report(run, ReportFormat::csv);
  CHECK(csv.find("lower") != std::string::npos);
}

TEST_CASE("csv and json carry identical verdict multisets") {
  RunReport run = sample_report();
  // Add a second, failing run.
  auto built = must_build(test::T3_SRC);
  const GlobalModel &m = *built;
  auto rep = verify(m, must_formula("<<C>> G (C@c1)", m.system()));
  run.results.push_back(to_run_result(rep, m));

  auto j = report_json(run);
  std::multiset<std::string> json_verdicts;
  for (const auto &row : j["results"])
    json_verdicts.insert(row["verdict"].get<std::string>());

  std::multiset<std::string> csv_verdicts;
  std::istringstream csv(emit_report(run, ReportFormat::csv));
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    for (const char *v : {"TRUE", "FALSE", "INCONCLUSIVE"})
      if (line.find(std::string(",") + v + ",") != std::string::npos)
        csv_verdicts.insert(v);
  }
  CHECK(json_verdicts == csv_verdicts);
}

TEST_CASE("verdict strings are stable") {
  CHECK(std::string(to_string(VerdictValue::TRUE_)) == "TRUE");
  CHECK(std::string(to_string(VerdictValue::FALSE_)) == "FALSE");
  CHECK(std::string(to_string(VerdictValue::INCONCLUSIVE)) == "INCONCLUSIVE");
}

TEST_CASE("times render with three decimals") {
  RunReport run;
  run.stats = {10, 20, 1.23456};
  run.results.push_back({"<<>> G true", "TRUE", "lower", 0.5, ""});
  std::string csv = emit_report(run, ReportFormat::csv);
  CHECK(csv.find("1.235") != std::string::npos);
  CHECK(csv.find("0.500") != std::string::npos);
}

TEST_CASE("bench md table mirrors the scalability layout") {
  RunReport row;
  row.config = {{"scenario", "impersonator"}, {"agents", "2"}};
  row.stats = {100, 200, 0.1};
  row.results.push_back({"phi1", "FALSE", "exact", 0.01, ""});
  row.results.push_back({"phi2", "TRUE", "exact", 0.02, ""});
  std::string md = emit_bench({row}, ReportFormat::md);
  CHECK(md.find("| #Ag | #st | #tr | Gen. | Verif. phi1 | Verif. phi2 |") == 0);
  CHECK(md.find("| 2 | 100 | 200 |") != std::string::npos);
  CHECK(md.find("FALSE") != std::string::npos);
  CHECK(md.find("TRUE") != std::string::npos);
}

TEST_CASE("model dump carries a version header and full tables") {
  auto built = must_build(test::T2_SRC);
  auto j = model_to_json(*built);
  CHECK(j["schema"] == 1);
  CHECK(j["kind"] == "amas-model");
  CHECK(j["states"].size() == 2);
  CHECK(j["transitions"].size() == 3);
  CHECK(j["events"].size() == 3);
  CHECK(j["initial"] == 0);
}

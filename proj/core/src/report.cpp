#include "amc/report.hpp"

#include <iomanip>
#include <sstream>

namespace amc {

namespace {

std::string seconds_str(double s) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << s;
  return out.str();
}

std::string csv_quote(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

RunResult to_run_result(const VerificationReport &report,
                        const GlobalModel &model) {
  RunResult r;
  r.formula = report.formula_text;
  r.verdict = to_string(report.verdict.value);
  r.engine = to_string(report.verdict.engine);
  for (const auto &t : report.timings) r.seconds += t.seconds;
  if (report.verdict.witness) r.witness = report.verdict.witness->describe(model);
  return r;
}

nlohmann::ordered_json report_json(const RunReport &report) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto &[k, v] : report.config) cfg[k] = v;
  j["config"] = std::move(cfg);
  j["model"] = {{"states", report.stats.states},
                {"transitions", report.stats.transitions},
                {"gen_seconds", report.stats.gen_seconds}};
  j["results"] = nlohmann::ordered_json::array();
  for (const auto &r : report.results) {
    nlohmann::ordered_json row;
    row["formula"] = r.formula;
    row["verdict"] = r.verdict;
    row["engine"] = r.engine;
    row["seconds"] = r.seconds;
    if (!r.witness.empty()) row["witness"] = r.witness;
    j["results"].push_back(std::move(row));
  }
  return j;
}

std::string emit_report(const RunReport &report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return report_json(report).dump(2) + "\n";
    case ReportFormat::csv: {
      std::ostringstream out;
      out << "states,transitions,gen_seconds,formula,verdict,engine,seconds\n";
      for (const auto &r : report.results)
        out << report.stats.states << ',' << report.stats.transitions << ','
            << seconds_str(report.stats.gen_seconds) << ','
            << csv_quote(r.formula) << ',' << r.verdict << ',' << r.engine
            << ',' << seconds_str(r.seconds) << '\n';
      return out.str();
    }
    case ReportFormat::md: {
      std::ostringstream out;
      out << "| #st | #tr | Gen. | formula | verdict | engine | time |\n";
      out << "|---|---|---|---|---|---|---|\n";
      for (const auto &r : report.results)
        out << "| " << report.stats.states << " | " << report.stats.transitions
            << " | " << seconds_str(report.stats.gen_seconds) << " | "
            << r.formula << " | " << r.verdict << " | " << r.engine << " | "
            << seconds_str(r.seconds) << " |\n";
      return out.str();
    }
  }
  return "";
}

nlohmann::ordered_json bench_json(const std::vector<RunReport> &rows) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto &row : rows) j["rows"].push_back(report_json(row));
  return j;
}

std::string emit_bench(const std::vector<RunReport> &rows, ReportFormat format) {
  switch (format) {
    case ReportFormat::json:
      return bench_json(rows).dump(2) + "\n";
    case ReportFormat::csv: {
      std::ostringstream out;
      out << "agents,states,transitions,gen_seconds,formula,verdict,engine,"
             "seconds\n";
      for (const auto &row : rows) {
        std::string agents;
        for (const auto &[k, v] : row.config)
          if (k == "agents") agents = v;
        for (const auto &r : row.results)
          out << agents << ',' << row.stats.states << ',' << row.stats.transitions
              << ',' << seconds_str(row.stats.gen_seconds) << ','
              << csv_quote(r.formula) << ',' << r.verdict << ',' << r.engine
              << ',' << seconds_str(r.seconds) << '\n';
      }
      return out.str();
    }
    case ReportFormat::md: {
      // Mirrors the scalability table: one row per agent count.
      std::ostringstream out;
      out << "| #Ag | #st | #tr | Gen. | Verif. phi1 | Verif. phi2 |\n";
      out << "|---|---|---|---|---|---|\n";
      for (const auto &row : rows) {
        std::string agents;
        for (const auto &[k, v] : row.config)
          if (k == "agents") agents = v;
        out << "| " << agents << " | " << row.stats.states << " | "
            << row.stats.transitions << " | "
            << seconds_str(row.stats.gen_seconds) << " |";
        for (size_t i = 0; i < 2; ++i) {
          if (i < row.results.size())
            out << ' ' << seconds_str(row.results[i].seconds) << '/'
                << row.results[i].verdict << " |";
          else
            out << " - |";
        }
        out << '\n';
      }
      return out.str();
    }
  }
  return "";
}

nlohmann::ordered_json model_to_json(const GlobalModel &model) {
  const ValidatedSystem &sys = model.system();
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["kind"] = "amas-model";
  j["system"] = sys.name;
  j["agents"] = nlohmann::ordered_json::array();
  for (const auto &agent : sys.agents) {
    nlohmann::ordered_json a;
    a["name"] = agent.name;
    a["locations"] = agent.locations;
    nlohmann::ordered_json vars = nlohmann::ordered_json::array();
    for (const auto &v : agent.vars)
      vars.push_back({{"name", v.name}, {"lo", v.lo}, {"hi", v.hi}});
    a["vars"] = std::move(vars);
    j["agents"].push_back(std::move(a));
  }
  j["events"] = sys.events;
  j["initial"] = model.initial_state();
  // State table: per state, per agent, [location, values...].
  nlohmann::ordered_json states = nlohmann::ordered_json::array();
  std::vector<int> vals;
  for (uint32_t s = 0; s < model.state_count(); ++s) {
    nlohmann::ordered_json st = nlohmann::ordered_json::array();
    for (int a = 0; a < model.agent_count(); ++a) {
      const ConcreteAgent &agent = model.agent(a);
      uint32_t local = model.local_of(s, a);
      nlohmann::ordered_json comp = nlohmann::ordered_json::array();
      comp.push_back(agent.location_of(local));
      vals.resize(agent.var_count());
      agent.decode_values(local, vals);
      for (int v : vals) comp.push_back(v);
      st.push_back(std::move(comp));
    }
    states.push_back(std::move(st));
  }
  j["states"] = std::move(states);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const Edge &e : model.edges())
    edges.push_back({e.src, e.event, e.dst});
  j["transitions"] = std::move(edges);
  return j;
}

}  // namespace amc

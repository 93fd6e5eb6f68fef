// amascheck: model checker for asynchronous multi-agent systems with
// strategic-ability formulas under imperfect information, plus a generator
// for gossip-learning ring scenarios with compromised agents.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include "amc/dot.hpp"
#include "amc/formula.hpp"
#include "amc/model.hpp"
#include "amc/parser.hpp"
#include "amc/report.hpp"
#include "amc/scenarios.hpp"
#include "amc/validate.hpp"
#include "amc/verifier.hpp"

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_FAILURE_RESULT = 1;  // invalid input or --expect mismatch
constexpr int EXIT_USAGE = 2;
constexpr int EXIT_RESOURCE = 3;  // timeout or budget exhausted

struct ScenarioFlags {
  std::string attack = "none";
  int agents = 2;
  int k = 1;
  std::string semantics = "max-merge";
  std::string shared = "all";
  std::string fake = "full";
  bool no_direct_link = false;
  bool used = false;
};

void add_scenario_flags(CLI::App *cmd, ScenarioFlags &flags) {
  cmd->add_option("--scenario", flags.attack,
                  "generate a gossip-ring scenario: none, imp, mitm")
      ->check(CLI::IsMember({"none", "imp", "mitm"}));
  cmd->add_option("--agents", flags.agents,
                  "total agent count, intruder included");
  cmd->add_option("--k", flags.k, "quality threshold for phi formulas");
  cmd->add_option("--semantics", flags.semantics,
                  "model-receive semantics: copy, max-merge, accept-reject")
      ->check(CLI::IsMember({"copy", "max-merge", "accept-reject"}));
  cmd->add_option("--shared", flags.shared,
                  "round-completion reading: all, any")
      ->check(CLI::IsMember({"all", "any"}));
  cmd->add_option("--fake", flags.fake,
                  "impersonator fake-quality range: low, high, full")
      ->check(CLI::IsMember({"low", "high", "full"}));
  cmd->add_flag("--no-direct-link", flags.no_direct_link,
                "mitm: remove the direct link the intruder sits on");
}

amc::ScenarioConfig to_config(const ScenarioFlags &flags) {
  amc::ScenarioConfig cfg;
  cfg.agents = flags.agents;
  cfg.attack = flags.attack == "imp"    ? amc::AttackKind::impersonator
               : flags.attack == "mitm" ? amc::AttackKind::mitm
                                        : amc::AttackKind::none;
  cfg.quality_threshold = flags.k;
  cfg.receive = flags.semantics == "copy" ? amc::ReceiveSemantics::copy
                : flags.semantics == "accept-reject"
                    ? amc::ReceiveSemantics::accept_reject
                    : amc::ReceiveSemantics::max_merge;
  cfg.shared = flags.shared == "any" ? amc::SharedReading::any_at_end
                                     : amc::SharedReading::all_at_end;
  cfg.fake = flags.fake == "low"    ? amc::FakeRange::low_only
             : flags.fake == "high" ? amc::FakeRange::high_only
                                    : amc::FakeRange::full;
  cfg.keep_direct_link = !flags.no_direct_link;
  return cfg;
}

int print_diags(const amc::Diagnostics &diags, const std::string &filename) {
  for (const auto &d : diags)
    std::cerr << amc::format_diagnostic(d, filename) << '\n';
  return amc::has_errors(diags) ? EXIT_FAILURE_RESULT : EXIT_OK;
}

// File or generated scenario -> validated system. Prints diagnostics and
// returns nullopt on failure; sets exit_code accordingly.
std::optional<amc::ValidatedSystem> load_system(const std::string &file,
                                                const ScenarioFlags &flags,
                                                int &exit_code) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "amascheck: file not found: " << file << '\n';
      exit_code = EXIT_USAGE;
      return std::nullopt;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto parsed = amc::parse_system(buf.str());
    if (!parsed.ok()) {
      print_diags(parsed.diags, file);
      exit_code = EXIT_FAILURE_RESULT;
      return std::nullopt;
    }
    parsed.spec->name = file;
    auto validated = amc::validate_system(*parsed.spec);
    print_diags(validated.diags, file);
    if (!validated.ok()) {
      exit_code = EXIT_FAILURE_RESULT;
      return std::nullopt;
    }
    validated.system->name = file;
    return std::move(validated.system);
  }
  auto cfg = to_config(flags);
  auto diags = cfg.check();
  if (amc::has_errors(diags)) {
    print_diags(diags, "<scenario>");
    exit_code = EXIT_USAGE;
    return std::nullopt;
  }
  auto validated = amc::gen_system(cfg);
  if (!validated.ok()) {
    print_diags(validated.diags, "<scenario>");
    exit_code = EXIT_FAILURE_RESULT;
    return std::nullopt;
  }
  return std::move(validated.system);
}

void write_output(const std::string &path, const std::string &content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  out << content;
}

amc::ReportFormat parse_format(const std::string &name) {
  if (name == "csv") return amc::ReportFormat::csv;
  if (name == "md") return amc::ReportFormat::md;
  return amc::ReportFormat::json;
}

int worker_threads() {
  const char *env = std::getenv("AMASCHECK_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

std::vector<std::pair<std::string, std::string>> config_echo(
    const amc::ScenarioConfig &cfg) {
  return {{"scenario", amc::to_string(cfg.attack)},
          {"agents", std::to_string(cfg.agents)},
          {"k", std::to_string(cfg.quality_threshold)},
          {"semantics", amc::to_string(cfg.receive)},
          {"shared_p", amc::to_string(cfg.shared)},
          {"fake_range", amc::to_string(cfg.fake)}};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"model checker for asynchronous multi-agent systems"};
  app.require_subcommand(1);

  // validate
  std::string validate_file;
  auto *cmd_validate = app.add_subcommand("validate", "parse and validate a .amas file");
  cmd_validate->add_option("file", validate_file, "input .amas file")->required();

  // build
  std::string build_file, build_dump, build_emit;
  ScenarioFlags build_flags;
  uint64_t state_cap = 200'000'000;
  auto *cmd_build = app.add_subcommand("build", "compose the global model and print statistics");
  cmd_build->add_option("file", build_file, "input .amas file");
  add_scenario_flags(cmd_build, build_flags);
  cmd_build->add_option("--dump", build_dump, "write a JSON model dump to this path");
  cmd_build->add_option("--emit-amas", build_emit,
                        "write the generated scenario source to this path");
  cmd_build->add_option("--state-cap", state_cap, "abort past this many global states");

  // verify
  std::string verify_file, verify_formula, verify_mode = "auto", verify_expect;
  std::string verify_format = "json", verify_out;
  int verify_phi = 0;
  double timeout_seconds = 900.0;
  uint64_t node_budget = 200'000'000;
  ScenarioFlags verify_flags;
  auto *cmd_verify = app.add_subcommand("verify", "decide a strategic formula on a model");
  cmd_verify->add_option("file", verify_file, "input .amas file");
  add_scenario_flags(cmd_verify, verify_flags);
  cmd_verify->add_option("--formula", verify_formula, "formula text, e.g. \"<<A>> G (A@loc)\"");
  cmd_verify->add_option("--phi", verify_phi, "scenario formula family: 1 (all) or 2 (any)")
      ->check(CLI::IsMember({1, 2}));
  cmd_verify->add_option("--mode", verify_mode, "engine: auto, lower, upper, exact")
      ->check(CLI::IsMember({"auto", "lower", "upper", "exact"}));
  cmd_verify->add_option("--timeout", timeout_seconds, "seconds before giving up (default 900)");
  cmd_verify->add_option("--budget", node_budget, "exact-engine node budget");
  cmd_verify->add_option("--expect", verify_expect, "exit nonzero unless the verdict matches")
      ->check(CLI::IsMember({"true", "false"}));
  cmd_verify->add_option("--format", verify_format, "report format: json, csv, md")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  cmd_verify->add_option("--out", verify_out, "write the report here instead of stdout");

  // export-dot
  std::string dot_file, dot_out, dot_atoms;
  size_t dot_max_states = 500;
  ScenarioFlags dot_flags;
  auto *cmd_dot = app.add_subcommand("export-dot", "export the global model as a DOT digraph");
  cmd_dot->add_option("file", dot_file, "input .amas file");
  add_scenario_flags(cmd_dot, dot_flags);
  cmd_dot->add_option("--max-states", dot_max_states, "truncate past this many states (default 500)");
  cmd_dot->add_option("--atoms", dot_atoms, "comma-separated atoms to label nodes with");
  cmd_dot->add_option("--out", dot_out, "output path (default stdout)");

  // bench
  std::string bench_attack, bench_format = "md", bench_out;
  int bench_from = 2, bench_to = 3, bench_k = 1;
  double bench_timeout = 900.0;
  ScenarioFlags bench_flags;
  auto *cmd_bench = app.add_subcommand("bench", "scalability sweep over agent counts");
  cmd_bench->add_option("--attack", bench_attack, "imp or mitm")->required()
      ->check(CLI::IsMember({"imp", "mitm"}));
  cmd_bench->add_option("--agents-from", bench_from, "first agent count")->required();
  cmd_bench->add_option("--agents-to", bench_to, "last agent count")->required();
  cmd_bench->add_option("--k", bench_k, "quality threshold");
  cmd_bench->add_option("--timeout", bench_timeout, "per-formula timeout in seconds");
  cmd_bench->add_option("--semantics", bench_flags.semantics,
                        "model-receive semantics")
      ->check(CLI::IsMember({"copy", "max-merge", "accept-reject"}));
  cmd_bench->add_option("--shared", bench_flags.shared, "shared_p reading")
      ->check(CLI::IsMember({"all", "any"}));
  cmd_bench->add_option("--fake", bench_flags.fake, "impersonator fake range")
      ->check(CLI::IsMember({"low", "high", "full"}));
  cmd_bench->add_option("--format", bench_format, "table format: md, csv, json")
      ->check(CLI::IsMember({"json", "csv", "md"}));
  cmd_bench->add_option("--out", bench_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? EXIT_OK : EXIT_USAGE;
  }

  try {
    if (cmd_validate->parsed()) {
      std::ifstream in(validate_file);
      if (!in) {
        std::cerr << "amascheck: file not found: " << validate_file << '\n';
        return EXIT_USAGE;
      }
      std::stringstream buf;
      buf << in.rdbuf();
      auto parsed = amc::parse_system(buf.str());
      if (!parsed.ok()) return print_diags(parsed.diags, validate_file);
      auto validated = amc::validate_system(*parsed.spec);
      int rc = print_diags(validated.diags, validate_file);
      if (validated.ok())
        std::cout << "ok: " << parsed.spec->agents.size() << " agent(s)\n";
      return rc;
    }

    if (cmd_build->parsed()) {
      int rc = EXIT_OK;
      if (!build_emit.empty() && build_file.empty())
        write_output(build_emit, amc::scenario_source(to_config(build_flags)));
      auto sys = load_system(build_file, build_flags, rc);
      if (!sys) return rc;
      amc::ComposeOptions opts;
      opts.state_cap = state_cap;
      amc::GlobalModel model = amc::compose(*sys, opts);
      for (const auto &w : model.warnings())
        std::cerr << amc::format_diagnostic(w, sys->name) << '\n';
      amc::ModelStats stats = model.stats();
      std::cout << "states: " << stats.states
                << "\ntransitions: " << stats.transitions << "\ngen_seconds: "
                << stats.gen_seconds << '\n';
      if (!build_dump.empty())
        write_output(build_dump, amc::model_to_json(model).dump(2) + "\n");
      return EXIT_OK;
    }

    if (cmd_verify->parsed()) {
      int rc = EXIT_OK;
      auto sys = load_system(verify_file, verify_flags, rc);
      if (!sys) return rc;
      auto cfg = to_config(verify_flags);

      std::string formula_text = verify_formula;
      if (formula_text.empty()) {
        if (verify_phi == 0) {
          std::cerr << "amascheck: provide --formula or --phi\n";
          return EXIT_USAGE;
        }
        formula_text = amc::phi_text(
            cfg, verify_phi == 1 ? amc::PhiVariant::all_of
                                 : amc::PhiVariant::any_of);
      }
      auto parsed = amc::parse_formula(formula_text);
      if (!parsed.ok()) return print_diags(parsed.diags, "<formula>");
      auto classified = amc::classify(*parsed.formula, *sys);
      if (!classified.ok()) return print_diags(classified.diags, "<formula>");

      amc::GlobalModel model = amc::compose(*sys);
      amc::VerifyOptions vopts;
      vopts.mode = verify_mode == "lower"   ? amc::VerifyMode::lower
                   : verify_mode == "upper" ? amc::VerifyMode::upper
                   : verify_mode == "exact" ? amc::VerifyMode::exact
                                            : amc::VerifyMode::auto_mode;
      vopts.timeout_seconds = timeout_seconds;
      vopts.exact_node_budget = node_budget;
      amc::VerificationReport report = amc::verify(model, *classified.formula, vopts);

      std::cout << "formula: " << report.formula_text << '\n';
      std::cout << "verdict: " << amc::to_string(report.verdict.value)
                << " (engine: " << amc::to_string(report.verdict.engine) << ")\n";
      for (const auto &t : report.timings)
        std::cout << "  " << amc::to_string(t.engine) << ": " << t.seconds
                  << "s\n";
      if (report.verdict.witness) {
        std::string desc = report.verdict.witness->describe(model);
        std::cout << "witness strategy:\n";
        std::istringstream lines(desc);
        std::string line;
        while (std::getline(lines, line)) std::cout << "  " << line << '\n';
      }
      if (!verify_out.empty()) {
        amc::RunReport run;
        run.config = config_echo(cfg);
        run.stats = model.stats();
        run.results.push_back(amc::to_run_result(report, model));
        write_output(verify_out, amc::emit_report(run, parse_format(verify_format)));
      }
      if (report.verdict.value == amc::VerdictValue::INCONCLUSIVE)
        return EXIT_RESOURCE;
      if (!verify_expect.empty()) {
        bool want_true = verify_expect == "true";
        bool got_true = report.verdict.value == amc::VerdictValue::TRUE_;
        if (want_true != got_true) return EXIT_FAILURE_RESULT;
      }
      return EXIT_OK;
    }

    if (cmd_dot->parsed()) {
      int rc = EXIT_OK;
      auto sys = load_system(dot_file, dot_flags, rc);
      if (!sys) return rc;
      amc::GlobalModel model = amc::compose(*sys);
      amc::DotOptions opts;
      opts.max_states = dot_max_states;
      if (!dot_atoms.empty()) {
        std::stringstream ss(dot_atoms);
        std::string item;
        while (std::getline(ss, item, ',')) {
          amc::Diagnostics diags;
          auto atom = amc::parse_atom(item, *sys, &diags);
          if (!atom) return print_diags(diags, "<atoms>");
          opts.label_atoms.push_back(*atom);
        }
      }
      write_output(dot_out, amc::export_dot(model, opts));
      return EXIT_OK;
    }

    if (cmd_bench->parsed()) {
      bench_flags.attack = bench_attack;
      bench_flags.k = bench_k;
      std::vector<amc::RunReport> rows;
      bool all_match_pattern = true;
      for (int n = bench_from; n <= bench_to; ++n) {
        bench_flags.agents = n;
        auto cfg = to_config(bench_flags);
        auto diags = cfg.check();
        if (amc::has_errors(diags)) {
          print_diags(diags, "<scenario>");
          return EXIT_USAGE;
        }
        auto validated = amc::gen_system(cfg);
        if (!validated.ok()) return print_diags(validated.diags, "<scenario>");
        amc::GlobalModel model = amc::compose(*validated.system);

        amc::VerifyOptions vopts;
        vopts.timeout_seconds = bench_timeout;
        auto run_phi = [&](amc::PhiVariant variant) {
          auto ast = amc::phi(cfg, variant);
          auto classified = amc::classify(ast, *validated.system);
          if (!classified.ok())
            throw amc::ContractError("generated formula failed to bind");
          return amc::verify(model, *classified.formula, vopts);
        };
        amc::VerificationReport rep1, rep2;
        if (worker_threads() >= 2) {
          auto f1 = std::async(std::launch::async, run_phi, amc::PhiVariant::all_of);
          auto f2 = std::async(std::launch::async, run_phi, amc::PhiVariant::any_of);
          rep1 = f1.get();
          rep2 = f2.get();
        } else {
          rep1 = run_phi(amc::PhiVariant::all_of);
          rep2 = run_phi(amc::PhiVariant::any_of);
        }

        amc::RunReport row;
        row.config = config_echo(cfg);
        bool matches =
            rep1.verdict.value == amc::VerdictValue::FALSE_ &&
            rep2.verdict.value == amc::VerdictValue::TRUE_;
        all_match_pattern = all_match_pattern && matches;
        row.config.push_back({"phi1_false_phi2_true", matches ? "yes" : "no"});
        row.stats = model.stats();
        row.results.push_back(amc::to_run_result(rep1, model));
        row.results.push_back(amc::to_run_result(rep2, model));
        row.results[0].witness.clear();  // keep bench tables compact
        row.results[1].witness.clear();
        rows.push_back(std::move(row));
      }
      std::string doc = amc::emit_bench(rows, parse_format(bench_format));
      if (!all_match_pattern) {
        const char *note =
            "note: some rows deviate from the reference verdict pattern "
            "(phi1 FALSE, phi2 TRUE)\n";
        if (bench_format != "json") doc += std::string("\n") + note;
        std::cerr << note;
      }
      write_output(bench_out, doc);
      bool any_inconclusive = false;
      for (const auto &row : rows)
        for (const auto &r : row.results)
          if (r.verdict == "INCONCLUSIVE") any_inconclusive = true;
      return any_inconclusive ? EXIT_RESOURCE : EXIT_OK;
    }
  } catch (const amc::CapacityError &e) {
    std::cerr << "amascheck: capacity: " << e.what() << '\n';
    return EXIT_RESOURCE;
  } catch (const amc::BudgetError &e) {
    std::cerr << "amascheck: budget: " << e.what() << '\n';
    return EXIT_RESOURCE;
  } catch (const std::exception &e) {
    std::cerr << "amascheck: " << e.what() << '\n';
    return EXIT_FAILURE_RESULT;
  }
  return EXIT_OK;
}

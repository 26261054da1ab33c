// qwork command-line front end. Talks to the library only through qwork.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwork.h"

namespace {

struct Failure {
  int exit_code;
};

int exit_code_for(qw_status st) {
  switch (st) {
    case QW_OK: return 0;
    case QW_ERR_PARSE:
    case QW_ERR_VALIDATION: return 2;
    case QW_ERR_SCHEME: return 3;
    default: return 1;
  }
}

void check(qw_status st) {
  if (st == QW_OK) return;
  std::cerr << "error: " << qw_last_error() << "\n";
  if (*qw_last_error_path()) std::cerr << "  field: " << qw_last_error_path() << "\n";
  throw Failure{exit_code_for(st)};
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { qw_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using ScenarioPtr = std::unique_ptr<qw_scenario, decltype(&qw_scenario_free)>;

ScenarioPtr load(const std::string& path) {
  qw_scenario* s = nullptr;
  check(qw_scenario_load(path.c_str(), &s));
  return {s, &qw_scenario_free};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write '" << out << "'\n";
    throw Failure{1};
  }
  f << text;
}

struct Common {
  std::string out;
  std::uint64_t seed = 7;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum work distributions: schemes, audits and thermodynamic identities"};
  app.set_version_flag("--version", std::string(qw_version()));
  app.require_subcommand(1);

  // dist
  auto* dist = app.add_subcommand("dist", "Work distribution of one scheme on a scenario");
  std::string scenario_path, scheme, format = "csv", dist_out;
  std::optional<double> lambda, coupling, spread;
  std::optional<std::uint64_t> decomposition_seed;
  int ch_steps = 8;
  std::size_t decomposition_states = 0;
  dist->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  dist->add_option("--scheme", scheme,
                   "tpm, work-operator, fcs, mh, ch, state-dependent, sub-ensemble, collective, gaussian, "
                   "post-selection")
      ->required();
  dist->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  dist->add_option("--lambda", lambda, "Collective mixing parameter (default lambda_max)");
  dist->add_option("-K,--K", ch_steps, "Consistent-histories time steps");
  dist->add_option("-g,--coupling", coupling, "Pointer coupling g");
  dist->add_option("-s,--spread", spread, "Pointer spread s");
  dist->add_option("--decomposition-seed", decomposition_seed, "Sub-ensemble: random ensemble seed");
  dist->add_option("--decomposition-states", decomposition_states, "Sub-ensemble: random ensemble size");
  dist->add_option("--out", dist_out, "Output path (default stdout)");

  // audit
  auto* audit = app.add_subcommand("audit", "Check one scheme against C1-C3 on random scenarios");
  std::string audit_scheme, condition;
  std::size_t audit_dim = 2, audit_samples = 500;
  Common audit_c;
  audit->add_option("--scheme", audit_scheme, "Scheme name")->required();
  audit->add_option("--condition", condition, "C1, C2 or C3 (default all)")->check(CLI::IsMember({"C1", "C2", "C3"}));
  audit->add_option("--dim", audit_dim, "Hilbert-space dimension");
  audit->add_option("--samples", audit_samples, "Random scenarios per condition");
  audit->add_option("--seed", audit_c.seed, "Root seed");
  audit->add_option("--out", audit_c.out, "Output path (default stdout)");

  // table1
  auto* table1 = app.add_subcommand("table1", "Verdict table for every implemented scheme");
  std::size_t t1_dim = 2, t1_samples = 500;
  bool no_supplementary = false, t1_check = false;
  Common t1_c;
  table1->add_option("--dim", t1_dim, "Hilbert-space dimension");
  table1->add_option("--samples", t1_samples, "Random scenarios per condition");
  table1->add_option("--seed", t1_c.seed, "Root seed");
  table1->add_flag("--no-supplementary", no_supplementary, "Skip sub-ensemble and collective rows");
  table1->add_flag("--check", t1_check, "Exit 1 unless every row matches the expected pattern");
  table1->add_option("--out", t1_c.out, "Output path (default stdout)");

  // nogo
  auto* nogo = app.add_subcommand("nogo", "POVM forced by C1 and C2, and its first-law gap");
  std::size_t nogo_dim = 2, nogo_samples = 100;
  Common nogo_c;
  nogo->add_option("--dim", nogo_dim, "Hilbert-space dimension");
  nogo->add_option("--samples", nogo_samples, "Random scenarios for the TPM verdicts");
  nogo->add_option("--seed", nogo_c.seed, "Root seed");
  nogo->add_option("--out", nogo_c.out, "Output path (default stdout)");

  // witness
  auto* witness = app.add_subcommand("witness", "Search for a negative Margenau-Hill entry on a qubit");
  std::size_t budget = 10000;
  Common witness_c;
  witness->add_option("--budget", budget, "Maximum number of evaluations");
  witness->add_option("--seed", witness_c.seed, "Root seed");
  witness->add_option("--out", witness_c.out, "Output path (default stdout)");

  // thermo
  auto* thermo = app.add_subcommand("thermo", "Randomized checks of the thermodynamic identities");
  std::string thermo_check = "all";
  std::size_t draws = 1000;
  Common thermo_c;
  thermo_c.seed = 1;
  thermo->add_option("--check", thermo_check, "Which checks to run")->check(CLI::IsMember({"all"}));
  thermo->add_option("--draws", draws, "Random draws per check");
  thermo->add_option("--seed", thermo_c.seed, "Root seed");
  thermo->add_option("--out", thermo_c.out, "Output path (default stdout)");

  // pointer-sweep
  auto* sweep = app.add_subcommand("pointer-sweep", "Post-selection rows from strong to weak coupling");
  std::string sweep_scenario;
  std::size_t points = 8;
  Common sweep_c;
  sweep->add_option("--scenario", sweep_scenario, "Scenario JSON file (default: random coherent qubit)");
  sweep->add_option("--points", points, "Logarithmic sweep points");
  sweep->add_option("--seed", sweep_c.seed, "Seed of the default scenario");
  sweep->add_option("--out", sweep_c.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dist->parsed()) {
      auto s = load(scenario_path);
      qw_scheme_options opts;
      qw_scheme_options_init(&opts);
      opts.ch_steps = ch_steps;
      if (lambda) {
        opts.has_lambda = 1;
        opts.lambda = *lambda;
      }
      if (coupling || spread) {
        opts.has_pointer = 1;
        opts.coupling = coupling.value_or(1.0);
        opts.spread = spread.value_or(1.0);
      }
      if (decomposition_seed) {
        opts.has_decomposition_seed = 1;
        opts.decomposition_seed = *decomposition_seed;
      }
      opts.decomposition_states = decomposition_states;
      qw_distribution* d = nullptr;
      check(qw_distribution_compute(s.get(), scheme.c_str(), &opts, &d));
      std::unique_ptr<qw_distribution, decltype(&qw_distribution_free)> guard(d, &qw_distribution_free);
      OwnedString text;
      check(format == "csv" ? qw_distribution_to_csv(d, &text.p) : qw_distribution_to_json(d, &text.p));
      emit(text.str(), dist_out);
    } else if (audit->parsed()) {
      OwnedString text;
      check(qw_audit_run(audit_scheme.c_str(), condition.empty() ? nullptr : condition.c_str(), audit_dim,
                         audit_samples, audit_c.seed, &text.p));
      emit(text.str(), audit_c.out);
    } else if (table1->parsed()) {
      OwnedString text;
      check(qw_table1_run(t1_dim, t1_samples, t1_c.seed, no_supplementary ? 0 : 1, &text.p));
      emit(text.str(), t1_c.out);
      if (t1_check && !nlohmann::json::parse(text.str())["pattern_matches"].get<bool>()) {
        std::cerr << "table1: verdict pattern differs from the expected one\n";
        return 1;
      }
    } else if (nogo->parsed()) {
      OwnedString text;
      check(qw_nogo_run(nogo_dim, nogo_c.seed, nogo_samples, &text.p));
      emit(text.str(), nogo_c.out);
    } else if (witness->parsed()) {
      OwnedString text;
      check(qw_witness_run(budget, witness_c.seed, &text.p));
      emit(text.str(), witness_c.out);
    } else if (thermo->parsed()) {
      OwnedString text;
      int passed = 0;
      check(qw_thermo_run(thermo_c.seed, draws, &text.p, &passed));
      emit(text.str(), thermo_c.out);
      if (!passed) {
        std::cerr << "thermo: at least one identity check failed\n";
        return 1;
      }
    } else if (sweep->parsed()) {
      qw_scenario* raw = nullptr;
      if (sweep_scenario.empty())
        check(qw_scenario_random(2, sweep_c.seed, 1, 0, &raw));
      else
        check(qw_scenario_load(sweep_scenario.c_str(), &raw));
      ScenarioPtr s(raw, &qw_scenario_free);
      OwnedString text;
      check(qw_pointer_sweep(s.get(), points, &text.p));
      emit(text.str(), sweep_c.out);
    }
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return 0;
}

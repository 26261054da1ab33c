#include "report.hpp"

#include <cstdio>

#include "errors.hpp"
#include "tolerances.hpp"

namespace qwork::report {

json metadata(std::optional<std::uint64_t> seed) {
  json m;
  m["tool"] = "qwork";
  m["version"] = std::string(kVersion);
  if (seed) m["seed"] = *seed;
  m["tolerances"] = {
      {"satisfied", tol::kAuditSatisfied},
      {"violation_floor", tol::kAuditViolationFloor},
      {"degeneracy_gap", tol::kDegeneracyGap},
      {"work_merge", tol::kWorkMerge},
      {"normalization", tol::kNormalization},
      {"povm_positivity", tol::kPovmPositivity},
      {"povm_completeness", tol::kPovmCompleteness},
      {"povm_not_linear", tol::kPovmNotLinear},
      {"fcs_imaginary_residue", tol::kFcsImaginaryResidue},
      {"lambda_bisection", tol::kLambdaBisection},
      {"pointer_strong", tol::kPointerStrong},
      {"pointer_weak", tol::kPointerWeak},
      {"pointer_limit", tol::kPointerLimitTolerance},
      {"trajectory_cap", tol::kTrajectoryCap},
  };
  return m;
}

std::string distribution_csv(const WorkDistribution& d) {
  std::string out = "work,weight\n";
  char buf[64];
  for (const auto& a : d.atoms) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a.work, a.weight);
    out += buf;
  }
  return out;
}

json distribution_json(const WorkDistribution& d) {
  json j;
  j["scheme_id"] = std::string(scheme_name(d.scheme));
  j["is_quasi"] = d.is_quasi;
  json atoms = json::array();
  for (const auto& a : d.atoms) atoms.push_back({{"work", a.work}, {"weight", a.weight}});
  j["atoms"] = std::move(atoms);
  j["mean"] = d.mean();
  if (!d.notes.empty()) j["notes"] = d.notes;
  return j;
}

WorkDistribution distribution_from_json(const json& j) {
  try {
    WorkDistribution d;
    const auto id = scheme_from_name(j.at("scheme_id").get<std::string>());
    if (!id) throw ParseError("unknown scheme_id", "scheme_id");
    d.scheme = *id;
    d.is_quasi = j.at("is_quasi").get<bool>();
    for (const auto& a : j.at("atoms")) d.atoms.push_back({a.at("work").get<double>(), a.at("weight").get<double>()});
    if (j.contains("notes")) d.notes = j["notes"].get<std::vector<std::string>>();
    return d;
  } catch (const json::exception& e) {
    throw ParseError(e.what(), "atoms");
  }
}

json scenario_json(const Scenario& s) { return json::parse(serialize_scenario(s)); }

json verdict_json(std::string_view scheme, const ConditionVerdict& v) {
  json j;
  j["scheme"] = std::string(scheme);
  j["condition"] = std::string(condition_name(v.condition));
  j["status"] = std::string(status_name(v.status));
  j["max_violation"] = v.max_violation;
  j["samples"] = v.samples;
  if (!v.failure_mode.empty()) j["failure_mode"] = v.failure_mode;
  if (!v.regimes.empty()) {
    json regimes = json::array();
    for (const auto& r : v.regimes)
      regimes.push_back({{"regime", r.regime}, {"max_violation", r.max_violation}, {"within_limit", r.within_limit}});
    j["regimes"] = std::move(regimes);
  }
  if (v.witness) j["witness_scenario"] = scenario_json(*v.witness);
  if (v.mixing) j["witness_mixing"] = {{"rho2", json_io::matrix_to_json(v.mixing->rho2)}, {"lambda", v.mixing->lambda}};
  if (!v.notes.empty()) j["notes"] = v.notes;
  return j;
}

namespace {

json row_json(const Table1Row& row) {
  json j;
  j["scheme"] = row.scheme;
  j["C1"] = std::string(status_name(row.c1.status));
  j["C2"] = std::string(status_name(row.c2.status));
  j["C3"] = std::string(status_name(row.c3.status));
  if (row.out_of_scope) {
    j["out_of_scope"] = true;
  } else {
    j["verdicts"] = {verdict_json(row.scheme, row.c1), verdict_json(row.scheme, row.c2),
                     verdict_json(row.scheme, row.c3)};
    if (row.id) {
      if (const auto expected = expected_table1_pattern(*row.id)) {
        const bool match = (*expected)[0] == row.c1.status && (*expected)[1] == row.c2.status &&
                           (*expected)[2] == row.c3.status;
        j["expected"] = {std::string(status_name((*expected)[0])), std::string(status_name((*expected)[1])),
                         std::string(status_name((*expected)[2]))};
        j["matches_expected"] = match;
      }
    }
  }
  if (!row.notes.empty()) j["notes"] = row.notes;
  return j;
}

}  // namespace

json table1_json(const Table1Report& r) {
  json j;
  j["metadata"] = metadata(r.config.seed);
  j["dim"] = r.config.dim;
  j["samples"] = r.config.samples;
  json rows = json::array();
  bool all_match = true;
  for (const auto& row : r.rows) {
    rows.push_back(row_json(row));
    if (rows.back().contains("matches_expected") && !rows.back()["matches_expected"].get<bool>()) all_match = false;
  }
  j["rows"] = std::move(rows);
  j["pattern_matches"] = all_match;
  if (!r.supplementary.empty()) {
    json sup = json::array();
    for (const auto& row : r.supplementary) sup.push_back(row_json(row));
    j["supplementary"] = std::move(sup);
  }
  if (r.collective_adapted) j["collective_adapted"] = collective_adapted_json(*r.collective_adapted);
  j["seconds"] = r.seconds;
  return j;
}

json nogo_json(const NogoReport& r) {
  json j;
  j["metadata"] = metadata(r.seed);
  j["dim"] = r.dim;
  j["forced_povm_vs_tpm"] = r.povm_vs_tpm;
  j["off_diagonal_weight"] = r.off_diagonal_weight;
  j["diagonal_c2_residual"] = r.diagonal_c2_residual;
  j["hadamard_c3_gap"] = r.hadamard_c3_gap;
  j["random_instance"] = scenario_json(r.random_instance);
  j["hadamard_instance"] = scenario_json(r.hadamard_instance);
  j["tpm_verdicts"] = {verdict_json("tpm", r.tpm_c1), verdict_json("tpm", r.tpm_c2), verdict_json("tpm", r.tpm_c3)};
  return j;
}

json collective_adapted_json(const CollectiveAdaptedReport& r) {
  return {{"dim", r.dim},
          {"samples", r.samples},
          {"min_povm_eigenvalue", r.min_povm_eigenvalue},
          {"max_completeness_defect", r.max_completeness_defect},
          {"max_c2_distance", r.max_c2_distance},
          {"improved", r.improved},
          {"tied", r.tied},
          {"worse", r.worse},
          {"strict_expected", r.strict_expected},
          {"strict_observed", r.strict_observed},
          {"mean_lambda", r.mean_lambda},
          {"passed", r.passed()}};
}

json witness_json(const std::optional<ContextualityWitness>& w, std::size_t budget) {
  json j;
  j["budget"] = budget;
  j["found"] = w.has_value();
  if (w) {
    j["label"] = w->label;
    j["k"] = w->k;
    j["m"] = w->m;
    j["min_quasiprobability"] = w->value;
    j["evaluations"] = w->evaluations;
    j["scenario"] = scenario_json(w->scenario);
  }
  return j;
}

json thermo_json(const std::vector<ThermoCheck>& checks) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"draws", c.draws}, {"worst", c.worst}, {"tolerance", c.tolerance},
                   {"passed", c.passed}});
    all = all && c.passed;
  }
  return {{"checks", std::move(arr)}, {"passed", all}};
}

json pointer_sweep_json(const PointerSweep& sweep) {
  json arr = json::array();
  for (const auto& p : sweep.points)
    arr.push_back({{"width", p.width},
                   {"coupling", p.coupling},
                   {"distance_tpm", p.distance_tpm},
                   {"distance_mh", p.distance_mh}});
  return {{"points", std::move(arr)}, {"monotone", sweep.monotone}};
}

}  // namespace qwork::report

#include "qwork.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>

#include "audit.hpp"
#include "errors.hpp"
#include "evaluate.hpp"
#include "report.hpp"

struct qw_scenario {
  qwork::Scenario value;
};

struct qw_distribution {
  qwork::WorkDistribution value;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_code;
thread_local std::string g_path;

void set_error(std::string message, std::string code, std::string path = {}) {
  g_error = std::move(message);
  g_code = std::move(code);
  g_path = std::move(path);
}

void clear_error() {
  g_error.clear();
  g_code.clear();
  g_path.clear();
}

qw_status status_for(qwork::ErrorKind kind) {
  switch (kind) {
    case qwork::ErrorKind::Parse: return QW_ERR_PARSE;
    case qwork::ErrorKind::Validation:
    case qwork::ErrorKind::DimensionMismatch: return QW_ERR_VALIDATION;
    case qwork::ErrorKind::Scheme: return QW_ERR_SCHEME;
    case qwork::ErrorKind::Argument: return QW_ERR_ARGUMENT;
    case qwork::ErrorKind::NonConvergence: return QW_ERR_INTERNAL;
  }
  return QW_ERR_INTERNAL;
}

template <class F>
qw_status guarded(F&& body) {
  clear_error();
  try {
    body();
    return QW_OK;
  } catch (const qwork::Error& e) {
    set_error(e.what(), e.code(), e.path());
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    set_error("out of memory", "Internal");
    return QW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what(), "Internal");
    return QW_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw qwork::ArgumentError(std::string(what) + " must not be NULL");
}

qwork::SchemeId scheme_id(const char* name) {
  require(name, "scheme");
  const auto id = qwork::scheme_from_name(name);
  if (!id) throw qwork::ArgumentError(std::string("unknown scheme '") + name + "'");
  return *id;
}

std::string dump(const qwork::report::json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* qw_version(void) { return qwork::report::kVersion.data(); }
const char* qw_last_error(void) { return g_error.c_str(); }
const char* qw_last_error_code(void) { return g_code.c_str(); }
const char* qw_last_error_path(void) { return g_path.c_str(); }

void qw_string_free(char* s) { std::free(s); }

qw_status qw_scenario_parse(const char* json, qw_scenario** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new qw_scenario{qwork::parse_scenario(json)};
  });
}

qw_status qw_scenario_load(const char* path, qw_scenario** out) {
  clear_error();
  if (!path || !out) {
    set_error("path and out must not be NULL", "InvalidArgument");
    return QW_ERR_ARGUMENT;
  }
  if (!std::ifstream(path)) {
    set_error(std::string("cannot open scenario file '") + path + "'", "IoError");
    return QW_ERR_IO;
  }
  return guarded([&] { *out = new qw_scenario{qwork::load_scenario_file(path)}; });
}

qw_status qw_scenario_random(size_t dim, uint64_t seed, int coherent, int protocol, qw_scenario** out) {
  return guarded([&] {
    require(out, "out");
    if (dim < 1) throw qwork::ArgumentError("dim must be positive");
    qwork::Rng rng(seed);
    auto kind = coherent ? qwork::RhoKind::Coherent : qwork::RhoKind::Diagonal;
    *out = new qw_scenario{qwork::random_audit_scenario(dim, rng, kind, protocol != 0)};
  });
}

qw_status qw_scenario_to_json(const qw_scenario* s, char** out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    *out = copy_string(qwork::serialize_scenario(s->value));
  });
}

size_t qw_scenario_dim(const qw_scenario* s) { return s ? s->value.dim() : 0; }

qw_status qw_scenario_mean_energy_change(const qw_scenario* s, double* out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    *out = qwork::scenario_mean_energy_change(s->value);
  });
}

void qw_scenario_free(qw_scenario* s) { delete s; }

void qw_scheme_options_init(qw_scheme_options* opts) {
  if (!opts) return;
  *opts = qw_scheme_options{};
  opts->ch_steps = 8;
  opts->coupling = 1.0;
  opts->spread = 1.0;
}

qw_status qw_distribution_compute(const qw_scenario* s, const char* scheme, const qw_scheme_options* opts,
                                  qw_distribution** out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    const auto id = scheme_id(scheme);
    qwork::SchemeOptions o;
    if (opts) {
      if (opts->has_lambda) o.lambda = opts->lambda;
      o.ch_steps = opts->ch_steps;
      if (opts->has_pointer) {
        o.coupling = opts->coupling;
        o.spread = opts->spread;
      }
      if (opts->has_decomposition_seed) o.decomposition_seed = opts->decomposition_seed;
      o.decomposition_states = opts->decomposition_states;
    }
    *out = new qw_distribution{qwork::evaluate(id, s->value, o)};
  });
}

size_t qw_distribution_size(const qw_distribution* d) { return d ? d->value.atoms.size() : 0; }

qw_status qw_distribution_atom(const qw_distribution* d, size_t i, double* work, double* weight) {
  return guarded([&] {
    require(d, "distribution");
    if (i >= d->value.atoms.size()) throw qwork::ArgumentError("atom index out of range");
    if (work) *work = d->value.atoms[i].work;
    if (weight) *weight = d->value.atoms[i].weight;
  });
}

int qw_distribution_is_quasi(const qw_distribution* d) { return d && d->value.is_quasi ? 1 : 0; }
double qw_distribution_mean(const qw_distribution* d) { return d ? d->value.mean() : 0.0; }

qw_status qw_distribution_to_csv(const qw_distribution* d, char** out) {
  return guarded([&] {
    require(d, "distribution");
    require(out, "out");
    *out = copy_string(qwork::report::distribution_csv(d->value));
  });
}

qw_status qw_distribution_to_json(const qw_distribution* d, char** out) {
  return guarded([&] {
    require(d, "distribution");
    require(out, "out");
    auto j = qwork::report::distribution_json(d->value);
    j["metadata"] = qwork::report::metadata();
    *out = copy_string(dump(j));
  });
}

void qw_distribution_free(qw_distribution* d) { delete d; }

qw_status qw_audit_run(const char* scheme, const char* condition, size_t dim, size_t samples, uint64_t seed,
                       char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    const auto id = scheme_id(scheme);
    if (dim < 2) throw qwork::ArgumentError("audit needs dim >= 2");
    if (samples < 1) throw qwork::ArgumentError("audit needs at least one sample");
    const qwork::AuditConfig cfg{dim, samples, seed};
    const std::string which = condition ? condition : "";
    if (!which.empty() && which != "C1" && which != "C2" && which != "C3")
      throw qwork::ArgumentError("condition must be C1, C2 or C3");
    qwork::report::json j;
    j["metadata"] = qwork::report::metadata(seed);
    j["dim"] = dim;
    j["samples"] = samples;
    auto verdicts = qwork::report::json::array();
    const std::string name(qwork::scheme_name(id));
    if (which.empty() || which == "C1") verdicts.push_back(qwork::report::verdict_json(name, qwork::check_c1(id, cfg)));
    if (which.empty() || which == "C2") verdicts.push_back(qwork::report::verdict_json(name, qwork::check_c2(id, cfg)));
    if (which.empty() || which == "C3") verdicts.push_back(qwork::report::verdict_json(name, qwork::check_c3(id, cfg)));
    j["verdicts"] = std::move(verdicts);
    *out_json = copy_string(dump(j));
  });
}

qw_status qw_table1_run(size_t dim, size_t samples, uint64_t seed, int supplementary, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    if (dim < 2) throw qwork::ArgumentError("table1 needs dim >= 2");
    if (samples < 1) throw qwork::ArgumentError("table1 needs at least one sample");
    const auto report = qwork::build_table1({dim, samples, seed}, qwork::table1_schemes(), supplementary != 0);
    *out_json = copy_string(dump(qwork::report::table1_json(report)));
  });
}

qw_status qw_nogo_run(size_t dim, uint64_t seed, size_t samples, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    if (dim < 2) throw qwork::ArgumentError("nogo needs dim >= 2");
    *out_json = copy_string(dump(qwork::report::nogo_json(qwork::demonstrate_nogo(dim, seed, samples))));
  });
}

qw_status qw_witness_run(size_t budget, uint64_t seed, char** out_json) {
  return guarded([&] {
    require(out_json, "out_json");
    if (budget < 1) throw qwork::ArgumentError("witness needs a positive budget");
    auto j = qwork::report::witness_json(qwork::contextuality_witness(budget, seed), budget);
    j["metadata"] = qwork::report::metadata(seed);
    *out_json = copy_string(dump(j));
  });
}

qw_status qw_thermo_run(uint64_t seed, size_t draws, char** out_json, int* all_passed) {
  return guarded([&] {
    require(out_json, "out_json");
    auto j = qwork::report::thermo_json(qwork::thermo_checks(seed, draws));
    j["metadata"] = qwork::report::metadata(seed);
    if (all_passed) *all_passed = j["passed"].get<bool>() ? 1 : 0;
    *out_json = copy_string(dump(j));
  });
}

qw_status qw_pointer_sweep(const qw_scenario* s, size_t points, char** out_json) {
  return guarded([&] {
    require(s, "scenario");
    require(out_json, "out_json");
    auto j = qwork::report::pointer_sweep_json(qwork::pointer_sweep(s->value, points));
    const auto limits = qwork::pointer_limits(s->value);
    j["limits"] = {{"strong_mass_error", limits.strong_mass_error},
                   {"weak_mean_gap", limits.weak_mean_gap},
                   {"weak_fcs_distance", limits.weak_fcs_distance},
                   {"strong_row_error", limits.strong_row_error},
                   {"weak_row_error", limits.weak_row_error}};
    j["metadata"] = qwork::report::metadata();
    *out_json = copy_string(dump(j));
  });
}

}  // extern "C"

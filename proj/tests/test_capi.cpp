#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <json.hpp>

#include "qwork.h"

namespace {

const char* kHadamard = R"({
  "dim": 2, "label": "hadamard",
  "H": [[[1,0],[0,0]],[[0,0],[-1,0]]],
  "H_final": [[[1,0],[0,0]],[[0,0],[-1,0]]],
  "evolution": {"type": "unitary",
                "U": [[[0.70710678118654752,0],[0.70710678118654752,0]],
                      [[0.70710678118654752,0],[-0.70710678118654752,0]]]},
  "rho": [[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]
})";

struct Text {
  char* p = nullptr;
  ~Text() { qw_string_free(p); }
};

}  // namespace

TEST_CASE("parse, compute and free through the C API") {
  qw_scenario* s = nullptr;
  REQUIRE(qw_scenario_parse(kHadamard, &s) == QW_OK);
  CHECK(qw_scenario_dim(s) == 2);
  double de = 0.0;
  CHECK(qw_scenario_mean_energy_change(s, &de) == QW_OK);
  CHECK(de == doctest::Approx(1.0).epsilon(1e-12));

  qw_distribution* d = nullptr;
  REQUIRE(qw_distribution_compute(s, "tpm", nullptr, &d) == QW_OK);
  REQUIRE(qw_distribution_size(d) == 3);
  double w = 0.0, p = 0.0;
  CHECK(qw_distribution_atom(d, 0, &w, &p) == QW_OK);
  CHECK(w == doctest::Approx(-2.0));
  CHECK(p == doctest::Approx(0.25));
  CHECK(qw_distribution_atom(d, 3, &w, &p) == QW_ERR_ARGUMENT);
  CHECK(qw_distribution_is_quasi(d) == 0);

  Text csv;
  REQUIRE(qw_distribution_to_csv(d, &csv.p) == QW_OK);
  CHECK(std::string(csv.p).rfind("work,weight\n", 0) == 0);
  Text js;
  REQUIRE(qw_distribution_to_json(d, &js.p) == QW_OK);
  CHECK(nlohmann::json::parse(js.p)["scheme_id"] == "tpm");
  qw_distribution_free(d);

  qw_scheme_options opts;
  qw_scheme_options_init(&opts);
  opts.has_lambda = 1;
  opts.lambda = 0.0;
  REQUIRE(qw_distribution_compute(s, "collective", &opts, &d) == QW_OK);
  CHECK(qw_distribution_mean(d) == doctest::Approx(0.0).epsilon(1e-12));
  qw_distribution_free(d);

  REQUIRE(qw_distribution_compute(s, "mh", nullptr, &d) == QW_OK);
  CHECK(qw_distribution_is_quasi(d) == 1);
  CHECK(qw_distribution_mean(d) == doctest::Approx(1.0).epsilon(1e-12));
  qw_distribution_free(d);
  qw_scenario_free(s);
}

TEST_CASE("status codes and error details") {
  qw_scenario* s = nullptr;
  CHECK(qw_scenario_parse("{oops", &s) == QW_ERR_PARSE);
  CHECK(std::strlen(qw_last_error()) > 0);

  std::string bad = kHadamard;
  bad.replace(bad.find("\"rho\": [[[0.5"), 13, "\"rho\": [[[0.4");
  CHECK(qw_scenario_parse(bad.c_str(), &s) == QW_ERR_VALIDATION);
  CHECK(std::string(qw_last_error_code()) == "NotDensity");
  CHECK(std::string(qw_last_error_path()) == "rho");

  CHECK(qw_scenario_load("/nonexistent/file.json", &s) == QW_ERR_IO);
  CHECK(qw_scenario_parse(nullptr, &s) == QW_ERR_ARGUMENT);

  REQUIRE(qw_scenario_parse(kHadamard, &s) == QW_OK);
  CHECK(std::strlen(qw_last_error()) == 0);
  qw_distribution* d = nullptr;
  CHECK(qw_distribution_compute(s, "ch", nullptr, &d) == QW_ERR_SCHEME);
  CHECK(qw_distribution_compute(s, "no-such-scheme", nullptr, &d) == QW_ERR_ARGUMENT);
  qw_scenario_free(s);

  qw_scenario_free(nullptr);
  qw_distribution_free(nullptr);
  qw_string_free(nullptr);
  CHECK(qw_scenario_dim(nullptr) == 0);
}

TEST_CASE("random scenarios serialize and reload") {
  qw_scenario* s = nullptr;
  REQUIRE(qw_scenario_random(3, 5, 1, 0, &s) == QW_OK);
  Text js;
  REQUIRE(qw_scenario_to_json(s, &js.p) == QW_OK);
  qw_scenario* t = nullptr;
  REQUIRE(qw_scenario_parse(js.p, &t) == QW_OK);
  double a = 0, b = 0;
  qw_scenario_mean_energy_change(s, &a);
  qw_scenario_mean_energy_change(t, &b);
  CHECK(a == b);
  qw_scenario_free(s);
  qw_scenario_free(t);
}

TEST_CASE("report entry points") {
  Text audit;
  REQUIRE(qw_audit_run("tpm", "C3", 2, 10, 7, &audit.p) == QW_OK);
  const auto j = nlohmann::json::parse(audit.p);
  CHECK(j["verdicts"].size() == 1);
  CHECK(j["verdicts"][0]["status"] == "violated");
  CHECK(qw_audit_run("tpm", "C4", 2, 10, 7, &audit.p) == QW_ERR_ARGUMENT);

  Text thermo;
  int passed = 0;
  REQUIRE(qw_thermo_run(1, 50, &thermo.p, &passed) == QW_OK);
  CHECK(passed == 1);

  Text witness;
  REQUIRE(qw_witness_run(10000, 7, &witness.p) == QW_OK);
  CHECK(nlohmann::json::parse(witness.p)["min_quasiprobability"].get<double>() < -0.05);

  Text nogo;
  REQUIRE(qw_nogo_run(2, 7, 10, &nogo.p) == QW_OK);
  CHECK(std::abs(nlohmann::json::parse(nogo.p)["hadamard_c3_gap"].get<double>() - 1.0) <= 1e-10);

  qw_scenario* s = nullptr;
  REQUIRE(qw_scenario_random(2, 3, 1, 0, &s) == QW_OK);
  Text sweep;
  REQUIRE(qw_pointer_sweep(s, 8, &sweep.p) == QW_OK);
  CHECK(nlohmann::json::parse(sweep.p)["monotone"] == true);
  qw_scenario_free(s);
  CHECK(std::string(qw_version()).size() > 0);
}

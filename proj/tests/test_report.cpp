#include <doctest.h>

#include <cstring>

#include "errors.hpp"
#include "report.hpp"
#include "schemes.hpp"
#include "support.hpp"

using namespace qwork;
using report::json;

TEST_CASE("csv output") {
  const auto single = WorkDistribution::build({{0.0, 1.0}}, SchemeId::TPM, false);
  CHECK(report::distribution_csv(single) == "work,weight\n0,1\n");
  const auto t = tpm(qtest::hadamard_plus()).distribution;
  const auto csv = report::distribution_csv(t);
  CHECK(csv.rfind("work,weight\n-2,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("json round trip keeps negative weights bit-exact") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto h = random_hermitian(2, rng), hf = random_hermitian(2, rng);
    const auto psi = random_pure(2, rng);
    const Scenario s("pure", h, hf, random_unitary(2, rng), DensityOperator(Matrix::outer(psi, psi)));
    const auto q = margenau_hill(s).distribution;
    const auto back = report::distribution_from_json(json::parse(report::distribution_json(q).dump()));
    REQUIRE(back.atoms.size() == q.atoms.size());
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
      CHECK(std::memcmp(&back.atoms[i].work, &q.atoms[i].work, sizeof(double)) == 0);
      CHECK(std::memcmp(&back.atoms[i].weight, &q.atoms[i].weight, sizeof(double)) == 0);
    }
    CHECK(back.is_quasi);
    CHECK(back.scheme == SchemeId::MargenauHill);
  }
  CHECK_THROWS_AS(report::distribution_from_json(json::parse(R"({"scheme_id": "nope"})")), ParseError);
}

TEST_CASE("metadata and verdict json") {
  const auto m = report::metadata(42);
  CHECK(m["tool"] == "qwork");
  CHECK(m["seed"] == 42);
  CHECK(m["tolerances"]["work_merge"] == 1e-9);
  CHECK_FALSE(report::metadata().contains("seed"));

  ConditionVerdict v;
  v.condition = Condition::C3_FirstLaw;
  v.status = VerdictStatus::Violated;
  v.max_violation = 1.0;
  v.samples = 3;
  v.witness = qtest::hadamard_plus();
  const auto j = report::verdict_json("tpm", v);
  CHECK(j["condition"] == "C3_FirstLaw");
  CHECK(j["status"] == "violated");
  CHECK(j["samples"] == 3);
  CHECK(parse_scenario(j["witness_scenario"].dump()).dim() == 2);
}

TEST_CASE("thermo and sweep json") {
  const auto t = report::thermo_json({{"a", 10, 1e-12, 1e-10, true}, {"b", 10, 1.0, 1e-10, false}});
  CHECK(t["passed"] == false);
  CHECK(t["checks"].size() == 2);
  PointerSweep sweep{{{0.1, 10.0, 0.0, 1.0}, {1.0, 1.0, 0.5, 0.2}}, true};
  const auto p = report::pointer_sweep_json(sweep);
  CHECK(p["monotone"] == true);
  CHECK(p["points"].size() == 2);
}

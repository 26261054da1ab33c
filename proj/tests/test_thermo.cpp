#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "thermo.hpp"

using namespace qwork;
using qtest::dagger;
using qtest::naive_product;
using qtest::naive_trace;

namespace {

const double kLn2 = std::log(2.0);

// Closed-form qubit entropy from trace and determinant.
double qubit_entropy(const Matrix& rho) {
  const double t = naive_trace(rho).real();
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, t * t / 4 - det));
  double s = 0.0;
  for (double l : {t / 2 + disc, t / 2 - disc})
    if (l > 1e-300) s -= l * std::log(l);
  return s;
}

ThermalContext qubit_context(double e, double beta) { return ThermalContext(beta, HermitianOperator(Matrix::diagonal({0.0, e}))); }

}  // namespace

TEST_CASE("free energy") {
  const auto ctx = qubit_context(1.3, 0.7);
  const double log_z = std::log(1 + std::exp(-0.7 * 1.3));
  CHECK(ctx.log_partition() == doctest::Approx(log_z).epsilon(1e-14));
  CHECK(free_energy(ctx.gibbs(), ctx) == doctest::Approx(-log_z / 0.7).epsilon(1e-12));
  CHECK(std::abs(free_energy(DensityOperator(Matrix::diagonal({1.0, 0.0})), ctx)) <= 1e-14);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto rho = random_density(2, rng);
    const double oracle = naive_trace(naive_product(ctx.hamiltonian().matrix(), rho.matrix())).real() -
                          qubit_entropy(rho.matrix()) / ctx.beta();
    CHECK(free_energy(rho, ctx) == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("maximal extractable work") {
  for (double e : {0.5, 1.0, 3.0})
    for (double beta : {0.3, 1.0, 4.0}) {
      const auto ctx = qubit_context(e, beta);
      CHECK(std::abs(max_extractable_work(ctx.gibbs(), ctx)) <= 1e-12);
      const DensityOperator ground(Matrix::diagonal({1.0, 0.0}));
      CHECK(max_extractable_work(ground, ctx) == doctest::Approx(std::log(1 + std::exp(-beta * e)) / beta).epsilon(1e-12));
    }
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 2 + t % 3;
    const ThermalContext ctx(rng.uniform(0.2, 5.0), random_hermitian(d, rng));
    const auto rho = random_density(d, rng);
    CHECK(max_extractable_work(rho, ctx) >= -1e-10);
    CHECK(max_extractable_work(rho, ctx) == doctest::Approx(free_energy_excess(rho, ctx)).epsilon(1e-9));
  }
}

TEST_CASE("asymmetry and free-energy decomposition") {
  const auto ctx = ThermalContext(1.0, HermitianOperator(qtest::pauli_z()));
  const DensityOperator plus(qtest::plus_state());
  CHECK(asymmetry(plus, ctx) == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(asymmetry_relative(plus, ctx) == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(free_energy_decomposition(plus, ctx).coherent == doctest::Approx(kLn2).epsilon(1e-12));
  const DensityOperator diag(Matrix::diagonal({0.3, 0.7}));
  CHECK(std::abs(asymmetry(diag, ctx)) <= 1e-14);
  CHECK(std::abs(free_energy_decomposition(diag, ctx).coherent) <= 1e-14);

  Rng rng(3);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 2 + t % 3;
    const ThermalContext c(rng.uniform(0.2, 5.0), random_hermitian(d, rng));
    const auto rho = random_density(d, rng);
    const auto split = free_energy_decomposition(rho, c);
    CHECK(std::abs(split.diagonal + split.coherent - free_energy_excess(rho, c)) <= 1e-10);
    CHECK(std::abs(asymmetry(rho, c) - asymmetry_relative(rho, c)) <= 1e-10);
    CHECK(asymmetry(rho, c) >= -1e-10);
  }
}

TEST_CASE("measurement work loss") {
  const auto ctx = ThermalContext(1.0, HermitianOperator(qtest::pauli_z()));
  const auto plus = measurement_work_loss(DensityOperator(qtest::plus_state()), ctx);
  CHECK(plus.loss == doctest::Approx(kLn2).epsilon(1e-12));
  CHECK(std::abs(measurement_work_loss(DensityOperator(Matrix::diagonal({0.4, 0.6})), ctx).loss) <= 1e-14);

  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 2 + t % 3;
    const ThermalContext c(rng.uniform(0.2, 5.0), random_hermitian(d, rng));
    const auto rho = random_density(d, rng);
    const auto m = measurement_work_loss(rho, c);
    CHECK(std::abs(m.loss - m.loss_from_asymmetry) <= 1e-10);
    CHECK(std::abs(m.loss - asymmetry(rho, c) / c.beta()) <= 1e-10);
  }
  const ThermalContext degenerate(1.0, HermitianOperator(Matrix::diagonal({0.0, 1.0, 1.0})));
  const auto m = measurement_work_loss(random_density(3, rng), degenerate);
  CHECK(m.degenerate);
  CHECK_FALSE(m.warnings.empty());
  CHECK(std::abs(m.loss - m.loss_from_asymmetry) <= 1e-10);
}

TEST_CASE("bipartite work identity") {
  SUBCASE("idle coupling") {
    Rng rng(5);
    const BipartiteScenario bs(HermitianOperator(qtest::pauli_z()), HermitianOperator(qtest::pauli_x()),
                               random_density(2, rng), 1.0, UnitaryOperator(Matrix::identity(4)));
    const auto r = bipartite_work_identity(bs);
    CHECK(std::abs(r.work) <= 1e-14);
    CHECK(std::abs(r.mutual_information) <= 1e-12);
    CHECK(std::abs(r.bath_athermality) <= 1e-12);
  }
  SUBCASE("random 2x2 draws") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      Rng rng(seed);
      const auto hs = random_hermitian(2, rng), hb = random_hermitian(2, rng);
      const auto rho = random_density(2, rng);
      const double beta = rng.uniform(0.2, 5.0);
      const auto u = random_unitary(4, rng);
      const BipartiteScenario bs(hs, hb, rho, beta, u);
      const auto r = bipartite_work_identity(bs);
      // Independent work: Tr(H ρ_SB) − Tr(H U ρ_SB U†).
      const Matrix h = tensor(hs.matrix(), Matrix::identity(2)) + tensor(Matrix::identity(2), hb.matrix());
      const Matrix in = tensor(rho.matrix(), ThermalContext(beta, hb).gibbs().matrix());
      const Matrix out = naive_product(naive_product(u.matrix(), in), dagger(u.matrix()));
      const double w = naive_trace(naive_product(h, in)).real() - naive_trace(naive_product(h, out)).real();
      CHECK(std::abs(r.work - w) <= 1e-10);
      CHECK(r.residual <= 1e-9);
      CHECK(r.residual_ii <= 1e-9);
      CHECK(r.work <= r.max_work + 1e-9);
      CHECK(r.bound_holds);
      CHECK(r.mutual_information >= -1e-10);
    }
  }
}

TEST_CASE("local free-energy decomposition") {
  const auto hz = HermitianOperator(qtest::pauli_z());
  SUBCASE("maximally entangled pair") {
    const double r = 1 / std::sqrt(2.0);
    const std::vector<Complex> bell{r, 0.0, 0.0, r};
    const DensityOperator x(Matrix::outer(bell, bell));
    CHECK(mutual_information(x, {2, 2}) == doctest::Approx(2 * kLn2).epsilon(1e-12));
    const auto d = local_free_energy_decomposition(x, {2, 2}, hz, hz, 1.0);
    CHECK(d.residual <= 1e-10);
    CHECK(d.mutual_information == doctest::Approx(2 * kLn2).epsilon(1e-12));
  }
  SUBCASE("product states are additive") {
    Rng rng(6);
    const auto a = random_density(2, rng), b = random_density(2, rng);
    const DensityOperator x(tensor(a.matrix(), b.matrix()));
    const auto d = local_free_energy_decomposition(x, {2, 2}, hz, hz, 2.0);
    CHECK(std::abs(d.mutual_information) <= 1e-10);
    CHECK(d.total == doctest::Approx(d.system + d.bath).epsilon(1e-10));
  }
  SUBCASE("random states") {
    Rng rng(7);
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_density(4, rng);
      const auto hs = random_hermitian(2, rng), hb = random_hermitian(2, rng);
      CHECK(local_free_energy_decomposition(x, {2, 2}, hs, hb, rng.uniform(0.2, 5.0)).residual <= 1e-10);
    }
  }
}

TEST_CASE("thermo checks all pass and are deterministic") {
  const auto a = thermo_checks(1, 200);
  const auto b = thermo_checks(1, 200);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_MESSAGE(a[i].passed, a[i].name);
    CHECK(a[i].worst == b[i].worst);
    CHECK(a[i].draws == 200);
  }
}

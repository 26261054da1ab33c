#include <doctest.h>

#include <cmath>
#include <map>

#include "errors.hpp"
#include "evaluate.hpp"
#include "schemes.hpp"
#include "support.hpp"

using namespace qwork;
using qtest::dagger;
using qtest::max_diff;
using qtest::naive_product;

namespace {

using Oracle = std::vector<WorkAtom>;

Complex bra_ket(const Matrix& vecs_a, std::size_t a, const Matrix& m, const Matrix& vecs_b, std::size_t b) {
  Complex out = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out += std::conj(vecs_a(r, a)) * m(r, c) * vecs_b(c, b);
  return out;
}

// Brute-force enumeration over (i, j) for non-degenerate spectra.
Oracle tpm_oracle(const Scenario& s) {
  const auto e = eig_hermitian(s.hamiltonian());
  const auto f = eig_hermitian(s.final_hamiltonian());
  Oracle out;
  const std::size_t d = s.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double pi = bra_ket(e.eigenvectors, i, s.rho().matrix(), e.eigenvectors, i).real();
      out.push_back({f.eigenvalues[j] - e.eigenvalues[i], pi * std::norm(bra_ket(f.eigenvectors, j, s.unitary(), e.eigenvectors, i))});
    }
  return out;
}

// Re Tr[ρ|E_k><E_k|U†|E'_m><E'_m|U] = Re <E_k|U†|E'_m><E'_m|U ρ|E_k>.
Oracle mh_oracle(const Scenario& s) {
  const auto e = eig_hermitian(s.hamiltonian());
  const auto f = eig_hermitian(s.final_hamiltonian());
  const Matrix urho = naive_product(s.unitary(), s.rho().matrix());
  Oracle out;
  for (std::size_t k = 0; k < s.dim(); ++k)
    for (std::size_t m = 0; m < s.dim(); ++m) {
      const Complex a = std::conj(bra_ket(f.eigenvectors, m, s.unitary(), e.eigenvectors, k));
      const Complex b = bra_ket(f.eigenvectors, m, urho, e.eigenvectors, k);
      out.push_back({f.eigenvalues[m] - e.eigenvalues[k], (a * b).real()});
    }
  return out;
}

double weight_near(const Oracle& o, double w) {
  double sum = 0.0;
  for (const auto& a : o)
    if (std::abs(a.work - w) <= 1e-9) sum += a.weight;
  return sum;
}

// Every atom of d matches the grouped oracle and vice versa.
double oracle_distance(const WorkDistribution& d, const Oracle& o) {
  double worst = 0.0;
  for (const auto& a : d.atoms) worst = std::max(worst, std::abs(a.weight - weight_near(o, a.work)));
  for (const auto& a : o) worst = std::max(worst, std::abs(weight_near(o, a.work) - d.weight_at(a.work)));
  return worst;
}

Scenario mixed_rho(const Scenario& s, const DensityOperator& r1, const DensityOperator& r2, double lambda) {
  return s.with_rho(DensityOperator(Complex(lambda) * r1.matrix() + Complex(1 - lambda) * r2.matrix()));
}

}  // namespace

TEST_CASE("tpm examples") {
  const auto d = tpm(qtest::hadamard_plus()).distribution;
  REQUIRE(d.atoms.size() == 3);
  CHECK(d.weight_at(-2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(d.weight_at(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(d.weight_at(2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_FALSE(d.is_quasi);

  Rng rng(1);
  const auto h = random_hermitian(3, rng);
  const auto idle = qtest::make_scenario(h.matrix(), h.matrix(), Matrix::identity(3), random_density(3, rng).matrix());
  const auto p = tpm(idle).distribution;
  REQUIRE(p.atoms.size() == 1);
  CHECK(p.weight_at(0.0) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix phase(2, 2);
  phase(0, 0) = std::polar(1.0, 0.4);
  phase(1, 1) = std::polar(1.0, -0.9);
  const auto diag = qtest::make_scenario(qtest::pauli_z(), qtest::pauli_z(), phase, Matrix::diagonal({0.3, 0.7}));
  CHECK(tpm(diag).distribution.weight_at(0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tpm, mh against brute-force oracles") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto s = qtest::random_scenario(2 + seed % 3, rng, true);
    CHECK(oracle_distance(tpm(s).distribution, tpm_oracle(s)) <= 1e-10);
    CHECK(oracle_distance(margenau_hill(s).distribution, mh_oracle(s)) <= 1e-10);
  }
}

TEST_CASE("tpm groups degenerate levels through projectors") {
  const Matrix h = Matrix::diagonal({0.0, 1.0, 1.0});
  Rng rng(2);
  const auto s = qtest::make_scenario(h, h, random_unitary(3, rng).matrix(), random_density(3, rng).matrix());
  const auto d = tpm(s).distribution;
  CHECK(d.atoms.size() <= 3);
  CHECK(d.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
  const auto p = tpm_povm(s);
  CHECK(p.valid());
  // Π_0 for the upper block commutes with the block projector.
  for (const auto& e : p.elements) {
    CHECK(std::abs(e.op(0, 1)) < 1e-12);
    CHECK(std::abs(e.op(0, 2)) < 1e-12);
  }
}

TEST_CASE("tpm povm reproduces the tpm distribution") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto s = qtest::random_scenario(2 + seed % 3, rng, true);
    const auto p = tpm_povm(s);
    CHECK(p.valid());
    const auto d = tpm(s).distribution;
    for (const auto& e : p.elements)
      CHECK(std::abs(qtest::naive_trace(naive_product(e.op, s.rho().matrix())).real() - d.weight_at(e.work)) <= 1e-10);
  }
}

TEST_CASE("work operator examples") {
  const auto r = work_operator(qtest::hadamard_plus());
  CHECK(max_diff(r.work_operator, qtest::pauli_x() - qtest::pauli_z()) < 1e-14);
  REQUIRE(r.distribution.atoms.size() == 2);
  CHECK(r.distribution.atoms[0].work == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r.distribution.atoms[1].work == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  Rng rng(3);
  const auto h = random_hermitian(2, rng);
  const auto idle = work_operator(qtest::make_scenario(h.matrix(), h.matrix(), Matrix::identity(2),
                                                       random_density(2, rng).matrix()));
  CHECK(max_diff(idle.work_operator, Matrix(2, 2)) < 1e-14);
  CHECK(idle.distribution.weight_at(0.0) == doctest::Approx(1.0));
}

TEST_CASE("condition-3 family means equal the energy change on random qubits") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const auto s = qtest::random_scenario(2, rng, true);
    const double de = scenario_mean_energy_change(s);
    CHECK(std::abs(work_operator(s).distribution.mean() - de) <= 1e-9);
    CHECK(std::abs(fcs_quasiprob(s).mean() - de) <= 1e-10);
    CHECK(std::abs(margenau_hill(s).distribution.mean() - de) <= 1e-10);
    CHECK(std::abs(state_dependent(s).mean() - de) <= 1e-9);
    CHECK(std::abs(sub_ensemble(s, PureDecomposition::eigen(s.rho())).mean() - de) <= 1e-9);
  }
}

TEST_CASE("condition-2 family reproduces tpm on diagonal states") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    Rng rng(seed);
    const auto s = qtest::random_scenario(2 + seed % 3, rng, false);
    const auto ref = tpm(s).distribution;
    CHECK(total_variation(fcs_quasiprob(s), ref) <= 1e-10);
    CHECK(total_variation(margenau_hill(s).distribution, ref) <= 1e-10);
    CHECK(total_variation(state_dependent(s), ref) <= 1e-10);
    CHECK(total_variation(collective_two_copy(s).distribution, ref) <= 1e-9);
    CHECK(total_variation(collective_two_copy(s, 0.5 * lambda_max(s)).distribution, ref) <= 1e-9);
  }
}

TEST_CASE("fcs characteristic function") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const auto s = qtest::random_scenario(2 + seed % 3, rng, true);
    const auto q = fcs_quasiprob(s);
    CHECK(std::abs(fcs_characteristic(s, 0.0) - 1.0) <= 1e-12);
    for (double u = 0.1; u <= 3.0 + 1e-12; u += 0.1) {
      Complex direct = 0.0;
      for (const auto& a : q.atoms) direct += a.weight * std::polar(1.0, u * a.work);
      CHECK(std::abs(fcs_characteristic(s, u) - direct) <= 1e-9);
    }
    const double h = 1e-4;
    const Complex derivative = (fcs_characteristic(s, h) - fcs_characteristic(s, -h)) / (2 * h);
    CHECK(std::abs(derivative - Complex(0, q.mean())) <= 1e-5);
  }
}

TEST_CASE("fcs and mh go negative on some qubit") {
  double fcs_min = 0.0, mh_min = 0.0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Rng rng(seed);
    const auto h = random_hermitian(2, rng), hf = random_hermitian(2, rng);
    const auto psi = random_pure(2, rng);
    const Matrix rho = Matrix::outer(psi, psi);
    const auto s = Scenario("pure", h, hf, random_unitary(2, rng), DensityOperator(rho));
    fcs_min = std::min(fcs_min, fcs_quasiprob(s).min_weight());
    const auto& t = margenau_hill(s).table;
    for (const auto& row : t.weights)
      for (double w : row) mh_min = std::min(mh_min, w);
  }
  CHECK(fcs_min < -1e-3);
  CHECK(mh_min < -0.05);
}

TEST_CASE("mh marginals") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto s = qtest::random_scenario(2 + seed % 3, rng, true);
    const auto t = margenau_hill(s).table;
    const auto tp = tpm(s).table;
    const auto e = eig_hermitian(s.hamiltonian());
    const auto f = eig_hermitian(s.final_hamiltonian());
    const Matrix evolved = naive_product(naive_product(s.unitary(), s.rho().matrix()), dagger(s.unitary()));
    const auto in = t.initial_marginal(), out = t.final_marginal();
    for (std::size_t k = 0; k < s.dim(); ++k) {
      CHECK(std::abs(in[k] - bra_ket(e.eigenvectors, k, s.rho().matrix(), e.eigenvectors, k).real()) <= 1e-10);
      CHECK(std::abs(out[k] - bra_ket(f.eigenvectors, k, evolved, f.eigenvectors, k).real()) <= 1e-10);
      CHECK(std::abs(tp.initial_marginal()[k] - in[k]) <= 1e-10);
    }
  }
}

TEST_CASE("linearity in rho") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const auto s = qtest::random_scenario(2 + seed % 3, rng, true);
    const auto r1 = random_density(s.dim(), rng), r2 = random_density(s.dim(), rng);
    const double lambda = rng.uniform();
    const auto a = s.with_rho(r1), b = s.with_rho(r2), m = mixed_rho(s, r1, r2, lambda);
    CHECK(total_variation(tpm(m).distribution, mix(tpm(a).distribution, tpm(b).distribution, lambda)) <= 1e-10);
    CHECK(total_variation(fcs_quasiprob(m), mix(fcs_quasiprob(a), fcs_quasiprob(b), lambda)) <= 1e-10);
    CHECK(total_variation(margenau_hill(m).distribution,
                          mix(margenau_hill(a).distribution, margenau_hill(b).distribution, lambda)) <= 1e-10);
    CHECK(total_variation(work_operator(m).distribution,
                          mix(work_operator(a).distribution, work_operator(b).distribution, lambda)) <= 1e-10);
  }
}

TEST_CASE("state-dependent scheme") {
  SUBCASE("not convex on a found qubit") {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100 && worst <= 1e-3; ++seed) {
      Rng rng(seed);
      const auto s = qtest::random_scenario(2, rng, true);
      const auto p1 = random_pure(2, rng), p2 = random_pure(2, rng);
      const DensityOperator r1(Matrix::outer(p1, p1)), r2(Matrix::outer(p2, p2));
      const auto mixed = state_dependent(mixed_rho(s, r1, r2, 0.5));
      const auto convex = mix(state_dependent(s.with_rho(r1)), state_dependent(s.with_rho(r2)), 0.5);
      worst = std::max(worst, total_variation(mixed, convex));
    }
    CHECK(worst > 1e-3);
  }
  SUBCASE("degenerate rho is flagged") {
    Rng rng(5);
    const auto s = qtest::random_scenario(3, rng, true).with_rho(DensityOperator::maximally_mixed(3));
    const auto d = state_dependent(s);
    bool flagged = false;
    for (const auto& n : d.notes) flagged |= n.find("DegenerateRho") != std::string::npos;
    CHECK(flagged);
    CHECK(std::abs(d.mean() - scenario_mean_energy_change(s)) <= 1e-9);
  }
}

TEST_CASE("sub-ensemble decompositions") {
  // I/2 as {|0>,|1>} and as {|+>,|->}; U = I, H = σ_z, H' = 2σ_z, so Ŵ = σ_z.
  const auto s = qtest::make_scenario(qtest::pauli_z(), Complex(2.0) * qtest::pauli_z(), Matrix::identity(2),
                                      Complex(0.5) * Matrix::identity(2));
  const double r = 1 / std::sqrt(2.0);
  const PureDecomposition z{{0.5, 0.5}, {{1.0, 0.0}, {0.0, 1.0}}};
  const PureDecomposition x{{0.5, 0.5}, {{r, r}, {r, -r}}};
  const auto dz = sub_ensemble(s, z), dx = sub_ensemble(s, x);
  CHECK(dz.weight_at(-1.0) == doctest::Approx(0.5));
  CHECK(dz.weight_at(1.0) == doctest::Approx(0.5));
  CHECK(dx.weight_at(0.0) == doctest::Approx(1.0));
  CHECK(total_variation(dz, dx) == doctest::Approx(1.0));
  CHECK(dz.mean() == doctest::Approx(dx.mean()));

  const PureDecomposition wrong{{1.0}, {{1.0, 0.0}}};
  CHECK_THROWS_AS(sub_ensemble(s, wrong), SchemeError);

  Rng rng(9);
  const auto c = qtest::random_scenario(3, rng, true);
  for (int t = 0; t < 20; ++t) {
    const auto dec = PureDecomposition::random(c.rho(), 3 + t % 4, rng);
    CHECK(max_diff(dec.reconstruct(), c.rho().matrix()) <= 1e-9);
    CHECK(std::abs(sub_ensemble(c, dec).mean() - scenario_mean_energy_change(c)) <= 1e-9);
  }

  const auto eigen_diag = qtest::make_scenario(qtest::pauli_z(), qtest::pauli_z(), Matrix::identity(2),
                                               Matrix::diagonal({0.2, 0.8}));
  CHECK(sub_ensemble(eigen_diag, PureDecomposition::eigen(eigen_diag.rho())).weight_at(0.0) == doctest::Approx(1.0));
}

TEST_CASE("collective two-copy measurement") {
  const auto s = qtest::hadamard_plus();
  CHECK(total_variation(collective_two_copy(s, 0.0).distribution, tpm(s).distribution) == 0.0);
  const auto c = collective_two_copy(s);
  CHECK(c.povm.valid());
  CHECK(c.povm.dim() == 4);
  const double de = scenario_mean_energy_change(s);
  CHECK(std::abs(c.distribution.mean() - de) < std::abs(tpm(s).distribution.mean() - de));

  Matrix phase(3, 3);
  phase(0, 0) = 1.0;
  phase(1, 1) = Complex(0, 1);
  phase(2, 2) = -1.0;
  Rng rng(12);
  const auto diag = qtest::make_scenario(Matrix::diagonal({0.0, 1.0, 2.5}), Matrix::diagonal({0.3, 1.2, 2.0}), phase,
                                         random_density(3, rng).matrix());
  CHECK(lambda_max(diag) == 1.0);
  CHECK(total_variation(collective_two_copy(diag, 0.8).distribution, tpm(diag).distribution) <= 1e-12);

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng r(seed);
    const auto t = qtest::random_scenario(2 + seed % 2, r, true);
    const double lm = lambda_max(t);
    CHECK(lm >= 0.0);
    CHECK(collective_min_eigenvalue(t, std::max(0.0, lm - 1e-6)) >= -1e-10);
    if (lm < 1.0) {
      CHECK(collective_min_eigenvalue(t, std::min(1.0, lm + 1e-3)) < -1e-10);
      CHECK_THROWS_AS(collective_two_copy(t, std::min(1.0, lm + 1e-3)), SchemeError);
    }
    // Gap shrinks by exactly (1 − λ).
    const double de = scenario_mean_energy_change(t);
    const double gap_tpm = tpm(t).distribution.mean() - de;
    CHECK(collective_two_copy(t).distribution.mean() - de == doctest::Approx((1 - lm) * gap_tpm).epsilon(1e-8));
  }
  const auto degenerate = qtest::make_scenario(Matrix::identity(2), qtest::pauli_z(), qtest::hadamard(),
                                               qtest::plus_state());
  CHECK_THROWS_AS(collective_two_copy(degenerate), SchemeError);
}

TEST_CASE("collective is linear in the two-copy state") {
  Rng rng(14);
  const auto s = qtest::random_scenario(2, rng, true);
  const auto c = collective_two_copy(s, 0.3);
  const auto r1 = random_density(2, rng), r2 = random_density(2, rng);
  const Matrix mixed = Complex(0.4) * tensor(r1.matrix(), r1.matrix()) + Complex(0.6) * tensor(r2.matrix(), r2.matrix());
  const auto d1 = collective_two_copy(s.with_rho(r1), 0.3).distribution;
  const auto d2 = collective_two_copy(s.with_rho(r2), 0.3).distribution;
  std::map<double, double> by_work;
  for (const auto& e : c.povm.elements)
    by_work[e.work] += qtest::naive_trace(naive_product(e.op, mixed)).real();
  for (const auto& [w, p] : by_work) CHECK(std::abs(p - (0.4 * d1.weight_at(w) + 0.6 * d2.weight_at(w))) <= 1e-10);
}

TEST_CASE("consistent histories") {
  SUBCASE("constant Hamiltonian") {
    Rng rng(21);
    const auto h = random_hermitian(2, rng).matrix();
    const auto s = qtest::ramp(h, h, random_density(2, rng).matrix(), 1.0, 16);
    const auto d = consistent_histories(s, 6);
    REQUIRE(d.atoms.size() == 1);
    CHECK(d.weight_at(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("time reversal") {
    const Matrix rho{{0.7, Complex(0.2, -0.1)}, {Complex(0.2, 0.1), 0.3}};
    const auto s = qtest::ramp(qtest::pauli_z(), qtest::pauli_x(), rho, 1.0, 256);
    const auto fwd = consistent_histories(s, 8);
    const auto rev = consistent_histories_time_reversed(s, 8);
    double worst = 0.0;
    for (const auto& a : fwd.atoms) worst = std::max(worst, std::abs(a.weight - rev.weight_at(-a.work)));
    for (const auto& a : rev.atoms) worst = std::max(worst, std::abs(a.weight - fwd.weight_at(-a.work)));
    CHECK(worst <= 1e-10);
    CHECK(fwd.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("moments converge to Tr(rho W^k)") {
    const Matrix rho{{0.7, Complex(0.2, -0.1)}, {Complex(0.2, 0.1), 0.3}};
    const auto s = qtest::ramp(qtest::pauli_z(), qtest::pauli_x(), rho, 1.0, 1024);
    const Matrix w = work_operator(s).work_operator;
    const double m1 = qtest::naive_trace(naive_product(rho, w)).real();
    const double m2 = qtest::naive_trace(naive_product(rho, naive_product(w, w))).real();
    std::vector<double> e1, e2;
    for (int k : {4, 8, 16}) {
      const auto d = consistent_histories(s, k);
      e1.push_back(std::abs(d.moment(1) - m1));
      e2.push_back(std::abs(d.moment(2) - m2));
    }
    for (std::size_t i = 1; i < e1.size(); ++i) {
      CHECK(e1[i] / e1[i - 1] <= 0.6);
      CHECK(e2[i] / e2[i - 1] <= 0.6);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(consistent_histories(qtest::hadamard_plus(), 4), SchemeError);
    const auto s = qtest::ramp(qtest::pauli_z(), qtest::pauli_x(), qtest::plus_state(), 1.0, 8);
    CHECK_THROWS_AS(consistent_histories(s, 20), SchemeError);
    CHECK_THROWS(consistent_histories(s, 0));
  }
}

TEST_CASE("evaluate dispatches every scheme and keeps normalization") {
  Rng rng(31);
  const auto coherent = qtest::random_scenario(2, rng, true);
  const auto protocol = qtest::ramp(qtest::pauli_z(), qtest::pauli_x(), qtest::plus_state(), 1.0, 32);
  for (auto id : all_schemes()) {
    const auto& s = id == SchemeId::ConsistentHistories ? protocol : coherent;
    const auto d = evaluate(id, s);
    CHECK(d.scheme == id);
    CHECK(std::abs(d.total_weight() - 1.0) <= 1e-9);
    for (std::size_t i = 1; i < d.atoms.size(); ++i) CHECK(d.atoms[i].work - d.atoms[i - 1].work > 1e-9);
    if (!d.is_quasi) CHECK(d.min_weight() >= -1e-12);
  }
}

TEST_CASE("distribution build merges, sorts and validates") {
  const auto d = WorkDistribution::build({{1.0, 0.25}, {0.0, 0.5}, {1.0 + 1e-12, 0.25}}, SchemeId::TPM, false);
  REQUIRE(d.atoms.size() == 2);
  CHECK(d.atoms[0].work == 0.0);
  CHECK(d.atoms[1].weight == doctest::Approx(0.5));
  CHECK_THROWS_AS(WorkDistribution::build({{0.0, 0.5}}, SchemeId::TPM, false), SchemeError);
  CHECK_THROWS_AS(WorkDistribution::build({{0.0, 1.5}, {1.0, -0.5}}, SchemeId::TPM, false), SchemeError);
  CHECK_NOTHROW(WorkDistribution::build({{0.0, 1.5}, {1.0, -0.5}}, SchemeId::FCS, true));
  CHECK(scheme_from_name("mh") == SchemeId::MargenauHill);
  for (auto id : all_schemes()) CHECK(scheme_from_name(scheme_name(id)) == id);
}

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "quantum.hpp"
#include "random.hpp"
#include "scenario.hpp"

namespace qtest {

using qwork::Complex;
using qwork::Matrix;

inline const double kR = 1.0 / std::numbers::sqrt2;

inline Matrix pauli_x() { return Matrix{{0.0, 1.0}, {1.0, 0.0}}; }
inline Matrix pauli_y() { return Matrix{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
inline Matrix pauli_z() { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; }
inline Matrix hadamard() { return Matrix{{kR, kR}, {kR, -kR}}; }
inline Matrix plus_state() { return Matrix{{0.5, 0.5}, {0.5, 0.5}}; }

inline qwork::Scenario make_scenario(const Matrix& h, const Matrix& h_final, const Matrix& u, const Matrix& rho) {
  return qwork::Scenario("test", qwork::HermitianOperator(h), qwork::HermitianOperator(h_final),
                         qwork::UnitaryOperator(u), qwork::DensityOperator(rho));
}

// ρ = |+><+|, H = H' = σ_z, U = Hadamard.
inline qwork::Scenario hadamard_plus() { return make_scenario(pauli_z(), pauli_z(), hadamard(), plus_state()); }

// Linear ramp from h to h_final over [0, tau].
inline qwork::Scenario ramp(const Matrix& h, const Matrix& h_final, const Matrix& rho, double tau = 1.0,
                            int steps = 256) {
  qwork::DrivingProtocol p({{0.0, qwork::HermitianOperator(h)}, {tau, qwork::HermitianOperator(h_final)}}, steps);
  return qwork::Scenario("ramp", qwork::HermitianOperator(h), qwork::HermitianOperator(h_final), std::move(p),
                         qwork::DensityOperator(rho));
}

// Naive O(n³) product, independent of the library's operator*.
inline Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

inline double max_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline Matrix dagger(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline Complex naive_trace(const Matrix& a) {
  Complex t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// Random diagonal-in-H scenario and random coherent scenario.
inline qwork::Scenario random_scenario(std::size_t dim, qwork::Rng& rng, bool coherent) {
  const auto h = qwork::random_hermitian(dim, rng);
  const auto hf = qwork::random_hermitian(dim, rng);
  const auto u = qwork::random_unitary(dim, rng);
  Matrix rho;
  if (coherent) {
    rho = qwork::random_density(dim, rng).matrix();
  } else {
    const auto p = qwork::random_probabilities(dim, rng);
    const auto v = qwork::eig_hermitian(h).eigenvectors;
    rho = naive_product(naive_product(v, Matrix::diagonal(p)), dagger(v));
  }
  return qwork::Scenario("random", h, hf, u, qwork::DensityOperator(rho));
}

}  // namespace qtest

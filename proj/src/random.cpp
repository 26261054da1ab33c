#include "random.hpp"

#include <cmath>

#include "errors.hpp"

namespace qwork {

std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix g(rows, cols);
  for (auto& z : g.data()) z = rng.complex_normal() * std::sqrt(0.5);
  return g;
}

UnitaryOperator random_unitary(std::size_t dim, Rng& rng) {
  if (dim < 1) throw ArgumentError("random_unitary: dim must be positive");
  // Gram-Schmidt on a Ginibre matrix gives R with positive diagonal, which
  // makes the Q factor Haar distributed.
  Matrix q = ginibre(dim, dim, rng);
  for (std::size_t k = 0; k < dim; ++k) {
    auto col = q.column(k);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < k; ++j) {
        const auto prev = q.column(j);
        const Complex overlap = inner(prev, col);
        for (std::size_t i = 0; i < dim; ++i) col[i] -= overlap * prev[i];
      }
    const double n = norm(col);
    for (auto& z : col) z /= n;
    q.set_column(k, col);
  }
  return UnitaryOperator(std::move(q));
}

DensityOperator random_density(std::size_t dim, Rng& rng) {
  if (dim < 1) throw ArgumentError("random_density: dim must be positive");
  const Matrix g = ginibre(dim, dim, rng);
  Matrix w = g * g.adjoint();
  w *= 1.0 / w.trace().real();
  return DensityOperator(w);
}

std::vector<Complex> random_pure(std::size_t dim, Rng& rng) {
  if (dim < 1) throw ArgumentError("random_pure: dim must be positive");
  std::vector<Complex> v(dim);
  for (auto& z : v) z = rng.complex_normal();
  const double n = norm(v);
  for (auto& z : v) z /= n;
  return v;
}

HermitianOperator random_hermitian(std::size_t dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return HermitianOperator((g + g.adjoint()) * Complex(0.5));
}

std::vector<double> random_probabilities(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

UnitaryOperator random_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(dim, rng);
}

DensityOperator random_density(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(dim, rng);
}

std::vector<Complex> random_pure(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(dim, rng);
}

}  // namespace qwork

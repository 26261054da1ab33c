#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "quantum.hpp"

namespace qwork {

// Seeded source for every random object in the library. The same seed
// yields bit-identical output on a given platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  Complex complex_normal() {
    const double re = normal(), im = normal();
    return {re, im};
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Per-task seed derived from a root seed (splitmix64 finalizer).
std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index);

// Ginibre matrix with i.i.d. standard complex-normal entries.
Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);

UnitaryOperator random_unitary(std::size_t dim, Rng& rng);
DensityOperator random_density(std::size_t dim, Rng& rng);
std::vector<Complex> random_pure(std::size_t dim, Rng& rng);
// GUE-style (G + G†)/2.
HermitianOperator random_hermitian(std::size_t dim, Rng& rng);
// Uniform on the probability simplex.
std::vector<double> random_probabilities(std::size_t n, Rng& rng);

UnitaryOperator random_unitary(std::size_t dim, std::uint64_t seed);
DensityOperator random_density(std::size_t dim, std::uint64_t seed);
std::vector<Complex> random_pure(std::size_t dim, std::uint64_t seed);

}  // namespace qwork

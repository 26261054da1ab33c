#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace qwork {

// Square matrix with M = M† (within tol::kHermiticity). The stored matrix is
// symmetrized on construction, so it is exactly Hermitian afterwards.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m);
  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

class UnitaryOperator {
 public:
  explicit UnitaryOperator(Matrix m);
  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }

 private:
  Matrix m_;
};

// Hermitian, unit trace, positive semidefinite (each within 1e-10).
class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& m);
  const Matrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.rows(); }

  static DensityOperator pure(std::span<const Complex> psi);
  static DensityOperator maximally_mixed(std::size_t dim);

 private:
  Matrix m_;
};

// Orthogonal projector onto one eigenspace together with its eigenvalue.
struct Eigenspace {
  double value = 0.0;
  Matrix projector;
  std::vector<std::size_t> columns;  // eigenvector columns spanning the space
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // orthonormal columns

  std::size_t dim() const noexcept { return eigenvalues.size(); }
  std::vector<Complex> vector(std::size_t k) const { return eigenvectors.column(k); }
  Matrix reconstruct() const;
  // Σ_k f(λ_k) |v_k><v_k|
  Matrix apply(const std::function<Complex(double)>& f) const;
  // Consecutive eigenvalues closer than `gap` are merged into one space
  // whose value is the cluster mean.
  std::vector<Eigenspace> eigenspaces(double gap = 1e-9) const;
  bool degenerate(double gap = 1e-9) const;
};

// Cyclic complex Jacobi rotations; deterministic sweep order. Throws
// NonConvergence after tol::kJacobiMaxSweeps sweeps.
SpectralDecomposition eig_hermitian(const HermitianOperator& op);
// Same, for a matrix already known to be Hermitian (only the upper
// triangle is trusted).
SpectralDecomposition eig_hermitian(const Matrix& m);

Matrix tensor(const Matrix& a, const Matrix& b);

enum class Subsystem { A, B };
Matrix partial_trace(const Matrix& m, std::pair<std::size_t, std::size_t> dims, Subsystem keep);

// Σ_k Π_k ρ Π_k over the eigenspaces of `basis`.
DensityOperator dephase(const DensityOperator& rho, const SpectralDecomposition& basis);

double von_neumann_entropy(const DensityOperator& rho);
double von_neumann_entropy(const SpectralDecomposition& spectrum);
// Shannon entropy of a probability vector, nats; entries below the floor
// contribute zero.
double shannon_entropy(std::span<const double> p);

// S(ρ‖σ) in nats. Returns +infinity when supp ρ ⊄ supp σ.
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

// exp(-i t H) through the spectral decomposition.
Matrix evolution_operator(const SpectralDecomposition& h, double t);

// Commutator norm ‖[a, b]‖_max.
double commutator_norm(const Matrix& a, const Matrix& b);

}  // namespace qwork

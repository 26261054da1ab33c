#include "quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "tolerances.hpp"

namespace qwork {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (!m.square() || m.rows() == 0)
    throw ValidationError("DimMismatch", std::string(what) + " must be a non-empty square matrix");
  if (!m.all_finite()) throw ValidationError("DimMismatch", std::string(what) + " has non-finite entries");
}

double hermiticity_defect(const Matrix& m) {
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

Matrix symmetrized(const Matrix& m) {
  Matrix s(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  return s;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

HermitianOperator::HermitianOperator(const Matrix& m) {
  require_square(m, "Hermitian operator");
  const double defect = hermiticity_defect(m);
  if (defect > tol::kHermiticity) throw ValidationError("NotHermitian", "max |M - M^dagger| = " + fmt(defect));
  m_ = symmetrized(m);
}

UnitaryOperator::UnitaryOperator(Matrix m) {
  require_square(m, "unitary operator");
  const double defect = max_abs_diff(m.adjoint() * m, Matrix::identity(m.rows()));
  if (defect > tol::kUnitarity) throw ValidationError("NotUnitary", "max |U^dagger U - I| = " + fmt(defect));
  m_ = std::move(m);
}

DensityOperator::DensityOperator(const Matrix& m) {
  require_square(m, "density operator");
  const double defect = hermiticity_defect(m);
  if (defect > tol::kHermiticity) throw ValidationError("NotDensity", "not Hermitian, defect " + fmt(defect));
  m_ = symmetrized(m);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > tol::kDensityTrace) throw ValidationError("NotDensity", "trace is " + fmt(tr));
  const double min_eig = eig_hermitian(m_).eigenvalues.front();
  if (min_eig < tol::kDensityMinEigenvalue)
    throw ValidationError("NotDensity", "minimum eigenvalue is " + fmt(min_eig));
}

DensityOperator DensityOperator::pure(std::span<const Complex> psi) {
  const double n = norm(psi);
  std::vector<Complex> v(psi.begin(), psi.end());
  for (auto& z : v) z /= n;
  return DensityOperator(Matrix::outer(v));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  return DensityOperator(Matrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

Matrix SpectralDecomposition::reconstruct() const {
  return apply([](double x) { return Complex(x); });
}

Matrix SpectralDecomposition::apply(const std::function<Complex(double)>& f) const {
  const std::size_t n = dim();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex fk = f(eigenvalues[k]);
    if (fk == Complex{}) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = fk * eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(eigenvectors(j, k));
    }
  }
  return out;
}

std::vector<Eigenspace> SpectralDecomposition::eigenspaces(double gap) const {
  std::vector<Eigenspace> spaces;
  const std::size_t n = dim();
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && eigenvalues[end] - eigenvalues[end - 1] < gap) ++end;
    Eigenspace space;
    space.projector = Matrix(n, n);
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      sum += eigenvalues[k];
      space.columns.push_back(k);
      const auto v = vector(k);
      space.projector += Matrix::outer(v);
    }
    space.value = sum / static_cast<double>(end - start);
    spaces.push_back(std::move(space));
    start = end;
  }
  return spaces;
}

bool SpectralDecomposition::degenerate(double gap) const {
  for (std::size_t k = 1; k < eigenvalues.size(); ++k)
    if (eigenvalues[k] - eigenvalues[k - 1] < gap) return true;
  return false;
}

SpectralDecomposition eig_hermitian(const HermitianOperator& op) { return eig_hermitian(op.matrix()); }

SpectralDecomposition eig_hermitian(const Matrix& input) {
  if (!input.square()) throw DimensionMismatch("eig_hermitian needs a square matrix");
  const std::size_t n = input.rows();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = input(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = input(i, j);
      a(j, i) = std::conj(input(i, j));
    }
  }
  Matrix v = Matrix::identity(n);

  double scale = 0.0;
  for (const auto& z : a.data()) scale += std::norm(z);
  scale = std::max(1.0, std::sqrt(scale));
  const double threshold = tol::kJacobiOffDiagonal * scale;

  auto off_max = [&] {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m = std::max(m, std::abs(a(i, j)));
    return m;
  };

  int sweep = 0;
  while (off_max() > threshold) {
    if (++sweep > tol::kJacobiMaxSweeps)
      throw NonConvergence("Jacobi diagonalization exceeded " + std::to_string(tol::kJacobiMaxSweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= std::numeric_limits<double>::min()) continue;
        const Complex phase = apq / mag;  // e^{iφ}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Real symmetric 2x2 rotation after removing the phase of a_pq.
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // V = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
        const Complex v00 = c, v01 = s;
        const Complex v10 = -s * std::conj(phase), v11 = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * v00 + akq * v10;
          a(k, q) = akp * v01 + akq * v11;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(v00) * apk + std::conj(v10) * aqk;
          a(q, k) = std::conj(v01) * apk + std::conj(v11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * v00 + vkq * v10;
          v(k, q) = vkp * v01 + vkq * v11;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    out.eigenvectors.set_column(k, v.column(order[k]));
  }

  // Re-orthonormalize (modified Gram-Schmidt) so that degenerate clusters
  // stay orthonormal to working precision.
  for (std::size_t k = 0; k < n; ++k) {
    auto col = out.eigenvectors.column(k);
    for (std::size_t j = 0; j < k; ++j) {
      const auto prev = out.eigenvectors.column(j);
      const Complex overlap = inner(prev, col);
      for (std::size_t i = 0; i < n; ++i) col[i] -= overlap * prev[i];
    }
    const double nrm = norm(col);
    for (auto& z : col) z /= nrm;
    out.eigenvectors.set_column(k, col);
  }
  return out;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return m;
}

Matrix partial_trace(const Matrix& m, std::pair<std::size_t, std::size_t> dims, Subsystem keep) {
  const auto [da, db] = dims;
  if (!m.square() || m.rows() != da * db)
    throw DimensionMismatch("partial_trace: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            ", expected " + std::to_string(da * db) + " square");
  if (keep == Subsystem::A) {
    Matrix out(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        for (std::size_t k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  Matrix out(db, db);
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t l = 0; l < db; ++l)
      for (std::size_t i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

DensityOperator dephase(const DensityOperator& rho, const SpectralDecomposition& basis) {
  if (basis.dim() != rho.dim()) throw DimensionMismatch("dephase: basis and state dimensions differ");
  Matrix out(rho.dim(), rho.dim());
  for (const auto& space : basis.eigenspaces(tol::kDegeneracyGap))
    out += space.projector * rho.matrix() * space.projector;
  return DensityOperator(out);
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > tol::kEigFloor) s -= x * std::log(x);
  return s;
}

double von_neumann_entropy(const SpectralDecomposition& spectrum) { return shannon_entropy(spectrum.eigenvalues); }

double von_neumann_entropy(const DensityOperator& rho) { return von_neumann_entropy(eig_hermitian(rho.matrix())); }

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionMismatch("relative_entropy: dimensions differ");
  const auto sig = eig_hermitian(sigma.matrix());
  double cross = 0.0;  // Tr ρ log σ
  for (std::size_t k = 0; k < sig.dim(); ++k) {
    const auto vk = sig.vector(k);
    const double weight = inner(vk, rho.matrix() * std::span<const Complex>(vk)).real();
    if (sig.eigenvalues[k] <= tol::kEigFloor) {
      if (weight > 1e-12) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(sig.eigenvalues[k]);
  }
  return -von_neumann_entropy(rho) - cross;
}

Matrix evolution_operator(const SpectralDecomposition& h, double t) {
  return h.apply([t](double e) { return std::exp(Complex(0.0, -e * t)); });
}

double commutator_norm(const Matrix& a, const Matrix& b) { return (a * b - b * a).max_abs(); }

}  // namespace qwork

#include "povm.hpp"

#include <algorithm>
#include <limits>

#include "quantum.hpp"
#include "tolerances.hpp"

namespace qwork {

double Povm::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : elements) m = std::min(m, eig_hermitian(e.op).eigenvalues.front());
  return m;
}

double Povm::completeness_defect() const {
  if (elements.empty()) return std::numeric_limits<double>::infinity();
  Matrix sum(dim(), dim());
  for (const auto& e : elements) sum += e.op;
  return max_abs_diff(sum, Matrix::identity(dim()));
}

bool Povm::valid() const {
  return min_eigenvalue() >= tol::kPovmPositivity && completeness_defect() <= tol::kPovmCompleteness;
}

}  // namespace qwork

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace qwork {

struct PovmElement {
  double work = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> levels;  // (i, j) for two-copy elements
  Matrix op;
};

// Labelled effects acting on a single- or two-copy space.
struct Povm {
  std::vector<PovmElement> elements;
  // Max residual of Tr(ρΠ_w) against the scheme on held-out states, when
  // the POVM was obtained by reconstruction.
  std::optional<double> reproduction_residual;

  std::size_t dim() const { return elements.empty() ? 0 : elements.front().op.rows(); }
  double min_eigenvalue() const;
  // ‖Σ Π − I‖_max
  double completeness_defect() const;
  // Every element ⪰ −1e-8 and Σ = I within 1e-8.
  bool valid() const;
};

}  // namespace qwork

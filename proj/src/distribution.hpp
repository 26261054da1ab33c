#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matrix.hpp"

namespace qwork {

enum class SchemeId {
  TPM,
  OperatorOfWork,
  FCS,
  MargenauHill,
  ConsistentHistories,
  StateDependent,
  SubEnsemble,
  CollectiveTwoCopy,
  GaussianPointer,
  PostSelection,
};

std::string_view scheme_name(SchemeId id);
std::optional<SchemeId> scheme_from_name(std::string_view name);
const std::vector<SchemeId>& all_schemes();

struct WorkAtom {
  double work;
  double weight;
};

// Finite list of (work, weight) pairs sorted by work, with values closer
// than tol::kWorkMerge merged. Weights of a quasi-distribution may be negative.
struct WorkDistribution {
  std::vector<WorkAtom> atoms;
  SchemeId scheme = SchemeId::TPM;
  bool is_quasi = false;
  std::vector<std::string> notes;

  // Sorts, merges and prunes atoms with |weight| < 1e-14, then checks the
  // normalization (and nonnegativity when !is_quasi). Throws SchemeError.
  static WorkDistribution build(std::vector<WorkAtom> raw, SchemeId scheme, bool is_quasi);

  double total_weight() const;
  double moment(int k) const;
  double mean() const { return moment(1); }
  double min_weight() const;
  // Weight at the atom within tol::kWorkMerge of w, 0 if none.
  double weight_at(double w) const;
};

// ½ Σ_w |p(w) − q(w)| over the union support, atoms matched within tol::kWorkMerge.
double total_variation(const WorkDistribution& p, const WorkDistribution& q);

// λp + (1−λ)q on the merged support.
WorkDistribution mix(const WorkDistribution& p, const WorkDistribution& q, double lambda);

// Real joint weights over (initial level i, final level j) with the work
// value assigned to each cell.
struct JointWorkTable {
  std::vector<double> initial_energies;
  std::vector<double> final_energies;
  std::vector<std::vector<double>> weights;  // [i][j]
  std::vector<std::vector<double>> work;     // [i][j]

  std::vector<double> initial_marginal() const;
  std::vector<double> final_marginal() const;
  WorkDistribution to_distribution(SchemeId scheme, bool is_quasi) const;
};

}  // namespace qwork

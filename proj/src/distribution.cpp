#include "distribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "tolerances.hpp"

namespace qwork {

namespace {

constexpr std::array<std::pair<SchemeId, std::string_view>, 10> kNames{{
    {SchemeId::TPM, "tpm"},
    {SchemeId::OperatorOfWork, "work-operator"},
    {SchemeId::FCS, "fcs"},
    {SchemeId::MargenauHill, "mh"},
    {SchemeId::ConsistentHistories, "ch"},
    {SchemeId::StateDependent, "state-dependent"},
    {SchemeId::SubEnsemble, "sub-ensemble"},
    {SchemeId::CollectiveTwoCopy, "collective"},
    {SchemeId::GaussianPointer, "gaussian"},
    {SchemeId::PostSelection, "post-selection"},
}};

constexpr double kPrune = 1e-14;

// Merge a work-sorted atom list in place.
std::vector<WorkAtom> merge_sorted(const std::vector<WorkAtom>& sorted) {
  std::vector<WorkAtom> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    double weight = sorted[i].weight;
    double work_sum = sorted[i].work;
    while (j < sorted.size() && sorted[j].work - sorted[j - 1].work < tol::kWorkMerge) {
      weight += sorted[j].weight;
      work_sum += sorted[j].work;
      ++j;
    }
    out.push_back({work_sum / static_cast<double>(j - i), weight});
    i = j;
  }
  return out;
}

}  // namespace

std::string_view scheme_name(SchemeId id) {
  for (const auto& [scheme, name] : kNames)
    if (scheme == id) return name;
  return "unknown";
}

std::optional<SchemeId> scheme_from_name(std::string_view name) {
  for (const auto& [scheme, n] : kNames)
    if (n == name) return scheme;
  return std::nullopt;
}

const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> schemes = [] {
    std::vector<SchemeId> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return schemes;
}

WorkDistribution WorkDistribution::build(std::vector<WorkAtom> raw, SchemeId scheme, bool is_quasi) {
  std::stable_sort(raw.begin(), raw.end(), [](const WorkAtom& a, const WorkAtom& b) { return a.work < b.work; });
  WorkDistribution d;
  d.scheme = scheme;
  d.is_quasi = is_quasi;
  for (const auto& atom : merge_sorted(raw))
    if (std::abs(atom.weight) >= kPrune) d.atoms.push_back(atom);
  const double total = d.total_weight();
  if (std::abs(total - 1.0) > tol::kNormalization)
    throw SchemeError("NotNormalized", std::string(scheme_name(scheme)) + " weights sum to " + std::to_string(total));
  if (!is_quasi && d.min_weight() < tol::kClassicalNegativity)
    throw SchemeError("NegativeWeight", std::string(scheme_name(scheme)) + " produced a negative probability");
  return d;
}

double WorkDistribution::total_weight() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

double WorkDistribution::moment(int k) const {
  double s = 0.0;
  for (const auto& a : atoms) s += std::pow(a.work, k) * a.weight;
  return s;
}

double WorkDistribution::min_weight() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms) m = std::min(m, a.weight);
  return atoms.empty() ? 0.0 : m;
}

double WorkDistribution::weight_at(double w) const {
  for (const auto& a : atoms)
    if (std::abs(a.work - w) < tol::kWorkMerge) return a.weight;
  return 0.0;
}

namespace {

// Union of both supports: pairs of (p weight, q weight).
std::vector<std::pair<double, double>> aligned(const WorkDistribution& p, const WorkDistribution& q,
                                               std::vector<double>* works = nullptr) {
  struct Tagged {
    double work;
    double weight;
    int source;
  };
  std::vector<Tagged> all;
  for (const auto& a : p.atoms) all.push_back({a.work, a.weight, 0});
  for (const auto& a : q.atoms) all.push_back({a.work, a.weight, 1});
  std::stable_sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.work < b.work; });
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    std::pair<double, double> cell{0.0, 0.0};
    double work_sum = 0.0;
    do {
      (all[j].source == 0 ? cell.first : cell.second) += all[j].weight;
      work_sum += all[j].work;
      ++j;
    } while (j < all.size() && all[j].work - all[j - 1].work < tol::kWorkMerge);
    out.push_back(cell);
    if (works) works->push_back(work_sum / static_cast<double>(j - i));
    i = j;
  }
  return out;
}

}  // namespace

double total_variation(const WorkDistribution& p, const WorkDistribution& q) {
  double s = 0.0;
  for (const auto& [a, b] : aligned(p, q)) s += std::abs(a - b);
  return 0.5 * s;
}

WorkDistribution mix(const WorkDistribution& p, const WorkDistribution& q, double lambda) {
  std::vector<double> works;
  const auto cells = aligned(p, q, &works);
  WorkDistribution out;
  out.scheme = p.scheme;
  out.is_quasi = p.is_quasi || q.is_quasi;
  for (std::size_t i = 0; i < cells.size(); ++i)
    out.atoms.push_back({works[i], lambda * cells[i].first + (1.0 - lambda) * cells[i].second});
  return out;
}

std::vector<double> JointWorkTable::initial_marginal() const {
  std::vector<double> m(weights.size(), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (double w : weights[i]) m[i] += w;
  return m;
}

std::vector<double> JointWorkTable::final_marginal() const {
  std::vector<double> m(final_energies.size(), 0.0);
  for (const auto& row : weights)
    for (std::size_t j = 0; j < row.size(); ++j) m[j] += row[j];
  return m;
}

WorkDistribution JointWorkTable::to_distribution(SchemeId scheme, bool is_quasi) const {
  std::vector<WorkAtom> raw;
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (std::size_t j = 0; j < weights[i].size(); ++j) raw.push_back({work[i][j], weights[i][j]});
  return WorkDistribution::build(std::move(raw), scheme, is_quasi);
}

}  // namespace qwork

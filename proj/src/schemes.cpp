#include "schemes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "errors.hpp"
#include "tolerances.hpp"

namespace qwork {

namespace {

JointWorkTable joint_table(const Scenario& s, const std::function<double(std::size_t, std::size_t)>& weight) {
  JointWorkTable t;
  for (const auto& l : s.initial_levels()) t.initial_energies.push_back(l.value);
  for (const auto& l : s.final_levels()) t.final_energies.push_back(l.value);
  for (std::size_t i = 0; i < t.initial_energies.size(); ++i) {
    std::vector<double> row, work;
    for (std::size_t j = 0; j < t.final_energies.size(); ++j) {
      row.push_back(weight(i, j));
      work.push_back(t.final_energies[j] - t.initial_energies[i]);
    }
    t.weights.push_back(std::move(row));
    t.work.push_back(std::move(work));
  }
  return t;
}

}  // namespace

TpmResult tpm(const Scenario& s) {
  const auto& levels = s.initial_levels();
  const auto& T = s.heisenberg_final_projectors();
  std::vector<Matrix> dephased;
  for (const auto& l : levels) dephased.push_back(l.projector * s.rho().matrix() * l.projector);
  TpmResult r;
  r.table = joint_table(s, [&](std::size_t i, std::size_t j) { return trace_product(dephased[i], T[j]).real(); });
  r.distribution = r.table.to_distribution(SchemeId::TPM, false);
  return r;
}

Povm tpm_povm(const Scenario& s) {
  const auto& levels = s.initial_levels();
  const auto& finals = s.final_levels();
  const auto& T = s.heisenberg_final_projectors();
  Povm povm;
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = 0; j < finals.size(); ++j) {
      const double w = finals[j].value - levels[i].value;
      Matrix op = levels[i].projector * T[j] * levels[i].projector;
      auto it = std::find_if(povm.elements.begin(), povm.elements.end(),
                             [&](const PovmElement& e) { return std::abs(e.work - w) < tol::kWorkMerge; });
      if (it == povm.elements.end())
        povm.elements.push_back({w, std::nullopt, std::move(op)});
      else
        it->op += op;
    }
  std::sort(povm.elements.begin(), povm.elements.end(),
            [](const PovmElement& a, const PovmElement& b) { return a.work < b.work; });
  return povm;
}

WorkOperatorResult work_operator(const Scenario& s) {
  const Matrix& u = s.unitary();
  WorkOperatorResult r;
  r.work_operator = HermitianOperator(u.adjoint() * s.final_hamiltonian().matrix() * u - s.hamiltonian().matrix()).matrix();
  std::vector<WorkAtom> raw;
  for (const auto& space : eig_hermitian(r.work_operator).eigenspaces(tol::kDegeneracyGap))
    raw.push_back({space.value, trace_product(s.rho().matrix(), space.projector).real()});
  r.distribution = WorkDistribution::build(std::move(raw), SchemeId::OperatorOfWork, false);
  return r;
}

WorkDistribution fcs_quasiprob(const Scenario& s) {
  const auto& levels = s.initial_levels();
  const auto& finals = s.final_levels();
  const auto& T = s.heisenberg_final_projectors();
  struct ComplexAtom {
    double work;
    Complex weight;
  };
  std::vector<ComplexAtom> raw;
  for (std::size_t a = 0; a < levels.size(); ++a)
    for (std::size_t b = 0; b < levels.size(); ++b) {
      const Matrix block = levels[a].projector * s.rho().matrix() * levels[b].projector;
      for (std::size_t m = 0; m < finals.size(); ++m)
        raw.push_back({finals[m].value - 0.5 * (levels[a].value + levels[b].value), trace_product(block, T[m])});
    }
  std::stable_sort(raw.begin(), raw.end(), [](const ComplexAtom& x, const ComplexAtom& y) { return x.work < y.work; });

  std::vector<WorkAtom> merged;
  double residue = 0.0;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    Complex weight = raw[i].weight;
    double work_sum = raw[i].work;
    while (j < raw.size() && raw[j].work - raw[j - 1].work < tol::kWorkMerge) {
      weight += raw[j].weight;
      work_sum += raw[j].work;
      ++j;
    }
    residue = std::max(residue, std::abs(weight.imag()));
    merged.push_back({work_sum / static_cast<double>(j - i), weight.real()});
    i = j;
  }
  if (residue > tol::kFcsImaginaryResidue)
    throw SchemeError("ImaginaryResidue", "fcs weights carry an imaginary part of " + std::to_string(residue));
  return WorkDistribution::build(std::move(merged), SchemeId::FCS, true);
}

Complex fcs_characteristic(const Scenario& s, double u) {
  const Matrix& U = s.unitary();
  const Matrix forward = s.final_spectrum().apply([u](double e) { return std::exp(Complex(0.0, u * e)); });
  const Matrix half = s.initial_spectrum().apply([u](double e) { return std::exp(Complex(0.0, -0.5 * u * e)); });
  return trace_product(U.adjoint() * forward * U, half * s.rho().matrix() * half);
}

MargenauHillResult margenau_hill(const Scenario& s) {
  const auto& levels = s.initial_levels();
  const auto& T = s.heisenberg_final_projectors();
  std::vector<Matrix> rho_pi;
  for (const auto& l : levels) rho_pi.push_back(s.rho().matrix() * l.projector);
  MargenauHillResult r;
  r.table = joint_table(s, [&](std::size_t k, std::size_t m) { return trace_product(rho_pi[k], T[m]).real(); });
  r.distribution = r.table.to_distribution(SchemeId::MargenauHill, true);
  return r;
}

namespace {

struct HistoryLevel {
  std::vector<double> values;
  std::vector<Matrix> projectors;
};

HistoryLevel history_level(const Matrix& x) {
  HistoryLevel level;
  for (auto& space : eig_hermitian(x).eigenspaces(tol::kDegeneracyGap)) {
    level.values.push_back(space.value);
    level.projectors.push_back(std::move(space.projector));
  }
  return level;
}

void check_trajectory_budget(std::size_t dim, int steps) {
  if (steps < 1) throw ArgumentError("consistent histories needs K >= 1");
  double count = std::pow(static_cast<double>(dim), steps + 1);
  if (count > static_cast<double>(tol::kTrajectoryCap))
    throw SchemeError("TrajectoryBudgetExceeded", std::to_string(dim) + "^(" + std::to_string(steps + 1) +
                                                      ") trajectories exceed the cap of 2^20");
}

void multiply_into(Matrix& out, const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += a(r, k) * b(k, c);
      out(r, c) = acc;
    }
}

// Re Tr(P_K ⋯ P_0 ρ) for every projector sequence, with w = Δt Σ_{j=1}^{K−1} x_j.
// P_0 and P_K carry no work, so their sums are taken by completeness.
WorkDistribution enumerate_histories(const std::vector<HistoryLevel>& levels, const Matrix& rho, double dt) {
  const std::size_t last = levels.size() - 1;
  std::vector<WorkAtom> raw;
  std::vector<Matrix> partial(levels.size(), Matrix(rho.rows(), rho.cols()));
  std::function<void(std::size_t, const Matrix&, double)> descend = [&](std::size_t j, const Matrix& m, double w) {
    if (j == last) {
      raw.push_back({w, m.trace().real()});
      return;
    }
    const auto& level = levels[j];
    for (std::size_t n = 0; n < level.projectors.size(); ++n) {
      multiply_into(partial[j], level.projectors[n], m);
      descend(j + 1, partial[j], w + dt * level.values[n]);
    }
  };
  descend(1, rho, 0.0);
  return WorkDistribution::build(std::move(raw), SchemeId::ConsistentHistories, true);
}

const DrivingProtocol& require_protocol(const Scenario& s) {
  const auto* p = s.protocol();
  if (!p) throw SchemeError("ProtocolRequired", "consistent histories needs a driving protocol, not a bare unitary");
  return *p;
}

std::vector<double> history_grid(double tau, int steps) {
  std::vector<double> t;
  for (int j = 0; j <= steps; ++j) t.push_back(j == steps ? tau : tau * j / steps);
  return t;
}

}  // namespace

WorkDistribution consistent_histories(const Scenario& s, int steps) {
  const auto& p = require_protocol(s);
  check_trajectory_budget(s.dim(), steps);
  const auto times = history_grid(p.duration(), steps);
  const auto unitaries = unitaries_at(p, times);
  std::vector<HistoryLevel> levels;
  for (std::size_t j = 0; j < times.size(); ++j)
    levels.push_back(history_level(unitaries[j].adjoint() * p.derivative_at(times[j]) * unitaries[j]));
  return enumerate_histories(levels, s.rho().matrix(), p.duration() / steps);
}

WorkDistribution consistent_histories_time_reversed(const Scenario& s, int steps) {
  const auto& p = require_protocol(s);
  check_trajectory_budget(s.dim(), steps);
  const double tau = p.duration();
  const auto times = history_grid(tau, steps);
  const auto unitaries = unitaries_at(p, times);
  const Matrix& u_tau = unitaries.back();
  std::vector<HistoryLevel> levels;
  for (int j = 0; j <= steps; ++j) {
    const std::size_t k = static_cast<std::size_t>(steps - j);
    const Matrix u_rev = unitaries[k] * u_tau.adjoint();
    const Matrix h_dot_rev = Complex(-1.0) * p.derivative_at(times[k]);
    levels.push_back(history_level(u_rev.adjoint() * h_dot_rev * u_rev));
  }
  const Matrix rho = u_tau * s.rho().matrix() * u_tau.adjoint();
  return enumerate_histories(levels, rho, tau / steps);
}

WorkDistribution state_dependent(const Scenario& s) {
  const auto spectrum = eig_hermitian(s.rho().matrix());
  const Matrix& h = s.hamiltonian().matrix();
  const auto& finals = s.final_levels();
  const auto& T = s.heisenberg_final_projectors();
  const std::size_t d = s.dim();

  // Inside a degenerate eigenspace of ρ, pick the basis that diagonalizes H.
  Matrix basis = spectrum.eigenvectors;
  std::vector<std::string> notes;
  for (const auto& space : spectrum.eigenspaces(tol::kDegeneracyGap)) {
    const std::size_t k = space.columns.size();
    if (k < 2) continue;
    notes.push_back("DegenerateRho: eigenvalue " + std::to_string(space.value) + " has multiplicity " +
                    std::to_string(k) + "; basis fixed by diagonalizing H inside the eigenspace");
    Matrix v(d, k);
    for (std::size_t c = 0; c < k; ++c) v.set_column(c, spectrum.eigenvectors.column(space.columns[c]));
    const auto local = eig_hermitian(v.adjoint() * h * v);
    const Matrix rotated = v * local.eigenvectors;
    for (std::size_t c = 0; c < k; ++c) basis.set_column(space.columns[c], rotated.column(c));
  }

  std::vector<WorkAtom> raw;
  for (std::size_t a = 0; a < d; ++a) {
    const auto phi = basis.column(a);
    const double lambda = std::max(0.0, spectrum.eigenvalues[a]);
    const double energy = inner(phi, h * std::span<const Complex>(phi)).real();
    const Matrix proj = Matrix::outer(phi);
    for (std::size_t j = 0; j < finals.size(); ++j)
      raw.push_back({finals[j].value - energy, lambda * trace_product(proj, T[j]).real()});
  }
  auto out = WorkDistribution::build(std::move(raw), SchemeId::StateDependent, false);
  out.notes = std::move(notes);
  out.notes.push_back("initial energy label is the expectation value <phi|H|phi> of each eigenvector of rho");
  return out;
}

Matrix PureDecomposition::reconstruct() const {
  if (states.empty()) return {};
  Matrix m(states.front().size(), states.front().size());
  for (std::size_t j = 0; j < states.size(); ++j) m += Complex(weights[j]) * Matrix::outer(states[j]);
  return m;
}

PureDecomposition PureDecomposition::eigen(const DensityOperator& rho) {
  const auto spectrum = eig_hermitian(rho.matrix());
  PureDecomposition out;
  for (std::size_t a = 0; a < spectrum.dim(); ++a) {
    if (spectrum.eigenvalues[a] <= 0.0) continue;
    out.weights.push_back(spectrum.eigenvalues[a]);
    out.states.push_back(spectrum.vector(a));
  }
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  return out;
}

PureDecomposition PureDecomposition::random(const DensityOperator& rho, std::size_t n_states, Rng& rng) {
  const std::size_t d = rho.dim();
  if (n_states < d) throw ArgumentError("a random decomposition needs at least dim states");
  const auto spectrum = eig_hermitian(rho.matrix());
  const Matrix v = random_unitary(n_states, rng).matrix();
  PureDecomposition out;
  for (std::size_t j = 0; j < n_states; ++j) {
    std::vector<Complex> psi(d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
      const double amp = std::sqrt(std::max(0.0, spectrum.eigenvalues[a]));
      for (std::size_t r = 0; r < d; ++r) psi[r] += v(j, a) * amp * spectrum.eigenvectors(r, a);
    }
    const double n = norm(psi);
    if (n * n < tol::kEigFloor) continue;
    for (auto& x : psi) x /= n;
    out.weights.push_back(n * n);
    out.states.push_back(std::move(psi));
  }
  double total = 0.0;
  for (double w : out.weights) total += w;
  for (double& w : out.weights) w /= total;
  return out;
}

WorkDistribution sub_ensemble(const Scenario& s, const PureDecomposition& decomposition) {
  const auto mismatch = [](const std::string& msg) { return SchemeError("DecompositionMismatch", msg); };
  if (decomposition.weights.size() != decomposition.states.size() || decomposition.states.empty())
    throw mismatch("weights and states must be non-empty and of equal length");
  double total = 0.0;
  for (std::size_t j = 0; j < decomposition.states.size(); ++j) {
    if (decomposition.weights[j] < 0.0) throw mismatch("negative weight in decomposition");
    if (decomposition.states[j].size() != s.dim()) throw mismatch("state dimension differs from the scenario");
    if (std::abs(norm(decomposition.states[j]) - 1.0) > tol::kNormalization)
      throw mismatch("state " + std::to_string(j) + " is not normalized");
    total += decomposition.weights[j];
  }
  if (std::abs(total - 1.0) > 1e-12) throw mismatch("weights sum to " + std::to_string(total));
  const double residual = max_abs_diff(decomposition.reconstruct(), s.rho().matrix());
  if (residual > tol::kNormalization)
    throw mismatch("ensemble reproduces rho only to " + std::to_string(residual));

  const Matrix w_op = work_operator(s).work_operator;
  std::vector<WorkAtom> raw;
  for (std::size_t j = 0; j < decomposition.states.size(); ++j) {
    const auto& psi = decomposition.states[j];
    raw.push_back({inner(psi, w_op * std::span<const Complex>(psi)).real(), decomposition.weights[j]});
  }
  return WorkDistribution::build(std::move(raw), SchemeId::SubEnsemble, false);
}

namespace {

struct CollectiveParts {
  std::vector<std::vector<double>> diag;  // <i|T_j|i>, [i][j]
  std::vector<Matrix> off;                // T_j^off in the original basis
};

CollectiveParts collective_parts(const Scenario& s) {
  if (s.initial_levels().size() != s.dim())
    throw SchemeError("DegenerateSpectrum", "the collective scheme needs a non-degenerate H");
  const Matrix& e = s.initial_spectrum().eigenvectors;
  const auto& T = s.heisenberg_final_projectors();
  const std::size_t d = s.dim();
  CollectiveParts parts;
  parts.diag.assign(d, std::vector<double>(T.size(), 0.0));
  for (std::size_t j = 0; j < T.size(); ++j) {
    Matrix t_h = e.adjoint() * T[j] * e;
    for (std::size_t i = 0; i < d; ++i) {
      parts.diag[i][j] = t_h(i, i).real();
      t_h(i, i) = 0.0;
    }
    parts.off.push_back(e * t_h * e.adjoint());
  }
  return parts;
}

double block_min_eigenvalue(const CollectiveParts& parts, double lambda) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < parts.off.size(); ++j) {
    const std::size_t d = parts.off[j].rows();
    for (std::size_t i = 0; i < parts.diag.size(); ++i) {
      Matrix b = Complex(lambda) * parts.off[j] + Complex(parts.diag[i][j]) * Matrix::identity(d);
      m = std::min(m, eig_hermitian(b).eigenvalues.front());
    }
  }
  return m;
}

double bisect_lambda(const CollectiveParts& parts) {
  if (block_min_eigenvalue(parts, 1.0) >= tol::kCollectivePositivity) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol::kLambdaBisection) {
    const double mid = 0.5 * (lo + hi);
    (block_min_eigenvalue(parts, mid) >= tol::kCollectivePositivity ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

double collective_min_eigenvalue(const Scenario& s, double lambda) {
  return block_min_eigenvalue(collective_parts(s), lambda);
}

double lambda_max(const Scenario& s) { return bisect_lambda(collective_parts(s)); }

CollectiveResult collective_two_copy(const Scenario& s, std::optional<double> lambda) {
  const auto parts = collective_parts(s);
  const double lam = lambda ? *lambda : bisect_lambda(parts);
  if (!(lam >= 0.0 && lam <= 1.0)) throw ArgumentError("lambda must lie in [0, 1]");
  const double min_eig = block_min_eigenvalue(parts, lam);
  if (min_eig < tol::kCollectivePositivity)
    throw SchemeError("NotPositive", "M(lambda = " + std::to_string(lam) + ") has eigenvalue " + std::to_string(min_eig));

  const std::size_t d = s.dim();
  const auto& finals = s.final_levels();
  const auto& rho = s.rho().matrix();
  CollectiveResult r;
  r.lambda = lam;
  std::vector<WorkAtom> raw;
  for (std::size_t i = 0; i < d; ++i) {
    const auto ei = s.initial_spectrum().vector(i);
    const Matrix pi = Matrix::outer(ei);
    const double population = trace_product(pi, rho).real();
    for (std::size_t j = 0; j < finals.size(); ++j) {
      const Matrix block = Complex(lam) * parts.off[j] + Complex(parts.diag[i][j]) * Matrix::identity(d);
      const double w = finals[j].value - s.initial_levels()[i].value;
      // Tr[(A ⊗ B)(ρ ⊗ ρ)] = Tr(Aρ) Tr(Bρ)
      raw.push_back({w, population * trace_product(block, rho).real()});
      r.povm.elements.push_back({w, std::make_pair(i, j), tensor(pi, block)});
    }
  }
  r.distribution = WorkDistribution::build(std::move(raw), SchemeId::CollectiveTwoCopy, false);
  r.distribution.notes.push_back("lambda = " + std::to_string(lam));
  return r;
}

}  // namespace qwork

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quantum.hpp"

namespace qwork {

// Piecewise-linear H(t) through the breakpoints, on [0, τ].
class DrivingProtocol {
 public:
  struct Breakpoint {
    double time;
    HermitianOperator hamiltonian;
  };

  static constexpr int kDefaultStepsPerSegment = 64;

  DrivingProtocol(std::vector<Breakpoint> breakpoints, int steps_per_segment = kDefaultStepsPerSegment);

  const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }
  int steps_per_segment() const noexcept { return steps_per_segment_; }
  double duration() const noexcept { return breakpoints_.back().time; }
  std::size_t dim() const noexcept { return breakpoints_.front().hamiltonian.dim(); }

  Matrix hamiltonian_at(double t) const;
  // Exact derivative of the interpolation. At an interior breakpoint the
  // two one-sided slopes are averaged.
  Matrix derivative_at(double t) const;

 private:
  std::size_t segment_of(double t) const;

  std::vector<Breakpoint> breakpoints_;
  int steps_per_segment_;
};

struct CompiledEvolution {
  Matrix unitary;                                     // U(τ)
  std::vector<std::pair<double, Matrix>> trajectory;  // U(t) after every step, t ascending, starts at (0, I)
};

// Midpoint-rule product of exp(-i H_mid Δt) factors, later times on the left.
CompiledEvolution compile_unitary(const DrivingProtocol& protocol);

// Propagator U(t1, t0). [t0, t1] is split at breakpoints; each piece of a
// segment gets steps_per_segment · (piece / segment length) midpoint steps,
// rounded up.
Matrix propagate(const DrivingProtocol& protocol, double t0, double t1);

// U(t_j) from time 0 for ascending times.
std::vector<Matrix> unitaries_at(const DrivingProtocol& protocol, std::span<const double> times);

using Evolution = std::variant<UnitaryOperator, DrivingProtocol>;

// The tuple (H, H', U or H(t), ρ) of one work experiment. Immutable; the
// energy eigenspaces and U(τ) are computed once on construction.
class Scenario {
 public:
  Scenario(std::string label, HermitianOperator h, HermitianOperator h_final, Evolution evolution,
           DensityOperator rho);

  std::size_t dim() const noexcept { return h_.dim(); }
  const std::string& label() const noexcept { return label_; }
  const HermitianOperator& hamiltonian() const noexcept { return h_; }
  const HermitianOperator& final_hamiltonian() const noexcept { return h_final_; }
  const Evolution& evolution() const noexcept { return evolution_; }
  const DensityOperator& rho() const noexcept { return rho_; }
  const Matrix& unitary() const noexcept { return cache_->unitary; }
  const DrivingProtocol* protocol() const noexcept { return std::get_if<DrivingProtocol>(&evolution_); }

  const SpectralDecomposition& initial_spectrum() const noexcept { return cache_->h_spectrum; }
  const SpectralDecomposition& final_spectrum() const noexcept { return cache_->h_final_spectrum; }
  const std::vector<Eigenspace>& initial_levels() const noexcept { return cache_->h_levels; }
  const std::vector<Eigenspace>& final_levels() const noexcept { return cache_->h_final_levels; }
  // T_j = U† Π'_j U for every final level j.
  const std::vector<Matrix>& heisenberg_final_projectors() const noexcept { return cache_->t_projectors; }

  // Same H, H', U with another initial state; shares the cached spectra.
  Scenario with_rho(DensityOperator rho) const;
  Scenario with_label(std::string label) const;

 private:
  struct Cache {
    Matrix unitary;
    SpectralDecomposition h_spectrum, h_final_spectrum;
    std::vector<Eigenspace> h_levels, h_final_levels;
    std::vector<Matrix> t_projectors;
  };

  Scenario(std::string label, HermitianOperator h, HermitianOperator h_final, Evolution evolution,
           DensityOperator rho, std::shared_ptr<const Cache> cache);

  std::string label_;
  HermitianOperator h_;
  HermitianOperator h_final_;
  Evolution evolution_;
  DensityOperator rho_;
  std::shared_ptr<const Cache> cache_;
};

// Tr(UρU†H') − Tr(ρH)
double scenario_mean_energy_change(const Scenario& s);

// JSON document <-> Scenario. Complex entries are [re, im] pairs, matrices
// are row-major nested arrays. Errors carry the offending field path.
Scenario parse_scenario(std::string_view document);
std::string serialize_scenario(const Scenario& s);
Scenario load_scenario_file(const std::string& path);

}  // namespace qwork

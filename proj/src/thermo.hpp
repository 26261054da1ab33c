#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "quantum.hpp"

namespace qwork {

// Inverse temperature (k = 1) and Hamiltonian; beta must lie in (1e-6, 1e6).
class ThermalContext {
 public:
  ThermalContext(double beta, HermitianOperator hamiltonian);

  double beta() const noexcept { return beta_; }
  const HermitianOperator& hamiltonian() const noexcept { return h_; }
  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }
  double log_partition() const noexcept { return log_z_; }
  // e^{−βH}/Z
  DensityOperator gibbs() const;
  // log τ = −βH − log Z, formed from the spectrum of H.
  Matrix log_gibbs() const;

 private:
  double beta_;
  HermitianOperator h_;
  SpectralDecomposition spectrum_;
  double log_z_;
};

// Tr(Hρ) − S(ρ)/β
double free_energy(const DensityOperator& rho, const ThermalContext& ctx);
// F(ρ) − F(τ), with F(τ) = −log Z/β.
double free_energy_excess(const DensityOperator& rho, const ThermalContext& ctx);
// S(ρ‖τ) in nats, using the analytic log τ.
double gibbs_relative_entropy(const DensityOperator& rho, const ThermalContext& ctx);
// S(ρ‖τ)/β
double max_extractable_work(const DensityOperator& rho, const ThermalContext& ctx);

// Dephasing onto the eigenspaces of the context Hamiltonian.
DensityOperator energy_dephased(const DensityOperator& rho, const ThermalContext& ctx);
// S(D(ρ)) − S(ρ)
double asymmetry(const DensityOperator& rho, const ThermalContext& ctx);
// S(ρ‖D(ρ))
double asymmetry_relative(const DensityOperator& rho, const ThermalContext& ctx);

struct FreeEnergySplit {
  double diagonal;  // ΔF(D(ρ))
  double coherent;  // A(ρ)/β
};
FreeEnergySplit free_energy_decomposition(const DensityOperator& rho, const ThermalContext& ctx);

struct MeasurementLoss {
  double work_measured;        // Σ p_i E_i − H(p)/β + log Z/β
  double loss;                 // <W>_max(ρ) − <W>_meas(ρ)
  double loss_from_asymmetry;  // S(ρ‖D(ρ))/β
  bool degenerate = false;
  std::vector<std::string> warnings;
};
// With a degenerate H the dephasing acts on eigenspace projectors and
// <W>_meas is taken as ΔF(D(ρ)); a DegenerateH warning is attached.
MeasurementLoss measurement_work_loss(const DensityOperator& rho, const ThermalContext& ctx);

// System S coupled to an initially thermal B by a joint unitary.
class BipartiteScenario {
 public:
  BipartiteScenario(HermitianOperator h_s, HermitianOperator h_b, DensityOperator rho_s, double beta,
                    UnitaryOperator u_sb);

  std::size_t dim_s() const noexcept { return h_s_.dim(); }
  std::size_t dim_b() const noexcept { return h_b_.dim(); }
  const HermitianOperator& h_s() const noexcept { return h_s_; }
  const HermitianOperator& h_b() const noexcept { return h_b_; }
  const DensityOperator& rho_s() const noexcept { return rho_s_; }
  const DensityOperator& rho_b() const noexcept { return rho_b_; }
  double beta() const noexcept { return beta_; }
  const UnitaryOperator& unitary() const noexcept { return u_; }

 private:
  HermitianOperator h_s_, h_b_;
  DensityOperator rho_s_;
  double beta_;
  UnitaryOperator u_;
  DensityOperator rho_b_;
};

struct BipartiteWorkReport {
  double work;                 // Tr(Hρ_SB) − Tr(Hρ'_SB)
  double work_general;         // free-energy right-hand side with τ_S
  double work_general_ii;      // F(ρ_S) − F(ρ'_S) − [S(ρ'_B‖τ_B) + I(ρ'_SB)]/β
  double system_athermality;   // S(ρ'_S‖τ_S)
  double mutual_information;   // I(ρ'_SB)
  double bath_athermality;     // S(ρ'_B‖τ_B)
  double max_work;             // <W>_max(ρ_S)
  double residual;             // |work − work_general|
  double residual_ii;          // |work − work_general_ii|
  bool bound_holds;            // work ≤ max_work + 1e-9
};
BipartiteWorkReport bipartite_work_identity(const BipartiteScenario& bs);

struct LocalDecompositionReport {
  double total;               // F(X_SB, H_S ⊗ I + I ⊗ H_B)
  double system;              // F(X_S, H_S)
  double bath;                // F(X_B, H_B)
  double mutual_information;  // I(X_SB)
  double residual;
};
LocalDecompositionReport local_free_energy_decomposition(const DensityOperator& x_sb,
                                                         std::pair<std::size_t, std::size_t> dims,
                                                         const HermitianOperator& h_s, const HermitianOperator& h_b,
                                                         double beta);

double mutual_information(const DensityOperator& x_sb, std::pair<std::size_t, std::size_t> dims);

struct ThermoCheck {
  std::string name;
  std::size_t draws;
  double worst;      // largest residual (or violation) seen
  double tolerance;
  bool passed;
};

// Randomized property runs over the identities above, seeded from `seed`.
std::vector<ThermoCheck> thermo_checks(std::uint64_t seed, std::size_t draws = 1000);

}  // namespace qwork

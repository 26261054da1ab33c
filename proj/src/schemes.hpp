#pragma once

#include <optional>
#include <vector>

#include "distribution.hpp"
#include "povm.hpp"
#include "random.hpp"
#include "scenario.hpp"

namespace qwork {

// Two projective energy measurements around U. Degenerate levels are
// handled through eigenspace projectors.
struct TpmResult {
  JointWorkTable table;
  WorkDistribution distribution;
};
TpmResult tpm(const Scenario& s);

// Analytic TPM POVM: Π_w = Σ_{(i,j): E'_j − E_i = w} Π_i T_j Π_i.
Povm tpm_povm(const Scenario& s);

// Ŵ = U†H'U − H and the spectral distribution of Ŵ on ρ.
struct WorkOperatorResult {
  Matrix work_operator;
  WorkDistribution distribution;
};
WorkOperatorResult work_operator(const Scenario& s);

// Full-counting-statistics quasi-distribution q(w), with atoms at
// E'_m − (E_n + E_n')/2. Throws SchemeError(ImaginaryResidue).
WorkDistribution fcs_quasiprob(const Scenario& s);
// Tr[U† e^{iuH'} U e^{−iuH/2} ρ e^{−iuH/2}]
Complex fcs_characteristic(const Scenario& s, double u);

// p_MH(k, m) = Re Tr[ρ Π_k T_m].
struct MargenauHillResult {
  JointWorkTable table;
  WorkDistribution distribution;
};
MargenauHillResult margenau_hill(const Scenario& s);

// Consistent-histories quasi-distribution on K+1 equally spaced grid points.
// Requires a driving protocol; throws SchemeError(TrajectoryBudgetExceeded)
// when d^(K+1) exceeds tol::kTrajectoryCap.
WorkDistribution consistent_histories(const Scenario& s, int steps);
// Same construction for the time-reversed process: reversed schedule,
// backward evolution Ũ(s) = U(τ−s)U(τ)†, initial state UρU†.
WorkDistribution consistent_histories_time_reversed(const Scenario& s, int steps);

// First measurement in the eigenbasis of ρ; the initial energy of each
// eigenvector is its expectation value <φ|H|φ>.
WorkDistribution state_dependent(const Scenario& s);

struct PureDecomposition {
  std::vector<double> weights;
  std::vector<std::vector<Complex>> states;

  Matrix reconstruct() const;
  static PureDecomposition eigen(const DensityOperator& rho);
  // Random ensemble for ρ: |ψ̃_j> = Σ_α V_jα √λ_α |φ_α> with V an
  // n_states × d isometry taken from a Haar unitary.
  static PureDecomposition random(const DensityOperator& rho, std::size_t n_states, Rng& rng);
};

// Atom <ψ_j|Ŵ|ψ_j> with weight p_j. Throws SchemeError(DecompositionMismatch).
WorkDistribution sub_ensemble(const Scenario& s, const PureDecomposition& decomposition);

struct CollectiveResult {
  Povm povm;  // d²-dimensional elements M^(ij)
  WorkDistribution distribution;
  double lambda = 0.0;
};
// Two-copy collective measurement. `lambda` empty selects lambda_max(s).
// Requires a non-degenerate H. Throws SchemeError(NotPositive).
CollectiveResult collective_two_copy(const Scenario& s, std::optional<double> lambda = std::nullopt);
// Largest λ ∈ [0, 1] keeping every M^(ij)_λ ⪰ −1e-10, by bisection to 1e-6.
double lambda_max(const Scenario& s);
// min eigenvalue over the blocks <i|T_j|i> I + λ T_j^off.
double collective_min_eigenvalue(const Scenario& s, double lambda);

}  // namespace qwork

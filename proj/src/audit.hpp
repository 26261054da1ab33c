#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "distribution.hpp"
#include "povm.hpp"
#include "random.hpp"
#include "scenario.hpp"

namespace qwork {

enum class Condition { C1_LinearPOVM, C2_TPMAgreement, C3_FirstLaw };
enum class VerdictStatus { Satisfied, Violated, LimitDependent, Inconclusive, OutOfScope };

std::string_view condition_name(Condition c);
std::string_view status_name(VerdictStatus s);

struct MixingWitness {
  Matrix rho2;  // the witness scenario holds ρ1
  double lambda;
};

struct RegimeResult {
  std::string regime;  // "strong" or "weak"
  double max_violation;
  bool within_limit;
};

struct ConditionVerdict {
  Condition condition = Condition::C1_LinearPOVM;
  VerdictStatus status = VerdictStatus::Inconclusive;
  double max_violation = 0.0;
  std::size_t samples = 0;
  std::optional<Scenario> witness;
  std::optional<MixingWitness> mixing;
  std::string failure_mode;  // C1: linearity, negativity, povm-positivity
  std::vector<RegimeResult> regimes;
  std::vector<std::string> notes;
};

struct AuditConfig {
  std::size_t dim = 2;
  std::size_t samples = 500;
  std::uint64_t seed = 7;
};

enum class RhoKind { Diagonal, Coherent, Pure };

// Random GUE H and H', a Haar U (or, with `protocol`, a linear ramp from H
// to H' over [0, 1]) and ρ of the requested kind.
Scenario random_audit_scenario(std::size_t dim, Rng& rng, RhoKind kind, bool protocol = false,
                               int steps_per_segment = 64);

ConditionVerdict check_c1(SchemeId scheme, const AuditConfig& cfg);
ConditionVerdict check_c2(SchemeId scheme, const AuditConfig& cfg);
ConditionVerdict check_c3(SchemeId scheme, const AuditConfig& cfg);

// |mean − ΔE| of one scheme on one scenario (consistent histories uses its
// extrapolated continuum mean).
double c3_gap(SchemeId scheme, const Scenario& s);
// Continuum limit of the consistent-histories mean from a fit over several K.
double consistent_histories_continuum_mean(const Scenario& s);

using SchemeFunction = std::function<WorkDistribution(const Scenario&)>;

// Tomographic POVM from d² informationally complete probe states, checked on
// 100 held-out random states. Throws SchemeError(NotLinear) when the
// held-out residual exceeds 1e-6.
Povm reconstruct_povm(const SchemeFunction& scheme, const Scenario& base, std::uint64_t seed = 0);
Povm reconstruct_povm(SchemeId scheme, const Scenario& base, std::uint64_t seed = 0);

// The d² probe states used by reconstruct_povm, in the computational basis.
std::vector<Matrix> informationally_complete_states(std::size_t dim);

struct NogoReport {
  std::size_t dim;
  std::uint64_t seed;
  double povm_vs_tpm;          // ‖reconstructed − analytic TPM POVM‖_max on a random instance
  double off_diagonal_weight;  // ‖Π_w − D(Π_w)‖_max in the H basis
  double diagonal_c2_residual; // TV to TPM for diagonal states under the forced POVM
  double hadamard_c3_gap;      // |Σ w Tr(ρΠ_w) − ΔE| on the coherent instance
  Scenario random_instance;
  Scenario hadamard_instance;
  ConditionVerdict tpm_c1, tpm_c2, tpm_c3;
};
NogoReport demonstrate_nogo(std::size_t dim = 2, std::uint64_t seed = 7, std::size_t samples = 100);

// ρ = |+><+|, H = H' = σ_z, U = Hadamard.
Scenario hadamard_scenario();

struct CollectiveAdaptedReport {
  std::size_t dim;
  std::size_t samples;
  double min_povm_eigenvalue;
  double max_completeness_defect;
  double max_c2_distance;
  std::size_t improved = 0;   // |collective gap| < |TPM gap|
  std::size_t tied = 0;
  std::size_t worse = 0;
  std::size_t strict_expected = 0;  // samples with λ_max > 0, nonzero off-diagonal part and TPM gap
  std::size_t strict_observed = 0;
  double mean_lambda = 0.0;
  bool passed() const;
};
CollectiveAdaptedReport check_collective_adapted(std::size_t dim, std::size_t samples, std::uint64_t seed);

struct ContextualityWitness {
  Scenario scenario;
  std::size_t k, m;
  double value;
  std::string label;
  std::size_t evaluations;
};
std::optional<ContextualityWitness> contextuality_witness(std::size_t budget, std::uint64_t seed);
// Pure qubit ρ and SU(2) unitary from five angles, H = H' = σ_z.
Scenario witness_scenario(const std::vector<double>& params);

struct Table1Row {
  std::string scheme;
  std::optional<SchemeId> id;
  ConditionVerdict c1, c2, c3;
  std::vector<std::string> notes;
  bool out_of_scope = false;
};

struct Table1Report {
  AuditConfig config;
  std::vector<Table1Row> rows;           // the eight implemented rows, then out-of-scope rows
  std::vector<Table1Row> supplementary;  // sub-ensemble and collective
  std::optional<CollectiveAdaptedReport> collective_adapted;
  double seconds = 0.0;
};

// The eight implemented rows in display order.
std::vector<SchemeId> table1_schemes();
Table1Report build_table1(const AuditConfig& cfg, const std::vector<SchemeId>& schemes = table1_schemes(),
                          bool supplementary = true);

// Expected (C1, C2, C3) for each implemented row.
std::optional<std::array<VerdictStatus, 3>> expected_table1_pattern(SchemeId scheme);

}  // namespace qwork

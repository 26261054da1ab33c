#pragma once

#include <cstddef>
#include <vector>

#include "distribution.hpp"
#include "scenario.hpp"

namespace qwork {

struct PointerGrid {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t n_points = 4096;
};

// Gaussian pointer with initial position spread `spread` coupled with
// strength `coupling`. Positions are read as x = g (E_n − E'_m), so the
// work estimate is w = −x/g with resolution spread/coupling.
struct PointerConfig {
  double coupling = 1.0;
  double spread = 1.0;
  PointerGrid grid;

  double readout_width() const { return spread / coupling; }
  void validate() const;
  // Grid covering every shifted center of `s` with an 8·spread margin.
  static PointerConfig covering(const Scenario& s, double coupling, double spread, std::size_t n_points = 4096);
};

// One term c·N(w; center, width²) of the readout density in work units.
struct GaussianComponent {
  double center;
  double coefficient;
};

struct PointerReadout {
  std::vector<double> x;
  std::vector<double> density_x;
  std::vector<double> work;       // ascending, w = −x/g
  std::vector<double> density_w;  // g · p(x)
  std::vector<GaussianComponent> components;
  double width = 0.0;             // common std of the components, in work units

  // Trapezoid rule over the position grid.
  double normalization() const;
  double mean_work() const;
  // Exact mass of the work density inside [lo, hi].
  double mass_between(double lo, double hi) const;
};

// Closed-form pointer state after V, U, V' and a position readout. Throws
// SchemeError(GridTooNarrow) when some center ± 6·spread leaves the grid.
PointerReadout gaussian_meter(const Scenario& s, const PointerConfig& cfg);

// Readout density as a Gaussian mixture (before evaluation on a grid).
std::vector<GaussianComponent> gaussian_meter_components(const Scenario& s, double coupling, double spread);

// L¹ distance on the grid between the meter density and fcs_quasiprob(s)
// smeared by the same Gaussian resolution.
double gaussian_meter_vs_fcs(const Scenario& s, const PointerConfig& cfg);

// p(E'_m)·<X>_{|E'_m}/g for m over the final levels, after a first
// interaction coupled to the initial level k only.
std::vector<double> weak_value_protocol(const Scenario& s, std::size_t k, const PointerConfig& cfg);

// Rows of weak_value_protocol for every initial level.
JointWorkTable post_selection_table(const Scenario& s, const PointerConfig& cfg);
WorkDistribution post_selection(const Scenario& s, const PointerConfig& cfg);

// Component mixture as a (quasi) distribution over component centers.
WorkDistribution gaussian_pointer_distribution(const Scenario& s, const PointerConfig& cfg);

// Smallest gap between distinct TPM work values and between energy levels;
// the largest energy spread. Used to place the strong and weak regimes.
struct PointerScales {
  double min_gap;
  double max_spread;
};
PointerScales pointer_scales(const Scenario& s);

// Coupling regimes: strong means g·min_gap/s = 20, weak means
// s/g = 50·max_spread (spread fixed to 1).
PointerConfig strong_regime(const Scenario& s);
PointerConfig weak_regime(const Scenario& s);

// Gaussian mass of the readout around each TPM atom inside ±3√2·width,
// clipped at midpoints between neighbouring atoms.
std::vector<double> windowed_masses(const PointerReadout& readout, const std::vector<double>& atoms);

double normal_pdf(double x, double mean, double sd);

// L¹ distances of the post-selection table to the TPM joint table and to the
// Margenau-Hill table at one s/g.
struct SweepPoint {
  double width;  // s/g
  double coupling;
  double distance_tpm;
  double distance_mh;
};

struct PointerSweep {
  std::vector<SweepPoint> points;  // strong to weak, logarithmic in s/g
  bool monotone;                   // distance_tpm nondecreasing and distance_mh nonincreasing
};

// Errors of the pointer schemes against their strong and weak limits.
struct PointerLimits {
  double strong_mass_error;  // max |windowed readout mass − TPM weight|
  double weak_mean_gap;      // |readout mean − ΔE|
  double weak_fcs_distance;  // gaussian_meter_vs_fcs in the weak regime
  double strong_row_error;   // max |post-selection − TPM joint entry|
  double weak_row_error;     // max |post-selection − Margenau-Hill entry|
};
PointerLimits pointer_limits(const Scenario& s);

// Spread fixed to 1; s/g runs from the strong to the weak regime width.
PointerSweep pointer_sweep(const Scenario& s, std::size_t n_points = 8);

}  // namespace qwork

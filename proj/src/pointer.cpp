#include "pointer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "schemes.hpp"
#include "tolerances.hpp"

namespace qwork {

double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

namespace {

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double mixture_at(const std::vector<GaussianComponent>& components, double width, double w) {
  double p = 0.0;
  for (const auto& c : components) p += c.coefficient * normal_pdf(w, c.center, width);
  return p;
}

}  // namespace

void PointerConfig::validate() const {
  if (!(coupling > 0.0) || !std::isfinite(coupling)) throw ArgumentError("pointer coupling must be positive");
  if (!(spread > 0.0) || !std::isfinite(spread)) throw ArgumentError("pointer spread must be positive");
  if (grid.n_points < 256) throw ArgumentError("pointer grid needs at least 256 points");
  if (!(grid.x_max > grid.x_min)) throw ArgumentError("pointer grid must have x_max > x_min");
}

std::vector<GaussianComponent> gaussian_meter_components(const Scenario& s, double coupling, double spread) {
  const auto& levels = s.initial_levels();
  const auto& finals = s.final_levels();
  const auto& T = s.heisenberg_final_projectors();
  const double ratio = coupling / spread;
  std::vector<GaussianComponent> out;
  for (std::size_t a = 0; a < levels.size(); ++a)
    for (std::size_t b = a; b < levels.size(); ++b) {
      const double gap = levels[a].value - levels[b].value;
      const double damping = std::exp(-ratio * ratio * gap * gap / 8.0);
      const double multiplicity = a == b ? 1.0 : 2.0;
      const Matrix block = levels[a].projector * s.rho().matrix() * levels[b].projector;
      for (std::size_t m = 0; m < finals.size(); ++m) {
        const double c = multiplicity * damping * trace_product(block, T[m]).real();
        out.push_back({finals[m].value - 0.5 * (levels[a].value + levels[b].value), c});
      }
    }
  return out;
}

PointerConfig PointerConfig::covering(const Scenario& s, double coupling, double spread, std::size_t n_points) {
  PointerConfig cfg;
  cfg.coupling = coupling;
  cfg.spread = spread;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : gaussian_meter_components(s, coupling, spread)) {
    lo = std::min(lo, -coupling * c.center);
    hi = std::max(hi, -coupling * c.center);
  }
  cfg.grid = {lo - 8.0 * spread, hi + 8.0 * spread, n_points};
  cfg.validate();
  return cfg;
}

PointerReadout gaussian_meter(const Scenario& s, const PointerConfig& cfg) {
  cfg.validate();
  const double g = cfg.coupling;
  PointerReadout r;
  r.components = gaussian_meter_components(s, g, cfg.spread);
  r.width = cfg.readout_width();
  for (const auto& c : r.components) {
    const double x = -g * c.center;
    if (x - 6.0 * cfg.spread < cfg.grid.x_min || x + 6.0 * cfg.spread > cfg.grid.x_max)
      throw SchemeError("GridTooNarrow", "pointer center " + std::to_string(x) + " ± 6s leaves [" +
                                             std::to_string(cfg.grid.x_min) + ", " + std::to_string(cfg.grid.x_max) + "]");
  }
  const std::size_t n = cfg.grid.n_points;
  const double dx = (cfg.grid.x_max - cfg.grid.x_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = cfg.grid.x_min + dx * static_cast<double>(i);
    double p = 0.0;
    for (const auto& c : r.components) p += c.coefficient * normal_pdf(x, -g * c.center, cfg.spread);
    r.x.push_back(x);
    r.density_x.push_back(p);
  }
  for (std::size_t i = n; i-- > 0;) {
    r.work.push_back(-r.x[i] / g);
    r.density_w.push_back(g * r.density_x[i]);
  }
  return r;
}

double PointerReadout::normalization() const { return trapezoid(x, density_x); }

double PointerReadout::mean_work() const {
  std::vector<double> wp(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) wp[i] = work[i] * density_w[i];
  return trapezoid(work, wp);
}

double PointerReadout::mass_between(double lo, double hi) const {
  double m = 0.0;
  for (const auto& c : components) m += c.coefficient * (normal_cdf(hi, c.center, width) - normal_cdf(lo, c.center, width));
  return m;
}

double gaussian_meter_vs_fcs(const Scenario& s, const PointerConfig& cfg) {
  const auto readout = gaussian_meter(s, cfg);
  std::vector<GaussianComponent> smeared;
  for (const auto& a : fcs_quasiprob(s).atoms) smeared.push_back({a.work, a.weight});
  std::vector<double> diff(readout.work.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = std::abs(readout.density_w[i] - mixture_at(smeared, readout.width, readout.work[i]));
  return trapezoid(readout.work, diff);
}

std::vector<double> weak_value_protocol(const Scenario& s, std::size_t k, const PointerConfig& cfg) {
  cfg.validate();
  const auto& levels = s.initial_levels();
  if (k >= levels.size()) throw ArgumentError("initial level index " + std::to_string(k) + " out of range");
  const Matrix& pi = levels[k].projector;
  const Matrix rest = Matrix::identity(s.dim()) - pi;
  const Matrix kept = pi * s.rho().matrix() * pi;
  const Matrix cross = pi * s.rho().matrix() * rest;
  const double ratio = cfg.coupling / cfg.spread;
  const double overlap = std::exp(-ratio * ratio / 8.0);
  std::vector<double> row;
  for (const auto& t : s.heisenberg_final_projectors())
    row.push_back(trace_product(t, kept).real() + overlap * trace_product(t, cross).real());
  return row;
}

JointWorkTable post_selection_table(const Scenario& s, const PointerConfig& cfg) {
  JointWorkTable t;
  for (const auto& l : s.initial_levels()) t.initial_energies.push_back(l.value);
  for (const auto& l : s.final_levels()) t.final_energies.push_back(l.value);
  for (std::size_t k = 0; k < t.initial_energies.size(); ++k) {
    t.weights.push_back(weak_value_protocol(s, k, cfg));
    std::vector<double> work;
    for (double e : t.final_energies) work.push_back(e - t.initial_energies[k]);
    t.work.push_back(std::move(work));
  }
  return t;
}

WorkDistribution post_selection(const Scenario& s, const PointerConfig& cfg) {
  auto d = post_selection_table(s, cfg).to_distribution(SchemeId::PostSelection, true);
  d.notes.push_back("coupling/spread = " + std::to_string(cfg.coupling / cfg.spread));
  return d;
}

WorkDistribution gaussian_pointer_distribution(const Scenario& s, const PointerConfig& cfg) {
  cfg.validate();
  std::vector<WorkAtom> raw;
  for (const auto& c : gaussian_meter_components(s, cfg.coupling, cfg.spread)) raw.push_back({c.center, c.coefficient});
  auto d = WorkDistribution::build(std::move(raw), SchemeId::GaussianPointer, true);
  d.notes.push_back("Gaussian mixture centers; each atom is smeared with sd = " + std::to_string(cfg.readout_width()));
  return d;
}

PointerScales pointer_scales(const Scenario& s) {
  std::vector<double> values;
  for (const auto& a : tpm(s).table.work)
    for (double w : a) values.push_back(w);
  std::sort(values.begin(), values.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] - values[i - 1] >= tol::kWorkMerge) gap = std::min(gap, values[i] - values[i - 1]);
  const auto& levels = s.initial_levels();
  for (std::size_t i = 1; i < levels.size(); ++i) gap = std::min(gap, levels[i].value - levels[i - 1].value);
  if (!std::isfinite(gap)) gap = 1.0;

  double spread = std::max(std::abs(values.front()), std::abs(values.back()));
  spread = std::max(spread, levels.back().value - levels.front().value);
  spread = std::max(spread, s.final_levels().back().value - s.final_levels().front().value);
  if (spread <= 0.0) spread = 1.0;
  return {gap, spread};
}

PointerConfig strong_regime(const Scenario& s) {
  const auto scales = pointer_scales(s);
  return PointerConfig::covering(s, tol::kPointerStrong / scales.min_gap, 1.0);
}

PointerConfig weak_regime(const Scenario& s) {
  const auto scales = pointer_scales(s);
  return PointerConfig::covering(s, 1.0 / (tol::kPointerWeak * scales.max_spread), 1.0);
}

std::vector<double> windowed_masses(const PointerReadout& readout, const std::vector<double>& atoms) {
  const double half = 3.0 * std::numbers::sqrt2 * readout.width;
  std::vector<double> masses;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double lo = atoms[i] - half, hi = atoms[i] + half;
    if (i > 0) lo = std::max(lo, 0.5 * (atoms[i - 1] + atoms[i]));
    if (i + 1 < atoms.size()) hi = std::min(hi, 0.5 * (atoms[i] + atoms[i + 1]));
    masses.push_back(readout.mass_between(lo, hi));
  }
  return masses;
}

PointerLimits pointer_limits(const Scenario& s) {
  const auto strong = strong_regime(s);
  const auto weak = weak_regime(s);
  PointerLimits out{};
  const auto reference = tpm(s);
  std::vector<double> atoms;
  for (const auto& a : reference.distribution.atoms) atoms.push_back(a.work);
  const auto masses = windowed_masses(gaussian_meter(s, strong), atoms);
  for (std::size_t i = 0; i < atoms.size(); ++i)
    out.strong_mass_error = std::max(out.strong_mass_error, std::abs(masses[i] - reference.distribution.atoms[i].weight));
  out.weak_mean_gap = std::abs(gaussian_meter(s, weak).mean_work() - scenario_mean_energy_change(s));
  out.weak_fcs_distance = gaussian_meter_vs_fcs(s, weak);
  const auto mh = margenau_hill(s).table;
  const auto strong_rows = post_selection_table(s, strong);
  const auto weak_rows = post_selection_table(s, weak);
  for (std::size_t k = 0; k < strong_rows.weights.size(); ++k)
    for (std::size_t m = 0; m < strong_rows.weights[k].size(); ++m) {
      out.strong_row_error = std::max(out.strong_row_error, std::abs(strong_rows.weights[k][m] - reference.table.weights[k][m]));
      out.weak_row_error = std::max(out.weak_row_error, std::abs(weak_rows.weights[k][m] - mh.weights[k][m]));
    }
  return out;
}

PointerSweep pointer_sweep(const Scenario& s, std::size_t n_points) {
  if (n_points < 2) throw ArgumentError("a pointer sweep needs at least 2 points");
  const double lo = strong_regime(s).readout_width();
  const double hi = weak_regime(s).readout_width();
  const auto reference = tpm(s).table;
  const auto mh = margenau_hill(s).table;
  auto l1 = [](const JointWorkTable& a, const JointWorkTable& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.weights.size(); ++i)
      for (std::size_t j = 0; j < a.weights[i].size(); ++j) d += std::abs(a.weights[i][j] - b.weights[i][j]);
    return d;
  };
  PointerSweep out{{}, true};
  for (std::size_t i = 0; i < n_points; ++i) {
    const double width = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n_points - 1));
    const auto table = post_selection_table(s, PointerConfig::covering(s, 1.0 / width, 1.0));
    out.points.push_back({width, 1.0 / width, l1(table, reference), l1(table, mh)});
  }
  for (std::size_t i = 1; i < out.points.size(); ++i)
    if (out.points[i].distance_tpm < out.points[i - 1].distance_tpm ||
        out.points[i].distance_mh > out.points[i - 1].distance_mh)
      out.monotone = false;
  return out;
}

}  // namespace qwork

#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"
#include "json_io.hpp"
#include "tolerances.hpp"

namespace qwork {

using json_io::json;

namespace {

template <class T>
T validated(const Matrix& m, const std::string& path) {
  try {
    return T(m);
  } catch (const ValidationError& e) {
    throw ValidationError(e.code(), e.detail(), path);
  }
}

Matrix step_factor(const Matrix& h_mid, double dt) { return evolution_operator(eig_hermitian(h_mid), dt); }

}  // namespace

DrivingProtocol::DrivingProtocol(std::vector<Breakpoint> breakpoints, int steps_per_segment)
    : breakpoints_(std::move(breakpoints)), steps_per_segment_(steps_per_segment) {
  const std::string path = "evolution.breakpoints";
  if (breakpoints_.size() < 2) throw ValidationError("InvalidProtocol", "need at least two breakpoints", path);
  if (steps_per_segment_ < 1) throw ValidationError("InvalidProtocol", "steps_per_segment must be positive",
                                                    "evolution.steps_per_segment");
  if (breakpoints_.front().time != 0.0) throw ValidationError("InvalidProtocol", "first time must be 0", path + "[0].t");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    const std::string item = path + "[" + std::to_string(i) + "]";
    if (!(breakpoints_[i].time > breakpoints_[i - 1].time))
      throw ValidationError("InvalidProtocol", "times must be strictly increasing", item + ".t");
    if (breakpoints_[i].hamiltonian.dim() != breakpoints_[0].hamiltonian.dim())
      throw ValidationError("DimMismatch", "Hamiltonian dimension differs from breakpoint 0", item + ".H");
  }
}

std::size_t DrivingProtocol::segment_of(double t) const {
  const std::size_t segments = breakpoints_.size() - 1;
  std::size_t s = 0;
  while (s + 1 < segments && t >= breakpoints_[s + 1].time) ++s;
  return s;
}

Matrix DrivingProtocol::hamiltonian_at(double t) const {
  const std::size_t s = segment_of(t);
  const auto& a = breakpoints_[s];
  const auto& b = breakpoints_[s + 1];
  const double x = (t - a.time) / (b.time - a.time);
  return a.hamiltonian.matrix() * Complex(1.0 - x) + b.hamiltonian.matrix() * Complex(x);
}

Matrix DrivingProtocol::derivative_at(double t) const {
  auto slope = [&](std::size_t s) {
    const auto& a = breakpoints_[s];
    const auto& b = breakpoints_[s + 1];
    return (b.hamiltonian.matrix() - a.hamiltonian.matrix()) * Complex(1.0 / (b.time - a.time));
  };
  const std::size_t segments = breakpoints_.size() - 1;
  for (std::size_t i = 1; i < segments; ++i)
    if (t == breakpoints_[i].time) return (slope(i - 1) + slope(i)) * Complex(0.5);
  return slope(segment_of(t));
}

CompiledEvolution compile_unitary(const DrivingProtocol& protocol) {
  const std::size_t n = protocol.dim();
  CompiledEvolution out;
  Matrix u = Matrix::identity(n);
  out.trajectory.emplace_back(0.0, u);
  const auto& bps = protocol.breakpoints();
  for (std::size_t s = 0; s + 1 < bps.size(); ++s) {
    const double t0 = bps[s].time, t1 = bps[s + 1].time;
    const int steps = protocol.steps_per_segment();
    const double dt = (t1 - t0) / steps;
    for (int k = 0; k < steps; ++k) {
      const double mid = t0 + (k + 0.5) * dt;
      u = step_factor(protocol.hamiltonian_at(mid), dt) * u;
      out.trajectory.emplace_back(k + 1 == steps ? t1 : t0 + (k + 1) * dt, u);
    }
  }
  out.unitary = u;
  return out;
}

Matrix propagate(const DrivingProtocol& protocol, double t0, double t1) {
  const auto& bps = protocol.breakpoints();
  Matrix u = Matrix::identity(protocol.dim());
  if (t1 <= t0) return u;
  for (std::size_t s = 0; s + 1 < bps.size(); ++s) {
    const double a = std::max(t0, bps[s].time);
    const double b = std::min(t1, bps[s + 1].time);
    if (b <= a) continue;
    const double seg = bps[s + 1].time - bps[s].time;
    const double fractional = protocol.steps_per_segment() * (b - a) / seg;
    const int steps = std::max(1, static_cast<int>(std::ceil(fractional - 1e-9)));
    const double dt = (b - a) / steps;
    for (int k = 0; k < steps; ++k) {
      const double mid = a + (k + 0.5) * dt;
      u = step_factor(protocol.hamiltonian_at(mid), dt) * u;
    }
  }
  return u;
}

std::vector<Matrix> unitaries_at(const DrivingProtocol& protocol, std::span<const double> times) {
  std::vector<Matrix> out;
  out.reserve(times.size());
  Matrix u = Matrix::identity(protocol.dim());
  double previous = 0.0;
  for (double t : times) {
    u = propagate(protocol, previous, t) * u;
    out.push_back(u);
    previous = t;
  }
  return out;
}

Scenario::Scenario(std::string label, HermitianOperator h, HermitianOperator h_final, Evolution evolution,
                   DensityOperator rho)
    : label_(std::move(label)),
      h_(std::move(h)),
      h_final_(std::move(h_final)),
      evolution_(std::move(evolution)),
      rho_(std::move(rho)) {
  const std::size_t d = h_.dim();
  if (h_final_.dim() != d) throw ValidationError("DimMismatch", "H_final dimension differs from H", "H_final");
  if (rho_.dim() != d) throw ValidationError("DimMismatch", "rho dimension differs from H", "rho");

  auto cache = std::make_shared<Cache>();
  if (const auto* u = std::get_if<UnitaryOperator>(&evolution_)) {
    if (u->dim() != d) throw ValidationError("DimMismatch", "U dimension differs from H", "evolution.U");
    cache->unitary = u->matrix();
  } else {
    const auto& p = std::get<DrivingProtocol>(evolution_);
    if (p.dim() != d)
      throw ValidationError("DimMismatch", "protocol dimension differs from H", "evolution.breakpoints");
    if (max_abs_diff(p.breakpoints().front().hamiltonian.matrix(), h_.matrix()) > 1e-10)
      throw ValidationError("ProtocolMismatch", "first breakpoint Hamiltonian differs from H",
                            "evolution.breakpoints[0].H");
    if (max_abs_diff(p.breakpoints().back().hamiltonian.matrix(), h_final_.matrix()) > 1e-10)
      throw ValidationError("ProtocolMismatch", "last breakpoint Hamiltonian differs from H_final",
                            "evolution.breakpoints[" + std::to_string(p.breakpoints().size() - 1) + "].H");
    cache->unitary = UnitaryOperator(compile_unitary(p).unitary).matrix();
  }
  cache->h_spectrum = eig_hermitian(h_);
  cache->h_final_spectrum = eig_hermitian(h_final_);
  cache->h_levels = cache->h_spectrum.eigenspaces(tol::kDegeneracyGap);
  cache->h_final_levels = cache->h_final_spectrum.eigenspaces(tol::kDegeneracyGap);
  const Matrix u_dag = cache->unitary.adjoint();
  for (const auto& level : cache->h_final_levels) cache->t_projectors.push_back(u_dag * level.projector * cache->unitary);
  cache_ = std::move(cache);
}

Scenario::Scenario(std::string label, HermitianOperator h, HermitianOperator h_final, Evolution evolution,
                   DensityOperator rho, std::shared_ptr<const Cache> cache)
    : label_(std::move(label)),
      h_(std::move(h)),
      h_final_(std::move(h_final)),
      evolution_(std::move(evolution)),
      rho_(std::move(rho)),
      cache_(std::move(cache)) {}

Scenario Scenario::with_rho(DensityOperator rho) const {
  if (rho.dim() != dim()) throw ValidationError("DimMismatch", "rho dimension differs from H", "rho");
  return Scenario(label_, h_, h_final_, evolution_, std::move(rho), cache_);
}

Scenario Scenario::with_label(std::string label) const {
  return Scenario(std::move(label), h_, h_final_, evolution_, rho_, cache_);
}

double scenario_mean_energy_change(const Scenario& s) {
  const Matrix& u = s.unitary();
  const Matrix evolved = u * s.rho().matrix() * u.adjoint();
  return trace_product(evolved, s.final_hamiltonian().matrix()).real() -
         trace_product(s.rho().matrix(), s.hamiltonian().matrix()).real();
}

namespace {

Matrix required_matrix(const json& doc, const char* key, const std::string& path) {
  if (!doc.contains(key)) throw ParseError("missing field", path);
  return json_io::matrix_from_json(doc.at(key), path);
}

}  // namespace

Scenario parse_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
    throw ParseError("expected a positive integer", "dim");
  const auto dim = static_cast<std::size_t>(doc["dim"].get<long long>());
  std::string label;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw ParseError("expected a string", "label");
    label = doc["label"].get<std::string>();
  }

  auto check_dim = [dim](const Matrix& m, const std::string& path) {
    if (m.rows() != dim || m.cols() != dim)
      throw ValidationError("DimMismatch",
                            "expected " + std::to_string(dim) + "x" + std::to_string(dim) + ", got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()),
                            path);
    return m;
  };

  auto h = validated<HermitianOperator>(check_dim(required_matrix(doc, "H", "H"), "H"), "H");
  auto h_final = validated<HermitianOperator>(check_dim(required_matrix(doc, "H_final", "H_final"), "H_final"), "H_final");

  if (!doc.contains("evolution") || !doc["evolution"].is_object()) throw ParseError("expected an object", "evolution");
  const json& ev = doc["evolution"];
  if (!ev.contains("type") || !ev["type"].is_string()) throw ParseError("expected \"unitary\" or \"protocol\"", "evolution.type");
  const std::string type = ev["type"].get<std::string>();

  auto build = [&](Evolution evolution) {
    auto rho = validated<DensityOperator>(check_dim(required_matrix(doc, "rho", "rho"), "rho"), "rho");
    return Scenario(label, std::move(h), std::move(h_final), std::move(evolution), std::move(rho));
  };

  if (type == "unitary") {
    auto u = validated<UnitaryOperator>(check_dim(required_matrix(ev, "U", "evolution.U"), "evolution.U"), "evolution.U");
    return build(std::move(u));
  }
  if (type != "protocol") throw ParseError("expected \"unitary\" or \"protocol\"", "evolution.type");

  if (!ev.contains("breakpoints") || !ev["breakpoints"].is_array())
    throw ParseError("expected an array", "evolution.breakpoints");
  std::vector<DrivingProtocol::Breakpoint> bps;
  for (std::size_t i = 0; i < ev["breakpoints"].size(); ++i) {
    const std::string item = "evolution.breakpoints[" + std::to_string(i) + "]";
    const json& bp = ev["breakpoints"][i];
    if (!bp.is_object()) throw ParseError("expected an object", item);
    if (!bp.contains("t") || !bp["t"].is_number()) throw ParseError("expected a number", item + ".t");
    auto hb = validated<HermitianOperator>(check_dim(required_matrix(bp, "H", item + ".H"), item + ".H"), item + ".H");
    bps.push_back({bp["t"].get<double>(), std::move(hb)});
  }
  int steps = DrivingProtocol::kDefaultStepsPerSegment;
  if (ev.contains("steps_per_segment")) {
    if (!ev["steps_per_segment"].is_number_integer()) throw ParseError("expected an integer", "evolution.steps_per_segment");
    steps = ev["steps_per_segment"].get<int>();
  }
  return build(DrivingProtocol(std::move(bps), steps));
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["dim"] = s.dim();
  doc["label"] = s.label();
  doc["H"] = json_io::matrix_to_json(s.hamiltonian().matrix());
  doc["H_final"] = json_io::matrix_to_json(s.final_hamiltonian().matrix());
  json ev;
  if (const auto* u = std::get_if<UnitaryOperator>(&s.evolution())) {
    ev["type"] = "unitary";
    ev["U"] = json_io::matrix_to_json(u->matrix());
  } else {
    const auto& p = std::get<DrivingProtocol>(s.evolution());
    ev["type"] = "protocol";
    json bps = json::array();
    for (const auto& bp : p.breakpoints()) {
      json item;
      item["t"] = bp.time;
      item["H"] = json_io::matrix_to_json(bp.hamiltonian.matrix());
      bps.push_back(std::move(item));
    }
    ev["breakpoints"] = std::move(bps);
    ev["steps_per_segment"] = p.steps_per_segment();
  }
  doc["evolution"] = std::move(ev);
  doc["rho"] = json_io::matrix_to_json(s.rho().matrix());
  return doc.dump(2);
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace qwork

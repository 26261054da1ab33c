#include "thermo.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "random.hpp"
#include "tolerances.hpp"

namespace qwork {

ThermalContext::ThermalContext(double beta, HermitianOperator hamiltonian)
    : beta_(beta), h_(std::move(hamiltonian)), spectrum_(eig_hermitian(h_)) {
  if (!std::isfinite(beta) || beta <= tol::kBetaMin || beta >= tol::kBetaMax)
    throw ArgumentError("beta must lie in (1e-6, 1e6), got " + std::to_string(beta));
  const double e0 = spectrum_.eigenvalues.front();
  double sum = 0.0;
  for (double e : spectrum_.eigenvalues) sum += std::exp(-beta_ * (e - e0));
  log_z_ = -beta_ * e0 + std::log(sum);
}

DensityOperator ThermalContext::gibbs() const {
  return DensityOperator(spectrum_.apply([this](double e) { return Complex(std::exp(-beta_ * e - log_z_)); }));
}

Matrix ThermalContext::log_gibbs() const {
  return spectrum_.apply([this](double e) { return Complex(-beta_ * e - log_z_); });
}

namespace {

void require_dim(const DensityOperator& rho, const ThermalContext& ctx) {
  if (rho.dim() != ctx.hamiltonian().dim())
    throw DimensionMismatch("state dimension " + std::to_string(rho.dim()) + " differs from Hamiltonian dimension " +
                            std::to_string(ctx.hamiltonian().dim()));
}

double gibbs_relative_entropy(const DensityOperator& rho, const Matrix& log_tau) {
  const auto spectrum = eig_hermitian(rho.matrix());
  double rho_log_rho = 0.0;
  for (double p : spectrum.eigenvalues)
    if (p > tol::kEigFloor) rho_log_rho += p * std::log(p);
  return rho_log_rho - trace_product(rho.matrix(), log_tau).real();
}

}  // namespace

double free_energy(const DensityOperator& rho, const ThermalContext& ctx) {
  require_dim(rho, ctx);
  return trace_product(ctx.hamiltonian().matrix(), rho.matrix()).real() - von_neumann_entropy(rho) / ctx.beta();
}

double free_energy_excess(const DensityOperator& rho, const ThermalContext& ctx) {
  return free_energy(rho, ctx) + ctx.log_partition() / ctx.beta();
}

double gibbs_relative_entropy(const DensityOperator& rho, const ThermalContext& ctx) {
  require_dim(rho, ctx);
  return gibbs_relative_entropy(rho, ctx.log_gibbs());
}

double max_extractable_work(const DensityOperator& rho, const ThermalContext& ctx) {
  return gibbs_relative_entropy(rho, ctx) / ctx.beta();
}

DensityOperator energy_dephased(const DensityOperator& rho, const ThermalContext& ctx) {
  require_dim(rho, ctx);
  return dephase(rho, ctx.spectrum());
}

double asymmetry(const DensityOperator& rho, const ThermalContext& ctx) {
  return von_neumann_entropy(energy_dephased(rho, ctx)) - von_neumann_entropy(rho);
}

double asymmetry_relative(const DensityOperator& rho, const ThermalContext& ctx) {
  return relative_entropy(rho, energy_dephased(rho, ctx));
}

FreeEnergySplit free_energy_decomposition(const DensityOperator& rho, const ThermalContext& ctx) {
  return {free_energy_excess(energy_dephased(rho, ctx), ctx), asymmetry(rho, ctx) / ctx.beta()};
}

MeasurementLoss measurement_work_loss(const DensityOperator& rho, const ThermalContext& ctx) {
  require_dim(rho, ctx);
  MeasurementLoss out;
  const auto levels = ctx.spectrum().eigenspaces(tol::kDegeneracyGap);
  out.degenerate = levels.size() < ctx.hamiltonian().dim();
  if (out.degenerate) {
    out.warnings.push_back("DegenerateH: dephasing onto eigenspace projectors");
    out.work_measured = free_energy_excess(energy_dephased(rho, ctx), ctx);
  } else {
    std::vector<double> p;
    double energy = 0.0;
    for (const auto& level : levels) {
      p.push_back(trace_product(level.projector, rho.matrix()).real());
      energy += p.back() * level.value;
    }
    out.work_measured = energy - shannon_entropy(p) / ctx.beta() + ctx.log_partition() / ctx.beta();
  }
  out.loss = max_extractable_work(rho, ctx) - out.work_measured;
  out.loss_from_asymmetry = asymmetry_relative(rho, ctx) / ctx.beta();
  return out;
}

BipartiteScenario::BipartiteScenario(HermitianOperator h_s, HermitianOperator h_b, DensityOperator rho_s, double beta,
                                     UnitaryOperator u_sb)
    : h_s_(std::move(h_s)),
      h_b_(std::move(h_b)),
      rho_s_(std::move(rho_s)),
      beta_(beta),
      u_(std::move(u_sb)),
      rho_b_(ThermalContext(beta, h_b_).gibbs()) {
  if (rho_s_.dim() != h_s_.dim()) throw DimensionMismatch("rho_S and H_S dimensions differ");
  if (u_.dim() != h_s_.dim() * h_b_.dim()) throw DimensionMismatch("U_SB must act on dimS × dimB");
}

double mutual_information(const DensityOperator& x_sb, std::pair<std::size_t, std::size_t> dims) {
  const DensityOperator x_s(partial_trace(x_sb.matrix(), dims, Subsystem::A));
  const DensityOperator x_b(partial_trace(x_sb.matrix(), dims, Subsystem::B));
  return von_neumann_entropy(x_s) + von_neumann_entropy(x_b) - von_neumann_entropy(x_sb);
}

namespace {

Matrix joint_hamiltonian(const HermitianOperator& h_s, const HermitianOperator& h_b) {
  return tensor(h_s.matrix(), Matrix::identity(h_b.dim())) + tensor(Matrix::identity(h_s.dim()), h_b.matrix());
}

}  // namespace

BipartiteWorkReport bipartite_work_identity(const BipartiteScenario& bs) {
  const std::pair<std::size_t, std::size_t> dims{bs.dim_s(), bs.dim_b()};
  const ThermalContext ctx_s(bs.beta(), bs.h_s());
  const ThermalContext ctx_b(bs.beta(), bs.h_b());
  const Matrix h = joint_hamiltonian(bs.h_s(), bs.h_b());
  const Matrix rho = tensor(bs.rho_s().matrix(), bs.rho_b().matrix());
  const Matrix& u = bs.unitary().matrix();
  const DensityOperator rho_final(u * rho * u.adjoint());
  const DensityOperator rho_s_final(partial_trace(rho_final.matrix(), dims, Subsystem::A));
  const DensityOperator rho_b_final(partial_trace(rho_final.matrix(), dims, Subsystem::B));

  BipartiteWorkReport r;
  r.work = trace_product(h, rho).real() - trace_product(h, rho_final.matrix()).real();
  r.system_athermality = gibbs_relative_entropy(rho_s_final, ctx_s);
  r.mutual_information = mutual_information(rho_final, dims);
  r.bath_athermality = gibbs_relative_entropy(rho_b_final, ctx_b);
  const double t = 1.0 / bs.beta();
  r.work_general = free_energy(bs.rho_s(), ctx_s) + ctx_s.log_partition() * t -
                   t * (r.system_athermality + r.mutual_information + r.bath_athermality);
  r.work_general_ii = free_energy(bs.rho_s(), ctx_s) - free_energy(rho_s_final, ctx_s) -
                      t * (r.bath_athermality + r.mutual_information);
  r.max_work = max_extractable_work(bs.rho_s(), ctx_s);
  r.residual = std::abs(r.work - r.work_general);
  r.residual_ii = std::abs(r.work - r.work_general_ii);
  r.bound_holds = r.work <= r.max_work + 1e-9;
  return r;
}

LocalDecompositionReport local_free_energy_decomposition(const DensityOperator& x_sb,
                                                         std::pair<std::size_t, std::size_t> dims,
                                                         const HermitianOperator& h_s, const HermitianOperator& h_b,
                                                         double beta) {
  if (h_s.dim() != dims.first || h_b.dim() != dims.second)
    throw DimensionMismatch("Hamiltonian dimensions do not match (dimS, dimB)");
  const ThermalContext ctx(beta, HermitianOperator(joint_hamiltonian(h_s, h_b)));
  const ThermalContext ctx_s(beta, h_s);
  const ThermalContext ctx_b(beta, h_b);
  LocalDecompositionReport r;
  r.total = free_energy(x_sb, ctx);
  r.system = free_energy(DensityOperator(partial_trace(x_sb.matrix(), dims, Subsystem::A)), ctx_s);
  r.bath = free_energy(DensityOperator(partial_trace(x_sb.matrix(), dims, Subsystem::B)), ctx_b);
  r.mutual_information = mutual_information(x_sb, dims);
  r.residual = std::abs(r.total - (r.system + r.bath + r.mutual_information / beta));
  return r;
}

namespace {

struct Worst {
  double value = 0.0;
  void offer(double v) { value = std::max(value, v); }
};

ThermoCheck make_check(std::string name, std::size_t draws, double worst, double tolerance) {
  return {std::move(name), draws, worst, tolerance, worst <= tolerance};
}

}  // namespace

std::vector<ThermoCheck> thermo_checks(std::uint64_t seed, std::size_t draws) {
  Worst work_general, work_general_ii, bound, brackets;
  Worst excess, decomposition, asymmetry_paths, loss_paths, local, nonnegative;
  for (std::size_t i = 0; i < draws; ++i) {
    Rng rng(sub_seed(seed, i));
    const BipartiteScenario bs(random_hermitian(2, rng), random_hermitian(2, rng), random_density(2, rng),
                               rng.uniform(0.2, 5.0), random_unitary(4, rng));
    const auto r = bipartite_work_identity(bs);
    work_general.offer(r.residual);
    work_general_ii.offer(r.residual_ii);
    bound.offer(r.work - r.max_work);
    brackets.offer(-std::min({r.system_athermality, r.mutual_information, r.bath_athermality}));

    const std::size_t dim = 2 + i % 3;
    const double beta = rng.uniform(0.2, 5.0);
    const ThermalContext ctx(beta, random_hermitian(dim, rng));
    const DensityOperator rho = random_density(dim, rng);
    const double df = free_energy_excess(rho, ctx);
    excess.offer(std::abs(df - gibbs_relative_entropy(rho, ctx) / beta));
    const auto split = free_energy_decomposition(rho, ctx);
    decomposition.offer(std::abs(df - split.diagonal - split.coherent));
    asymmetry_paths.offer(std::abs(asymmetry(rho, ctx) - asymmetry_relative(rho, ctx)));
    const auto loss = measurement_work_loss(rho, ctx);
    loss_paths.offer(std::abs(loss.loss - loss.loss_from_asymmetry));
    nonnegative.offer(std::max(-max_extractable_work(rho, ctx), -loss.loss));

    const auto l = local_free_energy_decomposition(random_density(4, rng), {2, 2}, random_hermitian(2, rng),
                                                   random_hermitian(2, rng), beta);
    local.offer(l.residual);
  }
  return {make_check("work-general", draws, work_general.value, 1e-9),
          make_check("work-general-ii", draws, work_general_ii.value, 1e-9),
          make_check("work-bound", draws, bound.value, 1e-9),
          make_check("bracket-nonnegativity", draws, brackets.value, 1e-10),
          make_check("free-energy-relative-entropy", draws, excess.value, 1e-10),
          make_check("free-energy-decomposition", draws, decomposition.value, 1e-10),
          make_check("asymmetry-two-paths", draws, asymmetry_paths.value, 1e-10),
          make_check("measurement-loss-two-paths", draws, loss_paths.value, 1e-10),
          make_check("extractable-work-nonnegative", draws, nonnegative.value, 1e-10),
          make_check("local-decomposition", draws, local.value, 1e-10)};
}

}  // namespace qwork

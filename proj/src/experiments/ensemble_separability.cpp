#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "hybridyn/ensemble.hpp"
#include "hybridyn/experiments/experiment.hpp"
#include "hybridyn/models.hpp"
#include "hybridyn/rng.hpp"
#include "hybridyn/sampling.hpp"

namespace hybridyn::experiments {
namespace {

struct Params {
  double m = 1.0, omega = 1.0, lambda = 0.0, M = 1.0, Omega = 1.0;
  std::size_t n_trunc = 4;
  std::size_t members = 10000;
  double x_mean = 0.5, x_std = 0.3, p_mean = 0.0, p_std = 0.3;
  IntegratorConfig integrator;
  std::size_t bins = 20;
};

Params parse(ConfigReader& r) {
  r.known_keys("", {"experiment", "seed", "output", "model", "members", "classical_sampling",
                    "integrator", "bins"});
  r.known_keys("model", {"m", "omega", "lambda", "M", "Omega", "n_trunc"});
  r.known_keys("classical_sampling", {"x_mean", "x_std", "p_mean", "p_std"});
  Params p;
  p.m = r.positive("model.m", p.m);
  p.omega = r.positive("model.omega", p.omega);
  p.lambda = r.number("model.lambda", p.lambda);
  p.M = r.positive("model.M", p.M);
  p.Omega = r.positive("model.Omega", p.Omega);
  p.n_trunc = r.count("model.n_trunc", p.n_trunc, 2);
  p.members = r.count("members", p.members, 2);
  p.x_mean = r.number("classical_sampling.x_mean", p.x_mean);
  p.x_std = r.nonnegative("classical_sampling.x_std", p.x_std);
  p.p_mean = r.number("classical_sampling.p_mean", p.p_mean);
  p.p_std = r.nonnegative("classical_sampling.p_std", p.p_std);
  IntegratorConfig d;
  d.dt = 0.01;
  d.t_final = 10.0;
  d.record_stride = 100;
  p.integrator = r.integrator(d);
  p.bins = r.count("bins", p.bins);
  return p;
}

Eigen::MatrixXcd random_unitary(std::size_t N, std::uint64_t seed) {
  Philox rng(seed, 0x756e6974u);
  const HermitianMatrix k = random_hermitian(N, rng);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k.to_dense());
  const Eigen::VectorXcd phases =
      eig.eigenvalues().unaryExpr([](double e) { return std::exp(cplx(0.0, -e)); });
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

void parse_ensemble_separability(ConfigReader& r) { parse(r); }

ExperimentResult run_ensemble_separability(const json& config) {
  ConfigReader rd(config);
  const Params p = parse(rd);
  rd.throw_if_findings();
  const std::uint64_t seed = config.value("seed", std::uint64_t{0});

  const HybridModel model =
      make_bilinear_oscillators({p.m}, {p.omega}, {p.lambda}, p.M, p.Omega, p.n_trunc);
  const std::size_t N = p.n_trunc;

  // Factorized initial density: Gaussian classical sector, sphere-uniform
  // quantum sector, drawn from independent streams.
  const std::vector<QmPhasePoint> qm = sample_sphere(N, p.members, seed);
  std::vector<HybridPoint> points;
  points.reserve(p.members);
  for (std::size_t j = 0; j < p.members; ++j) {
    Philox rng(seed ^ 0x636c617373696361ull, j);
    const double x = p.x_mean + p.x_std * rng.normal();
    const double v = p.p_mean + p.p_std * rng.normal();
    points.push_back({{{x}, {v}}, qm[j]});
  }
  const HybridEnsemble ens = make_ensemble(std::move(points), seed);
  ens.validate();

  const EnsembleSeries series = evolve_ensemble_series(model, ens, p.integrator);

  const auto x = HybridObservable::position(1, N, 0);
  const auto v = HybridObservable::momentum(1, N, 0);
  const auto cl_energy = HybridObservable::classical(1, N, [](const ClPhasePoint& c) {
    return ScalarPart{c.x[0] * c.x[0] + c.p[0] * c.p[0], {2.0 * c.x[0]}, {2.0 * c.p[0]}};
  });
  const auto X = HybridObservable::quantum(1, model.position_operator());
  const auto P = HybridObservable::quantum(1, model.momentum_operator());
  const auto E = HybridObservable::quantum(1, model.h_qm());
  const std::vector<std::pair<const HybridObservable*, const HybridObservable*>> pairs{
      {&x, &X}, {&v, &P}, {&cl_energy, &E}};

  ExperimentResult res;
  res.table.columns = {"t", "cov_x_X", "z_x_X", "cov_p_P", "z_p_P", "cov_E_E", "z_E_E"};
  double max_z = 0.0;
  double weight_change = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 1.0;
  for (std::size_t s = 0; s < series.times.size(); ++s) {
    const HybridEnsemble& snap = series.snapshots[s];
    std::vector<double> row{series.times[s]};
    for (const auto& [f, g] : pairs) {
      const CovarianceEstimate c = cross_covariance(snap, *f, *g);
      const double z = c.standard_error > 0.0 ? c.covariance / c.standard_error : 0.0;
      if (s > 0) max_z = std::max(max_z, std::fabs(z));
      row.push_back(c.covariance);
      row.push_back(z);
    }
    for (std::size_t j = 0; j < snap.size(); ++j) {
      weight_change = std::max(weight_change,
                               std::fabs(snap.members[j].weight - ens.members[j].weight));
    }
    const HermitianMatrix rho = marginal_qm_density_matrix(snap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.to_dense());
    trace_error = std::max(trace_error, std::fabs(eig.eigenvalues().sum() - 1.0));
    min_eigenvalue = std::min(min_eigenvalue, eig.eigenvalues().minCoeff());
    res.table.rows.push_back(std::move(row));
  }

  // Memberwise unitary in the quantum sector must leave the classical
  // marginal untouched, bit for bit.
  std::vector<double> edges(p.bins + 1);
  for (std::size_t i = 0; i <= p.bins; ++i) {
    edges[i] = -2.5 + 5.0 * static_cast<double>(i) / static_cast<double>(p.bins);
  }
  const HybridEnsemble& last = series.snapshots.back();
  const HybridEnsemble rotated = apply_qm_unitary(last, random_unitary(N, seed));
  const MarginalHistogram before = marginal_cl(last, {0, 1}, {edges, edges});
  const MarginalHistogram after = marginal_cl(rotated, {0, 1}, {edges, edges});
  const bool identical = before == after;

  res.checks.push_back(check_at_most("max_abs_cross_covariance_z", max_z, 4.0));
  res.checks.push_back(check_at_least("marginal_cl_invariant_under_qm_unitary",
                                      identical ? 1.0 : 0.0, 1.0));
  res.checks.push_back(check_at_most("weight_change", weight_change, 0.0));
  res.checks.push_back(check_at_most("density_matrix_trace_error", trace_error, 1e-9));
  res.checks.push_back(check_at_least("density_matrix_min_eigenvalue", min_eigenvalue, -1e-12));
  res.details = {{"members", p.members},
                 {"recorded_times", series.times.size() - 1},
                 {"lambda", p.lambda},
                 {"method", method_name(p.integrator.method)}};
  return res;
}

}  // namespace hybridyn::experiments

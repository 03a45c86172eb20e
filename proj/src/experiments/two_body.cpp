#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>

#include "hybridyn/experiments/experiment.hpp"
#include "hybridyn/integrator.hpp"
#include "hybridyn/models.hpp"

namespace hybridyn::experiments {
namespace {

struct Params {
  double m = 1.0, M = 1.0, lambda = 0.5;
  std::size_t n_trunc = 20;
  double basis_scale = 1.0;
  double x0 = -0.5, p0 = 0.0, X0 = 0.5, P0 = 0.0;
  IntegratorConfig integrator;
  std::size_t sensitivity_n_trunc = 30;  // 0 disables the truncation check
};

Params parse(ConfigReader& r) {
  r.known_keys("", {"experiment", "seed", "output", "model", "initial", "integrator",
                    "sensitivity_n_trunc"});
  r.known_keys("model", {"m", "M", "lambda", "n_trunc", "basis_scale"});
  r.known_keys("initial", {"x", "p", "X0", "P0"});
  Params p;
  p.m = r.positive("model.m", p.m);
  p.M = r.positive("model.M", p.M);
  p.lambda = r.positive("model.lambda", p.lambda);
  p.n_trunc = r.count("model.n_trunc", p.n_trunc, 2);
  p.basis_scale = r.positive("model.basis_scale", p.basis_scale);
  p.x0 = r.number("initial.x", p.x0);
  p.p0 = r.number("initial.p", p.p0);
  p.X0 = r.number("initial.X0", p.X0);
  p.P0 = r.number("initial.P0", p.P0);
  IntegratorConfig d;
  d.method = Method::rk4;
  d.dt = 1e-3;
  d.t_final = 100.0;
  d.record_stride = 10;
  p.integrator = r.integrator(d);
  p.sensitivity_n_trunc = r.count("sensitivity_n_trunc", p.sensitivity_n_trunc, 0);
  if (p.sensitivity_n_trunc != 0) {
    r.require(p.sensitivity_n_trunc >= 2, "sensitivity_n_trunc", "must be 0 or at least 2");
  }
  return p;
}

// Residual of the linear least-squares fit r(t) ~ A cos wt + B sin wt + C.
double fit_residual(const std::vector<double>& t, const std::vector<double>& r, double w) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    a(i, 0) = std::cos(w * ti);
    a(i, 1) = std::sin(w * ti);
    a(i, 2) = 1.0;
    b(i) = r[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d coeff = a.colPivHouseholderQr().solve(b);
  return (a * coeff - b).squaredNorm();
}

// Rough angular frequency from the spacing of sign changes about the mean.
double crossing_frequency(const std::vector<double>& t, const std::vector<double>& r) {
  double mean = 0.0;
  for (double v : r) mean += v;
  mean /= static_cast<double>(r.size());
  std::vector<double> crossings;
  for (std::size_t i = 1; i < r.size(); ++i) {
    const double a = r[i - 1] - mean;
    const double b = r[i] - mean;
    if ((a < 0.0) != (b < 0.0)) crossings.push_back(t[i - 1] + (t[i] - t[i - 1]) * a / (a - b));
  }
  if (crossings.size() < 3) return 0.0;
  return std::numbers::pi * static_cast<double>(crossings.size() - 1) /
         (crossings.back() - crossings.front());
}

double fit_frequency(const std::vector<double>& t, const std::vector<double>& r) {
  const double w0 = crossing_frequency(t, r);
  if (!(w0 > 0.0)) return 0.0;
  const double half_width = std::min(0.5 * w0, std::numbers::pi / (t.back() - t.front()));
  const auto best = boost::math::tools::brent_find_minima(
      [&](double w) { return fit_residual(t, r, w); }, w0 - half_width, w0 + half_width, 52);
  return best.first;
}

struct Run {
  Trajectory traj;
  std::vector<double> r;
};

Run simulate(const Params& p, std::size_t n_trunc) {
  const HybridModel model = make_two_body_harmonic(p.m, p.M, p.lambda, n_trunc, p.basis_scale);
  const HybridPoint start{{{p.x0}, {p.p0}}, coherent_state(model, p.X0, p.P0)};
  const ComRelativeObservables obs = com_relative_observables(model);
  const double sigma = p.M + p.m;
  const double mu = p.M * p.m / sigma;
  const double lambda = p.lambda;
  std::vector<ConservedQuantity> conserved{
      {"p_s", [obs](const HybridPoint& q) { return eval_hybrid(obs.p_s, q); }},
      {"fluctuation_energy", [model](const HybridPoint& q) { return fluctuation_energy(model, q); }},
      {"com_energy",
       [obs, sigma](const HybridPoint& q) {
         const double ps = eval_hybrid(obs.p_s, q);
         return ps * ps / (2.0 * sigma);
       }},
      {"relative_energy", [obs, mu, lambda](const HybridPoint& q) {
         const double pr = eval_hybrid(obs.p_r, q);
         const double rr = eval_hybrid(obs.r, q);
         return pr * pr / (2.0 * mu) + lambda * rr * rr;
       }}};
  Run run{integrate(model, start, p.integrator, conserved), {}};
  for (const auto& q : run.traj.points) run.r.push_back(eval_hybrid(obs.r, q));
  return run;
}

}  // namespace

void parse_two_body(ConfigReader& r) { parse(r); }

ExperimentResult run_two_body(const json& config) {
  ConfigReader rd(config);
  const Params p = parse(rd);
  rd.throw_if_findings();

  const Run run = simulate(p, p.n_trunc);
  const Trajectory& traj = run.traj;
  const double mu = p.M * p.m / (p.M + p.m);
  const double w_exact = std::sqrt(2.0 * p.lambda / mu);
  const double w_fit = fit_frequency(traj.times, run.r);

  ExperimentResult res;
  res.table.columns = {"t", "x", "p", "X_mean", "P_mean", "r", "p_s", "fluctuation_energy",
                       "energy", "constraint"};
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    const auto& q = traj.points[k];
    const auto& d = traj.diagnostics[k];
    res.table.rows.push_back({traj.times[k], q.cl.x[0], q.cl.p[0], run.r[k] + q.cl.x[0],
                              d.conserved[0] - q.cl.p[0], run.r[k], d.conserved[0],
                              d.conserved[1], d.energy, d.constraint});
  }

  res.checks.push_back(check_at_most("p_s_drift", traj.max_conserved_drift[0], 1e-8));
  res.checks.push_back(check_at_most("fluctuation_energy_drift", traj.max_conserved_drift[1], 1e-8));
  res.checks.push_back(check_at_most("com_energy_drift", traj.max_conserved_drift[2], 1e-8));
  res.checks.push_back(check_at_most("relative_energy_drift", traj.max_conserved_drift[3], 1e-8));
  res.checks.push_back(check_at_most("relative_frequency_error", std::fabs(w_fit - w_exact), 1e-4));

  double sensitivity = 0.0;
  if (p.sensitivity_n_trunc != 0) {
    const Run alt = simulate(p, p.sensitivity_n_trunc);
    for (std::size_t k = 0; k < run.r.size(); ++k) {
      sensitivity = std::max(sensitivity, std::fabs(run.r[k] - alt.r[k]));
    }
    res.checks.push_back(check_at_most("truncation_sensitivity", sensitivity, 1e-6));
  }
  res.details = {{"fitted_frequency", w_fit},
                 {"expected_frequency", w_exact},
                 {"energy_drift", traj.max_energy_drift},
                 {"constraint_drift", traj.max_constraint_drift},
                 {"method", method_name(p.integrator.method)},
                 {"n_trunc", p.n_trunc},
                 {"sensitivity_n_trunc", p.sensitivity_n_trunc}};
  return res;
}

}  // namespace hybridyn::experiments

#include <algorithm>
#include <cmath>

#include "hybridyn/experiments/experiment.hpp"
#include "hybridyn/integrator.hpp"
#include "hybridyn/models.hpp"

namespace hybridyn::experiments {
namespace {

struct Params {
  double m = 1.0, omega = 1.0, lambda = 0.1, M = 1.0, Omega = 1.0;
  std::size_t n_trunc = 8;
  double x0 = 0.3, p0 = 0.0;
  std::string qm_state = "ground";
  double X0 = 0.0, P0 = 0.0;
  IntegratorConfig integrator;
  std::size_t output_stride = 200;
};

Params parse(ConfigReader& r) {
  r.known_keys("", {"experiment", "seed", "output", "model", "initial", "integrator",
                    "output_stride"});
  r.known_keys("model", {"m", "omega", "lambda", "M", "Omega", "n_trunc"});
  r.known_keys("initial", {"x", "p", "qm_state", "X0", "P0"});
  Params p;
  p.m = r.positive("model.m", p.m);
  p.omega = r.positive("model.omega", p.omega);
  p.lambda = r.number("model.lambda", p.lambda);
  p.M = r.positive("model.M", p.M);
  p.Omega = r.positive("model.Omega", p.Omega);
  p.n_trunc = r.count("model.n_trunc", p.n_trunc, 2);
  p.x0 = r.number("initial.x", p.x0);
  p.p0 = r.number("initial.p", p.p0);
  p.qm_state = r.choice("initial.qm_state", p.qm_state, {"ground", "coherent"});
  p.X0 = r.number("initial.X0", p.X0);
  p.P0 = r.number("initial.P0", p.P0);
  IntegratorConfig d;
  d.dt = 5e-4;
  d.t_final = 50.0;
  p.integrator = r.integrator(d);
  p.output_stride = r.count("output_stride", p.output_stride);
  const double k2 = p.m * p.omega * p.omega * p.M * p.Omega * p.Omega;
  r.require(p.lambda * p.lambda < k2, "model.lambda",
            "coupling too strong: the coupled oscillators are unstable");
  return p;
}

}  // namespace

void parse_peres_terno(ConfigReader& r) { parse(r); }

ExperimentResult run_peres_terno(const json& config) {
  ConfigReader r(config);
  const Params p = parse(r);
  r.throw_if_findings();

  const HybridModel model =
      make_bilinear_oscillators({p.m}, {p.omega}, {p.lambda}, p.M, p.Omega, p.n_trunc);
  HybridPoint start{{{p.x0}, {p.p0}},
                    p.qm_state == "ground" ? basis_state(p.n_trunc, 0)
                                           : coherent_state(model, p.X0, p.P0)};

  IntegratorConfig cfg = p.integrator;
  cfg.record_stride = 1;
  const Trajectory traj = integrate(model, start, cfg);

  std::vector<EhrenfestRecord> rec;
  rec.reserve(traj.points.size());
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    rec.push_back(ehrenfest_observables(model, traj.points[k], traj.times[k]));
  }
  const CoupledOscillatorSolution exact(p.m, p.omega, p.M, p.Omega, p.lambda, rec[0].x[0],
                                        rec[0].p[0], rec[0].X_mean, rec[0].P_mean);

  ExperimentResult res;
  res.table.columns = {"t", "x", "p", "X_mean", "P_mean", "x_exact", "p_exact", "X_exact",
                       "P_exact", "energy", "constraint"};
  double max_err = 0.0;
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const auto e = exact.at(rec[k].t);
    const double err = std::max({std::fabs(rec[k].x[0] - e[0]), std::fabs(rec[k].p[0] - e[1]),
                                 std::fabs(rec[k].X_mean - e[2]), std::fabs(rec[k].P_mean - e[3])});
    max_err = std::max(max_err, err);
    if (k % p.output_stride == 0 || k + 1 == rec.size()) {
      res.table.rows.push_back({rec[k].t, rec[k].x[0], rec[k].p[0], rec[k].X_mean, rec[k].P_mean,
                                e[0], e[1], e[2], e[3], traj.diagnostics[k].energy,
                                traj.diagnostics[k].constraint});
    }
  }

  // Central differences of the extracted mean values against the closed
  // mean-value equations.
  double residual = 0.0;
  const double h = cfg.dt;
  for (std::size_t k = 1; k + 1 < rec.size(); ++k) {
    const auto& a = rec[k - 1];
    const auto& b = rec[k];
    const auto& c = rec[k + 1];
    const double dx = (c.x[0] - a.x[0]) / (2.0 * h);
    const double dp = (c.p[0] - a.p[0]) / (2.0 * h);
    const double dX = (c.X_mean - a.X_mean) / (2.0 * h);
    const double dP = (c.P_mean - a.P_mean) / (2.0 * h);
    residual = std::max({residual, std::fabs(dx - b.p[0] / p.m),
                         std::fabs(dp + p.m * p.omega * p.omega * b.x[0] + p.lambda * b.X_mean),
                         std::fabs(dX - b.P_mean / p.M),
                         std::fabs(dP + p.M * p.Omega * p.Omega * b.X_mean + p.lambda * b.x[0])});
  }

  res.checks.push_back(check_at_most("constraint_drift", traj.max_constraint_drift, 1e-9));
  res.checks.push_back(check_at_most("energy_drift", traj.max_energy_drift, 1e-8));
  res.checks.push_back(check_at_most("mean_value_max_error", max_err, 1e-6));
  res.checks.push_back(check_at_most("ehrenfest_residual", residual, 1e-6));
  const auto w = exact.normal_frequencies();
  res.details = {{"normal_frequencies", {w[0], w[1]}},
                 {"method", method_name(cfg.method)},
                 {"dt", cfg.dt},
                 {"t_final", cfg.t_final},
                 {"max_fixed_point_iterations", traj.max_iterations}};
  return res;
}

}  // namespace hybridyn::experiments

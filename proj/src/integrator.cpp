#include "hybridyn/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hybridyn/errors.hpp"
#include "hybridyn/simd/kernels.hpp"

namespace hybridyn {
namespace {

struct Buffers {
  std::vector<double> y0, y1, ynew, mid, k1, k2, k3, k4, tmp;

  void resize(std::size_t d) {
    for (auto* v : {&y0, &y1, &ynew, &mid, &k1, &k2, &k3, &k4, &tmp}) v->resize(d);
  }
};

Buffers& buffers(std::size_t d) {
  thread_local Buffers b;
  b.resize(d);
  return b;
}

bool all_finite(std::span<const double> y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

void project(std::span<double> y, std::size_t n, std::size_t N) {
  double c = 0.0;
  for (std::size_t i = 2 * n; i < 2 * (n + N); ++i) c += y[i] * y[i];
  c *= 0.5;
  if (c <= 0.0) return;
  const double s = 1.0 / std::sqrt(c);
  for (std::size_t i = 2 * n; i < 2 * (n + N); ++i) y[i] *= s;
}

StepReport rk4_step(const HybridModel& model, std::span<double> y, double h) {
  const std::size_t d = y.size();
  Buffers& b = buffers(d);
  const auto& k = simd::active();
  equations_of_motion_flat(model, y, b.k1);
  k.scaled_add(d, y.data(), 0.5 * h, b.k1.data(), b.tmp.data());
  equations_of_motion_flat(model, b.tmp, b.k2);
  k.scaled_add(d, y.data(), 0.5 * h, b.k2.data(), b.tmp.data());
  equations_of_motion_flat(model, b.tmp, b.k3);
  k.scaled_add(d, y.data(), h, b.k3.data(), b.tmp.data());
  equations_of_motion_flat(model, b.tmp, b.k4);
  for (std::size_t i = 0; i < d; ++i) {
    y[i] += (h / 6.0) * (b.k1[i] + 2.0 * b.k2[i] + 2.0 * b.k3[i] + b.k4[i]);
  }
  return {4, 0.0};
}

// y1 = y0 + h f((y0 + y1)/2), solved by damped fixed-point iteration from an
// explicit Euler predictor. The damping factor halves whenever the residual
// grows.
StepReport midpoint_step(const HybridModel& model, std::span<double> y, double h,
                         const IntegratorConfig& cfg, double t) {
  const std::size_t d = y.size();
  Buffers& b = buffers(d);
  const auto& k = simd::active();
  std::copy(y.begin(), y.end(), b.y0.begin());
  equations_of_motion_flat(model, b.y0, b.k1);
  k.scaled_add(d, b.y0.data(), h, b.k1.data(), b.y1.data());

  double theta = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  double residual = previous;
  for (std::size_t it = 1; it <= cfg.max_fixed_point_iters; ++it) {
    k.scaled_add(d, b.y0.data(), 1.0, b.y1.data(), b.mid.data());
    for (double& v : b.mid) v *= 0.5;
    equations_of_motion_flat(model, b.mid, b.k2);
    k.scaled_add(d, b.y0.data(), h, b.k2.data(), b.ynew.data());
    residual = k.max_abs_diff(d, b.ynew.data(), b.y1.data());
    if (!std::isfinite(residual)) break;
    if (residual <= cfg.fixed_point_tol) {
      std::copy(b.ynew.begin(), b.ynew.end(), y.begin());
      return {it, residual};
    }
    if (residual > previous) theta *= 0.5;
    for (std::size_t i = 0; i < d; ++i) b.y1[i] += theta * (b.ynew[i] - b.y1[i]);
    previous = residual;
  }
  throw ConvergenceError("implicit midpoint did not converge at t = " + std::to_string(t) +
                             " (residual " + std::to_string(residual) + ")",
                         residual, t);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::implicit_midpoint:
      return "implicit_midpoint";
    case Method::rk4:
      return "rk4";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "implicit_midpoint") return Method::implicit_midpoint;
  if (name == "rk4") return Method::rk4;
  throw ParameterError("unknown integration method '" + name + "'");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
    throw ParameterError("t_final must be nonnegative");
  }
  if (!(fixed_point_tol > 0.0)) throw ParameterError("fixed_point_tol must be positive");
  if (max_fixed_point_iters == 0) throw ParameterError("max_fixed_point_iters must be positive");
  if (record_stride == 0) throw ParameterError("record_stride must be positive");
}

std::size_t IntegratorConfig::step_count() const {
  const double steps = t_final / dt;
  const double rounded = std::round(steps);
  if (std::fabs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw ParameterError("t_final must be an integer multiple of dt");
  }
  return static_cast<std::size_t>(rounded);
}

StepReport step_flat(const HybridModel& model, std::span<double> y, double h,
                     const IntegratorConfig& cfg, double t) {
  if (y.size() != model.state_dim()) throw DimensionError("state length does not match model");
  StepReport r = cfg.method == Method::rk4 ? rk4_step(model, y, h)
                                           : midpoint_step(model, y, h, cfg, t);
  if (cfg.project_to_sphere) project(y, model.cl_dim(), model.qm_dim());
  if (!all_finite(y)) {
    throw ConvergenceError("non-finite state at t = " + std::to_string(t),
                           std::numeric_limits<double>::quiet_NaN(), t);
  }
  return r;
}

HybridPoint step_by(const HybridModel& model, const HybridPoint& point, double h,
                    const IntegratorConfig& cfg) {
  std::vector<double> y = flatten(point);
  step_flat(model, y, h, cfg);
  return unflatten(y, model.cl_dim(), model.qm_dim());
}

HybridPoint step(const HybridModel& model, const HybridPoint& point,
                 const IntegratorConfig& cfg) {
  cfg.validate();
  return step_by(model, point, cfg.dt, cfg);
}

Trajectory integrate(const HybridModel& model, const HybridPoint& start,
                     const IntegratorConfig& cfg,
                     const std::vector<ConservedQuantity>& conserved) {
  cfg.validate();
  const std::size_t steps = cfg.step_count();
  const std::size_t n = model.cl_dim();
  const std::size_t N = model.qm_dim();
  std::vector<double> y = flatten(start);
  if (y.size() != model.state_dim()) throw DimensionError("start point does not match model");

  Trajectory traj;
  for (const auto& c : conserved) traj.conserved_names.push_back(c.name);
  traj.max_conserved_drift.assign(conserved.size(), 0.0);

  double h0 = 0.0;
  std::vector<double> c0(conserved.size());
  auto record = [&](std::size_t k) {
    HybridPoint pt = unflatten(y, n, N);
    DiagnosticSample d;
    d.energy = total_hamiltonian_flat(model, y);
    d.constraint = constraint(pt.qm);
    for (const auto& c : conserved) d.conserved.push_back(c.value(pt));
    if (k == 0) {
      h0 = d.energy;
      c0 = d.conserved;
    }
    traj.max_energy_drift = std::max(traj.max_energy_drift, std::fabs(d.energy - h0));
    traj.max_constraint_drift =
        std::max(traj.max_constraint_drift, std::fabs(d.constraint - 1.0));
    for (std::size_t i = 0; i < conserved.size(); ++i) {
      traj.max_conserved_drift[i] =
          std::max(traj.max_conserved_drift[i], std::fabs(d.conserved[i] - c0[i]));
    }
    traj.times.push_back(static_cast<double>(k) * cfg.dt);
    traj.points.push_back(std::move(pt));
    traj.diagnostics.push_back(std::move(d));
  };

  record(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k - 1) * cfg.dt;
    const StepReport r = step_flat(model, y, cfg.dt, cfg, t);
    traj.max_iterations = std::max(traj.max_iterations, r.iterations);
    if (k % cfg.record_stride == 0 || k == steps) record(k);
  }
  return traj;
}

HybridPoint propagate(const HybridModel& model, const HybridPoint& start,
                      const IntegratorConfig& cfg) {
  cfg.validate();
  const std::size_t steps = cfg.step_count();
  std::vector<double> y = flatten(start);
  if (y.size() != model.state_dim()) throw DimensionError("start point does not match model");
  for (std::size_t k = 0; k < steps; ++k) {
    step_flat(model, y, cfg.dt, cfg, static_cast<double>(k) * cfg.dt);
  }
  return unflatten(y, model.cl_dim(), model.qm_dim());
}

ConvergenceReport convergence_order(const HybridModel& model, const HybridPoint& start,
                                    double base_dt, double t_final, Method method) {
  IntegratorConfig cfg;
  cfg.method = method;
  cfg.t_final = t_final;
  cfg.fixed_point_tol = 1e-14;
  auto run = [&](double dt) {
    cfg.dt = dt;
    return flatten(propagate(model, start, cfg));
  };
  const std::vector<double> coarse = run(base_dt);
  const std::vector<double> fine = run(base_dt / 2.0);
  const std::vector<double> ref = run(base_dt / 16.0);
  ConvergenceReport r;
  r.method = method;
  r.dt = base_dt;
  r.error_coarse = max_abs_diff(coarse, ref);
  r.error_fine = max_abs_diff(fine, ref);
  r.order = std::log2(r.error_coarse / r.error_fine);
  return r;
}

}  // namespace hybridyn

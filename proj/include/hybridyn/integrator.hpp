#pragma once

// Fixed-step integration of the hybrid flow. Implicit midpoint is the
// default; classical RK4 is kept as a reference method.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hybridyn/hybrid_bracket.hpp"
#include "hybridyn/models.hpp"

namespace hybridyn {

enum class Method { implicit_midpoint, rk4 };

const char* method_name(Method m) noexcept;
Method parse_method(const std::string& name);

struct IntegratorConfig {
  Method method = Method::implicit_midpoint;
  double dt = 1e-3;
  double t_final = 1.0;
  double fixed_point_tol = 1e-12;
  std::size_t max_fixed_point_iters = 50;
  std::size_t record_stride = 1;
  // Rescale the quantum coordinates onto C = 1 after every step. Off by
  // default: the exact flow conserves C, so drift measures integrator quality.
  bool project_to_sphere = false;

  void validate() const;
  std::size_t step_count() const;
};

struct StepReport {
  std::size_t iterations = 0;
  double residual = 0.0;
};

// Advances y in place by a signed step h. `t` is only used for error reports.
StepReport step_flat(const HybridModel& model, std::span<double> y, double h,
                     const IntegratorConfig& cfg, double t = 0.0);

HybridPoint step(const HybridModel& model, const HybridPoint& point,
                 const IntegratorConfig& cfg);
HybridPoint step_by(const HybridModel& model, const HybridPoint& point, double h,
                    const IntegratorConfig& cfg);

struct DiagnosticSample {
  double energy = 0.0;
  double constraint = 0.0;
  std::vector<double> conserved;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<HybridPoint> points;
  std::vector<DiagnosticSample> diagnostics;
  std::vector<std::string> conserved_names;

  double max_energy_drift = 0.0;      // max |H(t) - H(0)| over recorded samples
  double max_constraint_drift = 0.0;  // max |C(t) - 1|
  std::vector<double> max_conserved_drift;
  std::size_t max_iterations = 0;
};

// Records t = 0, every record_stride-th step, and the final step. Times are
// k * dt, not accumulated. Integration errors are rethrown as
// ConvergenceError carrying the failing time.
Trajectory integrate(const HybridModel& model, const HybridPoint& start,
                     const IntegratorConfig& cfg,
                     const std::vector<ConservedQuantity>& conserved = {});

// Final point only, without diagnostics.
HybridPoint propagate(const HybridModel& model, const HybridPoint& start,
                      const IntegratorConfig& cfg);

struct ConvergenceReport {
  Method method = Method::rk4;
  double dt = 0.0;
  double error_coarse = 0.0;  // |y_dt(T) - y_ref(T)|_inf
  double error_fine = 0.0;    // |y_dt/2(T) - y_ref(T)|_inf
  double order = 0.0;         // log2(error_coarse / error_fine)
};

// dt-halving study against a dt/16 reference run of the same method.
ConvergenceReport convergence_order(const HybridModel& model, const HybridPoint& start,
                                    double base_dt, double t_final, Method method);

}  // namespace hybridyn

// One line per acceptance criterion; exit status is the number of failures.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hybridyn/experiments/experiment.hpp"
#include "hybridyn/format.hpp"
#include "hybridyn/integrator.hpp"
#include "hybridyn/models.hpp"
#include "hybridyn/oscillator_rep.hpp"
#include "hybridyn/rng.hpp"
#include "hybridyn/sampling.hpp"

using namespace hybridyn;
using hybridyn::experiments::ExperimentResult;
using hybridyn::experiments::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool all_pass(const ExperimentResult& r, const std::vector<std::string>& names, std::string& detail) {
  bool ok = true;
  for (const auto& n : names) {
    const auto& c = r.check(n);
    ok = ok && c.pass;
    detail += n + "=" + format_double(c.value) + (c.pass ? " " : " (over " + format_double(c.threshold) + ") ");
  }
  return ok;
}

Outcome experiment(const json& config, const std::vector<std::string>& checks) {
  const ExperimentResult r = experiments::run_experiment(config);
  Outcome o;
  o.pass = all_pass(r, checks, o.detail);
  return o;
}

Outcome commutator_identity() {
  Philox rng(20240101);
  double worst = 0.0;
  for (std::size_t N : {2u, 4u, 8u, 16u}) {
    for (int k = 0; k < 200; ++k) {
      const HermitianMatrix f = random_hermitian(N, rng);
      const HermitianMatrix g = random_hermitian(N, rng);
      const QmPhasePoint q = random_sphere_point(N, rng);
      const Eigen::MatrixXcd a = f.to_dense();
      const Eigen::MatrixXcd b = g.to_dense();
      Eigen::VectorXcd psi(N);
      for (std::size_t i = 0; i < N; ++i) {
        psi(static_cast<Eigen::Index>(i)) = cplx(q.X[i], q.P[i]) / std::sqrt(2.0);
      }
      const cplx expected = (psi.adjoint() * ((a * b - b * a) / cplx(0.0, 1.0)) * psi)(0, 0);
      worst = std::max(worst, std::fabs(qm_poisson(f, g, q) - expected.real()));
    }
  }
  return {worst < 1e-10, "max_abs_difference=" + format_double(worst)};
}

Outcome uncoupled_correctness() {
  const std::size_t N = 8;
  const double m = 1.0, w = 1.0;
  const HybridModel model = make_bilinear_oscillators({m}, {w}, {0.0}, 1.0, 1.0, N);
  Philox rng(77);
  const double x0 = 0.4, p0 = -0.3;
  const HybridPoint start{{{x0}, {p0}}, random_sphere_point(N, rng)};
  IntegratorConfig cfg;
  cfg.method = Method::rk4;
  cfg.dt = 1e-3;
  cfg.t_final = 6.4;
  cfg.record_stride = 100;
  const Trajectory traj = integrate(model, start, cfg);
  const QuantumState psi0 = phase_to_state(start.qm);
  double worst = 0.0;
  std::size_t samples = 0;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const QuantumState ref = schrodinger_reference(model.h_qm(), psi0, t);
    const QuantumState got = phase_to_state(traj.points[k].qm);
    for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::abs(ref.amplitudes[i] - got.amplitudes[i]));
    const double x = x0 * std::cos(w * t) + p0 / (m * w) * std::sin(w * t);
    const double p = -m * w * x0 * std::sin(w * t) + p0 * std::cos(w * t);
    worst = std::max({worst, std::fabs(traj.points[k].cl.x[0] - x), std::fabs(traj.points[k].cl.p[0] - p)});
    ++samples;
  }
  return {worst < 1e-7 && samples == 64,
          "max_error=" + format_double(worst) + " sample_times=" + std::to_string(samples)};
}

Outcome integrator_orders() {
  const HybridModel model = make_bilinear_oscillators({1.0}, {1.0}, {0.1}, 1.0, 1.0, 8);
  const HybridPoint start{{{0.3}, {0.0}}, coherent_state(model, 0.2, 0.1)};
  const ConvergenceReport mid = convergence_order(model, start, 0.02, 1.0, Method::implicit_midpoint);
  const ConvergenceReport rk = convergence_order(model, start, 0.05, 1.0, Method::rk4);
  const bool ok = std::fabs(mid.order - 2.0) <= 0.2 && std::fabs(rk.order - 4.0) <= 0.3;
  return {ok, "implicit_midpoint=" + format_double(mid.order) + " rk4=" + format_double(rk.order)};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "commutator-bracket identity", 5.0, commutator_identity},
      {2, "constraint and energy conservation", 30.0,
       [] {
         return experiment(json::parse(R"({"experiment":"peres_terno","seed":1,
                                           "integrator":{"dt":0.001,"t_final":50}})"),
                           {"constraint_drift", "energy_drift"});
       }},
      {3, "mean values follow the coupled classical oscillators", 30.0,
       [] {
         const ExperimentResult r =
             experiments::run_experiment(json{{"experiment", "peres_terno"}, {"seed", 1}});
         Outcome o;
         o.pass = all_pass(r, {"mean_value_max_error"}, o.detail);
         const auto w = r.details["normal_frequencies"];
         const double w0 = w[0].get<double>();
         const double w1 = w[1].get<double>();
         const double lo = std::min(w0, w1);
         const double hi = std::max(w0, w1);
         const bool modes = std::fabs(lo - std::sqrt(0.9)) < 1e-12 && std::fabs(hi - std::sqrt(1.1)) < 1e-12;
         o.pass = o.pass && modes;
         o.detail += "normal_frequencies=" + format_double(lo) + "," + format_double(hi);
         return o;
       }},
      {4, "uncoupled sectors evolve independently", 10.0, uncoupled_correctness},
      {5, "separability", 120.0,
       [] {
         return experiment(json{{"experiment", "ensemble_separability"}, {"seed", 5}},
                           {"marginal_cl_invariant_under_qm_unitary", "max_abs_cross_covariance_z"});
       }},
      {6, "sphere identities", 10.0,
       [] {
         return experiment(json{{"experiment", "sphere_identities"}, {"seed", 6}},
                           {"moment_band_ratio", "gamma_relative_error"});
       }},
      {7, "two-body separation", 60.0,
       [] {
         return experiment(json{{"experiment", "two_body"}, {"seed", 7}},
                           {"p_s_drift", "fluctuation_energy_drift", "relative_frequency_error"});
       }},
      {8, "decoherence by dephasing", 180.0,
       [] {
         return experiment(json{{"experiment", "qbit_decoherence"}, {"seed", 8}},
                           {"envelope_band_ratio", "control_min_modulus"});
       }},
      {9, "bracket algebra closure diagnostic", 5.0,
       [] {
         return experiment(json{{"experiment", "bracket_closure"}, {"seed", 9}},
                           {"quartic_vs_finite_difference", "non_quadratic_flagged_fraction"});
       }},
      {10, "integrator orders", 30.0, integrator_orders},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("criterion %2d %-52s %s  %s time=%.2fs limit=%.0fs%s\n", c.id, c.name,
                pass ? "PASS" : "FAIL", o.detail.c_str(), secs, c.limit_seconds,
                in_time ? "" : " (too slow)");
    std::fflush(stdout);
  }
  return failures;
}

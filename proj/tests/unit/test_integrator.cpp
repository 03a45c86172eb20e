#include <doctest.h>

#include <cmath>

#include "hybridyn/errors.hpp"
#include "hybridyn/integrator.hpp"
#include "oracles.hpp"

using namespace hybridyn;

namespace {

IntegratorConfig config(Method m, double dt, double t_final, std::size_t stride = 1) {
  IntegratorConfig c;
  c.method = m;
  c.dt = dt;
  c.t_final = t_final;
  c.record_stride = stride;
  return c;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK(config(Method::rk4, 0.1, 1.0).step_count() == 10);
  CHECK_THROWS(config(Method::rk4, 0.3, 1.0).step_count());
  CHECK_THROWS(config(Method::rk4, -0.1, 1.0).validate());
  CHECK(parse_method("rk4") == Method::rk4);
  CHECK(parse_method("implicit_midpoint") == Method::implicit_midpoint);
  CHECK_THROWS(parse_method("euler"));
}

TEST_CASE("uncoupled evolution matches independent solutions") {
  const std::size_t N = 6;
  const HybridModel model = make_bilinear_oscillators({1.3}, {0.9}, {0.0}, 1.0, 1.0, N);
  Philox rng(41);
  const HybridPoint start{{{0.4}, {-0.2}}, oracle::sphere_point(N, rng)};
  Eigen::VectorXcd psi0(N);
  for (std::size_t i = 0; i < N; ++i) {
    psi0(static_cast<Eigen::Index>(i)) = cplx(start.qm.X[i], start.qm.P[i]) / std::sqrt(2.0);
  }
  const Eigen::MatrixXcd h = oracle::dense(model.h_qm());
  for (Method method : {Method::rk4, Method::implicit_midpoint}) {
    const Trajectory traj = integrate(model, start, config(method, 1e-3, 6.4, 100));
    REQUIRE(traj.times.size() == 65);
    // Midpoint phase error grows like E^3 dt^2 t / 12 for level energy E.
    const double tol = method == Method::rk4 ? 1e-10 : 1e-4;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double t = traj.times[k];
      const double w = 0.9;
      CHECK(std::fabs(traj.points[k].cl.x[0] - (0.4 * std::cos(w * t) - 0.2 / (1.3 * w) * std::sin(w * t))) < tol);
      const Eigen::VectorXcd psi = oracle::propagate_taylor(h, psi0, t);
      for (std::size_t i = 0; i < N; ++i) {
        const cplx z = cplx(traj.points[k].qm.X[i], traj.points[k].qm.P[i]) / std::sqrt(2.0);
        CHECK(std::abs(z - psi(static_cast<Eigen::Index>(i))) < tol);
      }
    }
  }
}

TEST_CASE("recorded times are exact multiples of dt") {
  const HybridModel model = make_bilinear_oscillators({1.0}, {1.0}, {0.1}, 1.0, 1.0, 3);
  const HybridPoint start{{{0.1}, {0.0}}, basis_state(3, 0)};
  const Trajectory traj = integrate(model, start, config(Method::rk4, 0.1, 1.0, 3));
  const std::vector<double> steps{0, 3, 6, 9, 10};
  REQUIRE(traj.times.size() == steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) CHECK(traj.times[k] == steps[k] * 0.1);
}

TEST_CASE("implicit midpoint conserves the constraint and reverses exactly") {
  const HybridModel model = make_bilinear_oscillators({1.0}, {1.0}, {0.3}, 1.0, 1.0, 5);
  Philox rng(42);
  const HybridPoint start{{{0.5}, {0.1}}, oracle::sphere_point(5, rng)};
  IntegratorConfig cfg = config(Method::implicit_midpoint, 0.01, 5.0);
  cfg.fixed_point_tol = 1e-14;
  const Trajectory traj = integrate(model, start, cfg);
  CHECK(traj.max_constraint_drift < 1e-12);
  HybridPoint p = step_by(model, start, 0.05, cfg);
  p = step_by(model, p, -0.05, cfg);
  const std::vector<double> a = flatten(p);
  const std::vector<double> b = flatten(start);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) < 1e-13);
}

TEST_CASE("conserved quantities are tracked") {
  const HybridModel model = make_two_body_harmonic(1.0, 1.0, 0.5, 12, 1.0);
  const HybridPoint start{{{-0.5}, {0.0}}, coherent_state(model, 0.5, 0.0)};
  const ComRelativeObservables obs = com_relative_observables(model);
  const std::vector<ConservedQuantity> q{
      {"p_s", [&obs](const HybridPoint& h) { return eval_hybrid(obs.p_s, h); }}};
  const Trajectory traj = integrate(model, start, config(Method::rk4, 1e-2, 2.0, 10), q);
  REQUIRE(traj.conserved_names == std::vector<std::string>{"p_s"});
  CHECK(traj.max_conserved_drift[0] < 1e-8);
  CHECK(traj.diagnostics[0].conserved.size() == 1);
}

TEST_CASE("non-convergence is reported with the failing time") {
  const HybridModel model = make_bilinear_oscillators({1.0}, {1.0}, {0.1}, 1.0, 1.0, 8);
  const HybridPoint start{{{0.3}, {0.0}}, basis_state(8, 2)};
  IntegratorConfig cfg = config(Method::implicit_midpoint, 0.5, 1.0);
  cfg.max_fixed_point_iters = 1;
  try {
    integrate(model, start, cfg);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(e.time() == doctest::Approx(0.0));
    CHECK(e.residual() > cfg.fixed_point_tol);
  }
}

TEST_CASE("convergence orders") {
  const HybridModel model = make_bilinear_oscillators({1.0}, {1.0}, {0.1}, 1.0, 1.0, 8);
  const HybridPoint start{{{0.3}, {0.0}}, coherent_state(model, 0.2, 0.1)};
  const ConvergenceReport mid = convergence_order(model, start, 0.02, 1.0, Method::implicit_midpoint);
  CHECK(mid.order == doctest::Approx(2.0).epsilon(0.1));
  const ConvergenceReport rk = convergence_order(model, start, 0.05, 1.0, Method::rk4);
  CHECK(rk.order == doctest::Approx(4.0).epsilon(0.075));
}

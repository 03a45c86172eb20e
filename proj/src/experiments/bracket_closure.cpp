#include <algorithm>
#include <cmath>

#include "hybridyn/experiments/experiment.hpp"
#include "hybridyn/hybrid_bracket.hpp"
#include "hybridyn/rng.hpp"
#include "hybridyn/sampling.hpp"
#include "hybridyn/testing/finite_difference.hpp"

namespace hybridyn::experiments {
namespace {

struct Params {
  std::size_t probes = 20;
  std::size_t fit_samples = 256;
  double fit_threshold = 1e-6;
  double fd_step = 1e-5;
};

Params parse(ConfigReader& r) {
  r.known_keys("", {"experiment", "seed", "output", "probes", "fit_samples", "fit_threshold",
                    "fd_step"});
  Params p;
  p.probes = r.count("probes", p.probes);
  p.fit_samples = r.count("fit_samples", p.fit_samples);
  p.fit_threshold = r.positive("fit_threshold", p.fit_threshold);
  p.fd_step = r.positive("fd_step", p.fd_step);
  return p;
}

}  // namespace

void parse_bracket_closure(ConfigReader& r) { parse(r); }

ExperimentResult run_bracket_closure(const json& config) {
  ConfigReader rd(config);
  const Params p = parse(rd);
  rd.throw_if_findings();
  const std::uint64_t seed = config.value("seed", std::uint64_t{0});

  // x sigma_x against p sigma_y: the classical part of the bracket is the
  // product <sigma_x><sigma_y>, quartic on the sphere.
  const auto a = HybridObservable::coordinate_times(1, 0, false, HermitianMatrix::pauli_x());
  const auto b = HybridObservable::coordinate_times(1, 0, true, HermitianMatrix::pauli_y());
  // x 1 against p sigma_x: <1> = C is constant on the sphere, so the product
  // stays quadratic there.
  const auto c = HybridObservable::coordinate_times(1, 0, false, HermitianMatrix::identity(2));
  const auto d = HybridObservable::coordinate_times(1, 0, true, HermitianMatrix::pauli_x());

  ExperimentResult res;
  res.table.columns = {"probe", "x", "p", "quartic", "finite_difference", "relative_error",
                       "fit_residual", "control_fit_residual"};
  double max_err = 0.0;
  double min_residual = INFINITY;
  double max_control_residual = 0.0;
  std::size_t flagged = 0;
  std::size_t control_quadratic = 0;
  for (std::size_t k = 0; k < p.probes; ++k) {
    Philox rng(seed, k);
    const ClPhasePoint cl{{rng.normal()}, {rng.normal()}};
    const HybridPoint point{cl, random_sphere_point(2, rng)};

    const QuarticTensor m = quartic_terms(a, b, cl);
    const double q = m.evaluate(point.qm);
    const double fd = testing::fd_classical_bracket(a, b, point, p.fd_step);
    const double err = std::fabs(q - fd) / std::max(std::fabs(fd), 1e-3);
    max_err = std::max(max_err, err);

    const QuadraticFitReport fit = quadratic_fit(m, p.fit_samples, seed + k, p.fit_threshold);
    if (!fit.is_quadratic) ++flagged;
    min_residual = std::min(min_residual, fit.relative_residual);

    const QuadraticFitReport ctl =
        quadratic_fit(quartic_terms(c, d, cl), p.fit_samples, seed + k, p.fit_threshold);
    if (ctl.is_quadratic) ++control_quadratic;
    max_control_residual = std::max(max_control_residual, ctl.relative_residual);

    res.table.rows.push_back({static_cast<double>(k), cl.x[0], cl.p[0], q, fd, err,
                              fit.relative_residual, ctl.relative_residual});
  }
  const double n = static_cast<double>(p.probes);
  res.checks.push_back(check_at_most("quartic_vs_finite_difference", max_err, 1e-8));
  res.checks.push_back(check_at_least("non_quadratic_flagged_fraction",
                                      static_cast<double>(flagged) / n, 1.0));
  res.checks.push_back(check_at_least("control_quadratic_fraction",
                                      static_cast<double>(control_quadratic) / n, 1.0));
  res.details = {{"probes", p.probes},
                 {"min_fit_residual", min_residual},
                 {"max_control_fit_residual", max_control_residual},
                 {"fit_threshold", p.fit_threshold}};
  return res;
}

}  // namespace hybridyn::experiments

#include <algorithm>
#include <cmath>

#include "hybridyn/decoherence.hpp"
#include "hybridyn/experiments/experiment.hpp"

namespace hybridyn::experiments {
namespace {

struct Params {
  DecoherenceParams physics;
  FrequencyDistribution dist = FrequencyDistribution{FrequencyKind::exponential, 0.01, 0.0};
  std::size_t realizations = 512;
  double control_shift = -1.0;  // negative: use the distribution mean
  bool analytic = true;
};

double distribution_mean(const FrequencyDistribution& d) {
  switch (d.kind) {
    case FrequencyKind::uniform_range:
      return 0.5 * (d.p1 + d.p2);
    case FrequencyKind::exponential:
      return d.p1;
    case FrequencyKind::gaussian_positive:
      return std::max(d.p1, 0.0);
  }
  return 0.0;
}

Params parse(ConfigReader& r) {
  r.known_keys("", {"experiment", "seed", "output", "E1", "E2", "distribution", "realizations",
                    "environment", "integrator", "control_shift", "analytic"});
  r.known_keys("distribution", {"kind", "mean", "lower", "upper", "location", "width"});
  r.known_keys("environment", {"mass", "omega", "lambda"});
  Params p;
  p.physics.E1 = r.number("E1", p.physics.E1);
  p.physics.E2 = r.number("E2", p.physics.E2);
  p.analytic = r.flag("analytic", p.analytic);
  if (!(std::fabs(p.physics.E1 - p.physics.E2) > 0.0)) {
    r.add("E2", p.analytic
                    ? "degenerate q-bit energies E1 = E2: the weak-coupling frequency formula has a pole there"
                    : "degenerate q-bit energies are not supported by the dephasing experiment");
  }
  const std::string kind = r.choice("distribution.kind", "exponential",
                                    {"uniform_range", "exponential", "gaussian_positive"});
  p.dist.kind = parse_frequency_kind(kind);
  switch (p.dist.kind) {
    case FrequencyKind::exponential:
      p.dist.p1 = r.positive("distribution.mean", 0.01);
      break;
    case FrequencyKind::uniform_range:
      p.dist.p1 = r.nonnegative("distribution.lower", 0.0);
      p.dist.p2 = r.positive("distribution.upper", 0.02);
      r.require(p.dist.p2 > p.dist.p1, "distribution.upper", "must exceed distribution.lower");
      break;
    case FrequencyKind::gaussian_positive:
      p.dist.p1 = r.number("distribution.location", 0.01);
      p.dist.p2 = r.positive("distribution.width", 0.005);
      break;
  }
  p.realizations = r.count("realizations", p.realizations);
  p.physics.env_mass = r.positive("environment.mass", p.physics.env_mass);
  p.physics.env_omega = r.positive("environment.omega", p.physics.env_omega);
  p.physics.env_lambda = r.number("environment.lambda", p.physics.env_lambda);
  r.require(p.physics.env_lambda != 0.0, "environment.lambda", "must be nonzero");
  IntegratorConfig d;
  d.dt = 0.01;
  d.t_final = 500.0;
  d.record_stride = 2500;
  p.physics.integrator = r.integrator(d);
  p.control_shift = r.number("control_shift", p.control_shift);
  return p;
}

}  // namespace

void parse_qbit_decoherence(ConfigReader& r) { parse(r); }

ExperimentResult run_qbit_decoherence(const json& config) {
  ConfigReader r(config);
  Params p = parse(r);
  r.throw_if_findings();
  const std::uint64_t seed = config.value("seed", std::uint64_t{0});

  ExperimentResult res;
  if (!p.physics.in_slow_regime()) {
    res.warnings.push_back("environment frequency exceeds 0.1 min(E1, E2); the slow-oscillator reduction may not hold");
  }
  const DecoherenceResult avg = decoherence_experiment(p.physics, p.dist, p.realizations, seed);
  const double control_shift = p.control_shift >= 0.0 ? p.control_shift : distribution_mean(p.dist);
  const DecoherenceResult ctl = decoherence_for_shifts(p.physics, p.dist, {control_shift});
  const double ctl_bound = ctl.mean_subleading_bound;

  res.table.columns = {"t", "re_rho12", "im_rho12", "abs_rho12", "analytic_abs_f",
                       "standard_error", "control_abs_rho12"};
  double band_ratio = 0.0;
  double monotone_ratio = 0.0;
  double control_min = 1.0;
  for (std::size_t j = 0; j < avg.times.size(); ++j) {
    const double m = std::abs(avg.mean_coherence[j]);
    const double c = std::abs(ctl.mean_coherence[j]);
    const double band = avg.mean_subleading_bound + 4.0 * avg.standard_error[j];
    band_ratio = std::max(band_ratio, std::fabs(m - avg.analytic_abs[j]) / band);
    control_min = std::min(control_min, c);
    if (j > 0) {
      const double rise = m - std::abs(avg.mean_coherence[j - 1]);
      const double allowed = 4.0 * (avg.standard_error[j] + avg.standard_error[j - 1]) +
                             2.0 * avg.mean_subleading_bound;
      monotone_ratio = std::max(monotone_ratio, rise / allowed);
    }
    res.table.rows.push_back({avg.times[j], avg.mean_coherence[j].real(),
                              avg.mean_coherence[j].imag(), m, avg.analytic_abs[j],
                              avg.standard_error[j], c});
  }

  res.checks.push_back(check_at_most("envelope_band_ratio", band_ratio, 1.0));
  res.checks.push_back(check_at_most("monotone_decay_ratio", monotone_ratio, 1.0));
  res.checks.push_back(check_at_least("control_min_modulus", control_min, 1.0 - 2.0 * ctl_bound));
  res.checks.push_back(check_at_most("constraint_drift",
                                     std::max(avg.max_constraint_drift, ctl.max_constraint_drift),
                                     1e-9));
  res.details = {{"realizations", avg.realizations},
                 {"distribution", frequency_kind_name(p.dist.kind)},
                 {"distribution_parameters", {p.dist.p1, p.dist.p2}},
                 {"mean_subleading_bound", avg.mean_subleading_bound},
                 {"control_shift", control_shift},
                 {"control_subleading_bound", ctl_bound},
                 {"max_energy_drift", std::max(avg.max_energy_drift, ctl.max_energy_drift)},
                 {"method", method_name(p.physics.integrator.method)}};
  return res;
}

}  // namespace hybridyn::experiments

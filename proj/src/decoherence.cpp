#include "hybridyn/decoherence.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "hybridyn/errors.hpp"
#include "hybridyn/models.hpp"
#include "hybridyn/parallel.hpp"
#include "hybridyn/summation.hpp"

namespace hybridyn {
namespace {

void require_nondegenerate(double E1, double E2) {
  if (!(std::fabs(E1 - E2) > 1e-12 * std::max({1.0, std::fabs(E1), std::fabs(E2)}))) {
    throw ParameterError("degenerate q-bit energies: the weak-coupling frequencies have a pole at E1 = E2");
  }
}

double gaussian_normalization(double mu, double s) {
  return s * std::sqrt(std::numbers::pi / 2.0) *
         (1.0 + std::erf(mu / (s * std::numbers::sqrt2)));
}

}  // namespace

void EnvironmentSpec::validate() const {
  for (const auto& o : oscillators) {
    if (!(o.m > 0.0) || !(o.omega > 0.0)) {
      throw ParameterError("environment masses and frequencies must be positive");
    }
    if (!std::isfinite(o.lambda) || !std::isfinite(o.a) || !std::isfinite(o.b)) {
      throw ParameterError("environment coefficients must be finite");
    }
  }
}

const char* frequency_kind_name(FrequencyKind k) noexcept {
  switch (k) {
    case FrequencyKind::uniform_range:
      return "uniform_range";
    case FrequencyKind::exponential:
      return "exponential";
    case FrequencyKind::gaussian_positive:
      return "gaussian_positive";
  }
  return "?";
}

FrequencyKind parse_frequency_kind(const std::string& name) {
  if (name == "uniform_range") return FrequencyKind::uniform_range;
  if (name == "exponential") return FrequencyKind::exponential;
  if (name == "gaussian_positive") return FrequencyKind::gaussian_positive;
  throw ParameterError("unknown frequency distribution '" + name + "'");
}

FrequencyDistribution FrequencyDistribution::uniform(double lo, double hi) {
  FrequencyDistribution d{FrequencyKind::uniform_range, lo, hi};
  d.validate();
  return d;
}

FrequencyDistribution FrequencyDistribution::exponential(double mean) {
  FrequencyDistribution d{FrequencyKind::exponential, mean, 0.0};
  d.validate();
  return d;
}

FrequencyDistribution FrequencyDistribution::gaussian_positive(double location, double width) {
  FrequencyDistribution d{FrequencyKind::gaussian_positive, location, width};
  d.validate();
  return d;
}

void FrequencyDistribution::validate() const {
  switch (kind) {
    case FrequencyKind::uniform_range:
      if (!(p1 >= 0.0) || !(p2 > p1) || !std::isfinite(p2)) {
        throw ParameterError("uniform range needs 0 <= lower < upper");
      }
      return;
    case FrequencyKind::exponential:
      if (!(p1 > 0.0) || !std::isfinite(p1)) throw ParameterError("exponential mean must be positive");
      return;
    case FrequencyKind::gaussian_positive:
      if (!std::isfinite(p1) || !(p2 > 0.0) || !std::isfinite(p2)) {
        throw ParameterError("gaussian width must be positive");
      }
      if (!(gaussian_normalization(p1, p2) > 0.0)) {
        throw ParameterError("gaussian has no mass on Omega >= 0");
      }
      return;
  }
}

double FrequencyDistribution::density(double omega) const {
  if (omega < 0.0) return 0.0;
  switch (kind) {
    case FrequencyKind::uniform_range:
      return (omega >= p1 && omega <= p2) ? 1.0 / (p2 - p1) : 0.0;
    case FrequencyKind::exponential:
      return std::exp(-omega / p1) / p1;
    case FrequencyKind::gaussian_positive: {
      const double u = (omega - p1) / p2;
      return std::exp(-0.5 * u * u) / gaussian_normalization(p1, p2);
    }
  }
  return 0.0;
}

double FrequencyDistribution::sample(Philox& rng) const {
  switch (kind) {
    case FrequencyKind::uniform_range:
      return p1 + (p2 - p1) * rng.uniform();
    case FrequencyKind::exponential:
      return -p1 * std::log(rng.uniform());
    case FrequencyKind::gaussian_positive:
      for (;;) {
        const double v = p1 + p2 * rng.normal();
        if (v >= 0.0) return v;
      }
  }
  return 0.0;
}

std::vector<double> driven_cl_solution(const EnvironmentSpec& env,
                                       const std::vector<double>& times,
                                       const std::vector<double>& sigma_expectation, double t) {
  env.validate();
  if (times.size() != sigma_expectation.size() || times.empty()) {
    throw DimensionError("series times and values must have equal, nonzero length");
  }
  if (times.front() != 0.0) throw ParameterError("series must start at t = 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw ParameterError("series times must increase");
  }
  if (t < 0.0 || t > times.back()) {
    throw ParameterError("requested time lies outside the series");
  }

  std::vector<double> out;
  out.reserve(env.oscillators.size());
  std::vector<double> pieces;
  for (const auto& o : env.oscillators) {
    double x = o.a * std::cos(o.omega * t) + o.b * std::sin(o.omega * t);
    if (o.lambda != 0.0) {
      auto kernel = [&](double s, double sig) {
        return std::sin(o.omega * (t - s)) / (o.m * o.omega) * sig;
      };
      pieces.clear();
      for (std::size_t i = 1; i < times.size() && times[i - 1] < t; ++i) {
        double s1 = times[i];
        double v1 = sigma_expectation[i];
        if (s1 > t) {
          const double frac = (t - times[i - 1]) / (times[i] - times[i - 1]);
          v1 = sigma_expectation[i - 1] + frac * (sigma_expectation[i] - sigma_expectation[i - 1]);
          s1 = t;
        }
        const double s0 = times[i - 1];
        pieces.push_back(0.5 * (s1 - s0) * (kernel(s0, sigma_expectation[i - 1]) + kernel(s1, v1)));
      }
      x -= o.lambda * pairwise_sum(pieces);
    }
    out.push_back(x);
  }
  return out;
}

std::pair<double, double> weak_coupling_frequencies(double E1, double E2, double xi) {
  require_nondegenerate(E1, E2);
  const double d = 2.0 * (E1 * E1 - E2 * E2);
  const double xi2 = xi * xi;
  return {E1 + xi2 * E2 / d, E2 - xi2 * E1 / d};
}

cplx offdiagonal_element(double E1, double E2, double xi, double t) {
  require_nondegenerate(E1, E2);
  if (E1 == 0.0 || E2 == 0.0) throw ParameterError("off-diagonal element needs nonzero energies");
  const auto [w1, w2] = weak_coupling_frequencies(E1, E2, xi);
  const double xi2 = xi * xi;
  const cplx i(0.0, 1.0);
  const double c = xi2 / (4.0 * (E1 * E1 - E2 * E2));
  return std::exp(i * ((w2 - w1) * t)) * (1.0 - xi2 / (4.0 * E1 * E2)) -
         c * ((E2 / E1) * std::exp(i * ((w1 + w2) * t)) - (E1 / E2) * std::exp(-i * ((w1 + w2) * t)));
}

cplx dephasing_average(const FrequencyDistribution& dist, double t) {
  dist.validate();
  const cplx i(0.0, 1.0);
  if (t == 0.0) return 1.0;
  switch (dist.kind) {
    case FrequencyKind::uniform_range: {
      const double a = dist.p1;
      const double b = dist.p2;
      return (std::exp(i * (b * t)) - std::exp(i * (a * t))) / (i * ((b - a) * t));
    }
    case FrequencyKind::exponential:
      return 1.0 / (1.0 - i * (dist.p1 * t));
    case FrequencyKind::gaussian_positive: {
      using boost::math::quadrature::gauss_kronrod;
      const double lo = std::max(0.0, dist.p1 - 40.0 * dist.p2);
      const double hi = std::max(dist.p1, 0.0) + 40.0 * dist.p2;
      // Split the range so every panel holds only a few oscillations.
      const double period = 2.0 * std::numbers::pi / std::fabs(t);
      const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / period)) + 1;
      const std::size_t count = std::min<std::size_t>(panels, 100000);
      const double width = (hi - lo) / static_cast<double>(count);
      std::vector<double> re(count), im(count);
      for (std::size_t k = 0; k < count; ++k) {
        const double a = lo + width * static_cast<double>(k);
        const double b = k + 1 == count ? hi : a + width;
        re[k] = gauss_kronrod<double, 15>::integrate(
            [&](double w) { return dist.density(w) * std::cos(w * t); }, a, b, 10, 1e-12);
        im[k] = gauss_kronrod<double, 15>::integrate(
            [&](double w) { return dist.density(w) * std::sin(w * t); }, a, b, 10, 1e-12);
      }
      return {pairwise_sum(re), pairwise_sum(im)};
    }
  }
  return 0.0;
}

double coupling_for_shift(double delta_e, double shift) {
  if (!(shift >= 0.0)) throw ParameterError("frequency shift must be nonnegative");
  return 0.5 * std::sqrt(shift * (2.0 * std::fabs(delta_e) + shift));
}

double subleading_bound(double E1, double E2, double xi) {
  const double theta = 0.5 * std::atan2(2.0 * std::fabs(xi), std::fabs(E2 - E1));
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  const double alpha = c2 * std::cos(theta) * std::cos(theta);
  const double beta = s2 * s2;
  const double gamma = -c2 * std::sin(theta) * std::sin(theta);
  return (1.0 - alpha) + beta + std::fabs(gamma);
}

void DecoherenceParams::validate() const {
  if (!std::isfinite(E1) || !std::isfinite(E2)) throw ParameterError("q-bit energies must be finite");
  require_nondegenerate(E1, E2);
  if (!(env_mass > 0.0) || !(env_omega > 0.0)) {
    throw ParameterError("environment mass and frequency must be positive");
  }
  if (!(env_lambda != 0.0) || !std::isfinite(env_lambda)) {
    throw ParameterError("environment coupling must be nonzero and finite");
  }
  integrator.validate();
}

bool DecoherenceParams::in_slow_regime() const noexcept {
  return env_omega <= 0.1 * std::min(std::fabs(E1), std::fabs(E2));
}

DecoherenceResult decoherence_for_shifts(const DecoherenceParams& params,
                                         const FrequencyDistribution& dist,
                                         const std::vector<double>& shifts) {
  params.validate();
  dist.validate();
  if (shifts.empty()) throw ParameterError("need at least one realization");
  const IntegratorConfig& cfg = params.integrator;
  const std::size_t steps = cfg.step_count();
  const HybridModel model = make_qbit_environment(params.E1, params.E2, HermitianMatrix::pauli_x(),
                                                  {params.env_mass}, {params.env_omega},
                                                  {params.env_lambda});
  const double delta_e = params.E2 - params.E1;

  DecoherenceResult res;
  res.times.push_back(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    if (k % cfg.record_stride == 0 || k == steps) {
      res.times.push_back(static_cast<double>(k) * cfg.dt);
    }
  }
  const std::size_t R = shifts.size();
  const std::size_t T = res.times.size();
  std::vector<std::vector<cplx>> coherence(R, std::vector<cplx>(T));
  std::vector<double> c_drift(R, 0.0), e_drift(R, 0.0), bounds(R, 0.0);

  parallel_for(R, [&](std::size_t r) {
    const double xi = coupling_for_shift(delta_e, shifts[r]);
    bounds[r] = subleading_bound(params.E1, params.E2, xi);
    std::vector<double> y{xi / params.env_lambda, 0.0, 1.0, 1.0, 0.0, 0.0};
    const double h0 = total_hamiltonian_flat(model, y);
    auto sample = [&](std::size_t slot) {
      coherence[r][slot] = cplx(y[2], y[4]) * cplx(y[3], -y[5]);
      const double c = 0.5 * (y[2] * y[2] + y[3] * y[3] + y[4] * y[4] + y[5] * y[5]);
      c_drift[r] = std::max(c_drift[r], std::fabs(c - 1.0));
      e_drift[r] = std::max(e_drift[r], std::fabs(total_hamiltonian_flat(model, y) - h0));
    };
    sample(0);
    std::size_t slot = 1;
    for (std::size_t k = 1; k <= steps; ++k) {
      step_flat(model, y, cfg.dt, cfg, static_cast<double>(k - 1) * cfg.dt);
      if (k % cfg.record_stride == 0 || k == steps) sample(slot++);
    }
  });

  const double Rd = static_cast<double>(R);
  std::vector<double> re(R), im(R);
  for (std::size_t j = 0; j < T; ++j) {
    for (std::size_t r = 0; r < R; ++r) {
      re[r] = coherence[r][j].real();
      im[r] = coherence[r][j].imag();
    }
    const double mr = pairwise_sum(re) / Rd;
    const double mi = pairwise_sum(im) / Rd;
    double se = 0.0;
    if (R > 1) {
      for (std::size_t r = 0; r < R; ++r) {
        re[r] = (re[r] - mr) * (re[r] - mr);
        im[r] = (im[r] - mi) * (im[r] - mi);
      }
      se = std::sqrt((pairwise_sum(re) + pairwise_sum(im)) / (Rd - 1.0) / Rd);
    }
    res.mean_coherence.emplace_back(mr, mi);
    res.standard_error.push_back(se);
    res.analytic_abs.push_back(std::abs(dephasing_average(dist, res.times[j])));
  }
  res.mean_subleading_bound = pairwise_sum(bounds) / Rd;
  res.shifts = shifts;
  res.max_constraint_drift = *std::max_element(c_drift.begin(), c_drift.end());
  res.max_energy_drift = *std::max_element(e_drift.begin(), e_drift.end());
  res.realizations = R;
  return res;
}

DecoherenceResult decoherence_experiment(const DecoherenceParams& params,
                                         const FrequencyDistribution& dist,
                                         std::size_t realizations, std::uint64_t seed) {
  dist.validate();
  std::vector<double> shifts(realizations);
  for (std::size_t r = 0; r < realizations; ++r) {
    Philox rng(seed, r);
    shifts[r] = dist.sample(rng);
  }
  return decoherence_for_shifts(params, dist, shifts);
}

}  // namespace hybridyn

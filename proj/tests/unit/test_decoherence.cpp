#include <doctest.h>

#include <cmath>
#include <string>

#include "hybridyn/decoherence.hpp"
#include "hybridyn/errors.hpp"
#include "oracles.hpp"

using namespace hybridyn;

namespace {

cplx simpson_average(const FrequencyDistribution& d, double lo, double hi, double t) {
  const int panels = 2 * static_cast<int>(std::ceil((hi - lo) * std::fabs(t) * 200.0)) + 40000;
  return oracle::simpson([&](double w) { return d.density(w) * std::exp(cplx(0.0, w * t)); }, lo,
                         hi, panels);
}

}  // namespace

TEST_CASE("densities are normalized") {
  const FrequencyDistribution u = FrequencyDistribution::uniform(0.005, 0.02);
  const FrequencyDistribution e = FrequencyDistribution::exponential(0.01);
  const FrequencyDistribution g = FrequencyDistribution::gaussian_positive(0.003, 0.004);
  CHECK(simpson_average(u, 0.005, 0.02, 0.0).real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(simpson_average(e, 0.0, 0.6, 0.0).real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(simpson_average(g, 0.0, 0.1, 0.0).real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(e.density(-1.0) == 0.0);
  CHECK_THROWS(FrequencyDistribution::exponential(-1.0).validate());
  CHECK_THROWS(FrequencyDistribution::uniform(0.2, 0.1).validate());
}

TEST_CASE("dephasing average against quadrature") {
  const FrequencyDistribution u = FrequencyDistribution::uniform(0.005, 0.02);
  const FrequencyDistribution e = FrequencyDistribution::exponential(0.01);
  const FrequencyDistribution g = FrequencyDistribution::gaussian_positive(0.003, 0.004);
  for (double t : {0.0, 1.0, 37.0, 250.0, 500.0}) {
    CHECK(std::abs(dephasing_average(u, t) - simpson_average(u, 0.005, 0.02, t)) < 1e-9);
    CHECK(std::abs(dephasing_average(e, t) - simpson_average(e, 0.0, 0.6, t)) < 1e-9);
    CHECK(std::abs(dephasing_average(g, t) - simpson_average(g, 0.0, 0.1, t)) < 1e-9);
    CHECK(std::abs(dephasing_average(e, t)) ==
          doctest::Approx(1.0 / std::sqrt(1.0 + 1e-4 * t * t)).epsilon(1e-13));
  }
}

TEST_CASE("sampling follows the density") {
  const FrequencyDistribution e = FrequencyDistribution::exponential(0.01);
  Philox rng(51);
  double s = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double w = e.sample(rng);
    CHECK_FALSE(w < 0.0);
    s += w;
  }
  CHECK(std::fabs(s / n - 0.01) < 5.0 * 0.01 / std::sqrt(n));
}

// Exact 2x2 propagation with a static coupling xi sigma_x from (1, 1)/sqrt(2).
TEST_CASE("subleading bound contains the exact deviation") {
  const double E1 = 1.0, E2 = 2.0;
  for (double xi : {0.0, 0.01, 0.05, 0.2, 0.6}) {
    Eigen::MatrixXcd h(2, 2);
    h << E1, xi, xi, E2;
    Eigen::VectorXcd psi0(2);
    psi0 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const double D = std::sqrt((E2 - E1) * (E2 - E1) + 4.0 * xi * xi);
    const double bound = subleading_bound(E1, E2, xi);
    double worst = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double t = 0.05 * k;
      const Eigen::VectorXcd psi = oracle::propagate_taylor(h, psi0, t);
      const cplx rho = 2.0 * psi(0) * std::conj(psi(1));
      worst = std::max(worst, std::abs(rho - std::exp(cplx(0.0, D * t))));
    }
    CHECK(worst <= bound + 1e-12);
    CHECK(worst >= 0.5 * bound);
  }
  // Second order in the coupling.
  const double r = subleading_bound(E1, E2, 1e-3) / subleading_bound(E1, E2, 2e-3);
  CHECK(r == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("coupling for a level-splitting shift") {
  for (double shift : {0.0, 1e-4, 0.01, 0.3}) {
    const double xi = coupling_for_shift(1.0, shift);
    CHECK(std::sqrt(1.0 + 4.0 * xi * xi) == doctest::Approx(1.0 + shift).epsilon(1e-14));
  }
  CHECK_THROWS_AS(coupling_for_shift(1.0, -0.1), ParameterError);
}

TEST_CASE("weak-coupling frequencies") {
  const auto [w1, w2] = weak_coupling_frequencies(1.0, 2.0, 0.0);
  CHECK(w1 == 1.0);
  CHECK(w2 == 2.0);
  try {
    weak_coupling_frequencies(1.5, 1.5, 0.1);
    FAIL("expected an error");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("pole") != std::string::npos);
  }
  for (double t : {0.0, 0.7, 3.0}) {
    CHECK(std::abs(offdiagonal_element(1.0, 2.0, 0.0, t) - std::exp(cplx(0.0, t))) < 1e-15);
  }
}

TEST_CASE("driven oscillator with a constant source") {
  EnvironmentSpec env{{{2.0, 0.5, 0.3, 0.1, -0.2}}};
  std::vector<double> times, sigma;
  for (int k = 0; k <= 20000; ++k) {
    times.push_back(1e-3 * k);
    sigma.push_back(0.8);
  }
  for (double t : {0.0, 3.3, 12.0, 20.0}) {
    const double w = 0.5;
    const double expected = 0.1 * std::cos(w * t) - 0.2 * std::sin(w * t) -
                            0.3 * 0.8 * (1.0 - std::cos(w * t)) / (2.0 * w * w);
    CHECK(driven_cl_solution(env, times, sigma, t)[0] == doctest::Approx(expected).epsilon(1e-8));
  }
  CHECK_THROWS(driven_cl_solution(env, times, sigma, 25.0));
}

TEST_CASE("small decoherence run") {
  DecoherenceParams p;
  p.integrator.dt = 0.01;
  p.integrator.t_final = 20.0;
  p.integrator.record_stride = 500;
  const FrequencyDistribution d = FrequencyDistribution::exponential(0.05);
  const DecoherenceResult a = decoherence_experiment(p, d, 16, 3);
  const DecoherenceResult b = decoherence_experiment(p, d, 16, 3);
  REQUIRE(a.times.size() == 5);
  CHECK(a.mean_coherence == b.mean_coherence);
  CHECK(std::abs(a.mean_coherence[0] - cplx(1.0, 0.0)) < 1e-14);
  CHECK(a.max_constraint_drift < 1e-9);
  // Each realization precesses at dE + shift up to the subleading terms.
  const DecoherenceResult one = decoherence_for_shifts(p, d, {0.02});
  const double xi = coupling_for_shift(1.0, 0.02);
  for (std::size_t j = 0; j < one.times.size(); ++j) {
    const cplx expected = std::exp(cplx(0.0, 1.02 * one.times[j]));
    CHECK(std::abs(one.mean_coherence[j] - expected) <= subleading_bound(1.0, 2.0, xi) + 1e-6);
  }
}

#pragma once

// Q-bit coupled to slow classical oscillators: driven-oscillator solution,
// weak-coupling frequencies, the off-diagonal density-matrix element and its
// average over a distribution of effective frequency shifts.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hybridyn/integrator.hpp"
#include "hybridyn/oscillator_rep.hpp"
#include "hybridyn/rng.hpp"

namespace hybridyn {

struct EnvironmentOscillator {
  double m = 1.0;
  double omega = 1.0;
  double lambda = 0.0;
  double a = 0.0;  // x0(t) = a cos(omega t) + b sin(omega t)
  double b = 0.0;
};

struct EnvironmentSpec {
  std::vector<EnvironmentOscillator> oscillators;

  void validate() const;
};

enum class FrequencyKind { uniform_range, exponential, gaussian_positive };

const char* frequency_kind_name(FrequencyKind k) noexcept;
FrequencyKind parse_frequency_kind(const std::string& name);

// Normalized density P(Omega) on Omega >= 0.
//   uniform_range:     p1 = lower edge, p2 = upper edge
//   exponential:       p1 = mean
//   gaussian_positive: p1 = location, p2 = width, truncated to Omega >= 0
struct FrequencyDistribution {
  FrequencyKind kind = FrequencyKind::exponential;
  double p1 = 1.0;
  double p2 = 0.0;

  static FrequencyDistribution uniform(double lo, double hi);
  static FrequencyDistribution exponential(double mean);
  static FrequencyDistribution gaussian_positive(double location, double width);

  void validate() const;
  double density(double omega) const;
  double sample(Philox& rng) const;
};

// x_k(t) = x0_k(t) - lambda_k int_0^t ds sin(w_k (t - s)) / (m_k w_k) <Sigma>(s)
// by the trapezoidal rule on the series grid. `times` must start at 0, be
// strictly increasing and reach t.
std::vector<double> driven_cl_solution(const EnvironmentSpec& env,
                                       const std::vector<double>& times,
                                       const std::vector<double>& sigma_expectation, double t);

// Perturbative characteristic frequencies for a static coupling xi.
std::pair<double, double> weak_coupling_frequencies(double E1, double E2, double xi);

// Leading-order rho_12(t) for real initial coefficients, normalized to the
// free precession amplitude.
cplx offdiagonal_element(double E1, double E2, double xi, double t);

// f(t) = int_0^inf dOmega P(Omega) exp(i Omega t).
cplx dephasing_average(const FrequencyDistribution& dist, double t);

// Static coupling whose exact level-splitting shift equals `shift`:
// sqrt(dE^2 + 4 xi^2) = |dE| + shift.
double coupling_for_shift(double delta_e, double shift);

// For the state (1, 1)/sqrt(2) under a static coupling xi, 2 rho_12(t) equals
// alpha e^{i D t} + beta + gamma e^{-i D t}, D = sqrt(dE^2 + 4 xi^2). Returns
// (1 - alpha) + beta + |gamma|, which bounds |2 rho_12 - e^{i D t}|.
double subleading_bound(double E1, double E2, double xi);

struct DecoherenceParams {
  double E1 = 1.0;
  double E2 = 2.0;
  // A single heavy, slow environment oscillator whose displacement a = xi
  // sets the static coupling of each realization.
  double env_mass = 1e12;
  double env_omega = 1e-6;
  double env_lambda = 1.0;
  IntegratorConfig integrator;

  void validate() const;
  // True when the slow-environment condition omega <= 0.1 min(E1, E2) holds.
  bool in_slow_regime() const noexcept;
};

struct DecoherenceResult {
  std::vector<double> times;
  std::vector<cplx> mean_coherence;   // average of 2 rho_12(t), equal to 1 at t = 0
  std::vector<double> standard_error; // Monte-Carlo error of |mean_coherence|
  std::vector<double> analytic_abs;   // |f(t)|
  double mean_subleading_bound = 0.0; // average of subleading_bound over draws
  std::vector<double> shifts;         // drawn Omega values
  double max_constraint_drift = 0.0;
  double max_energy_drift = 0.0;
  std::size_t realizations = 0;
};

// Draws Omega_r from dist with Philox(seed, r), evolves the full hybrid q-bit
// model from X = (1, 1), P = 0 with the environment displaced to
// coupling_for_shift(E2 - E1, Omega_r), and averages 2 rho_12 at the recorded
// times of params.integrator.
DecoherenceResult decoherence_experiment(const DecoherenceParams& params,
                                         const FrequencyDistribution& dist,
                                         std::size_t realizations, std::uint64_t seed);

// Same evolution for explicitly given shifts.
DecoherenceResult decoherence_for_shifts(const DecoherenceParams& params,
                                         const FrequencyDistribution& dist,
                                         const std::vector<double>& shifts);

}  // namespace hybridyn

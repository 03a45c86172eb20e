#pragma once

// Sample representation of the hybrid density rho(x, p; X, P): weighted
// points transported along the characteristics of the hybrid flow.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hybridyn/hybrid_bracket.hpp"
#include "hybridyn/integrator.hpp"
#include "hybridyn/models.hpp"

namespace hybridyn {

struct EnsembleMember {
  double weight = 0.0;
  HybridPoint point;
};

struct HybridEnsemble {
  std::vector<EnsembleMember> members;
  std::uint64_t rng_seed = 0;

  std::size_t size() const noexcept { return members.size(); }
  std::size_t cl_dim() const;
  std::size_t qm_dim() const;

  // Throws unless weights are nonnegative, sum to 1 within 1e-12, dimensions
  // are uniform and every member is on the constraint sphere.
  void validate(double constraint_tolerance = kDefaultConstraintTolerance) const;
};

// Equal weights 1/size.
HybridEnsemble make_ensemble(std::vector<HybridPoint> points, std::uint64_t seed);

// Point i is drawn from Philox(seed, stream = i), so any subset can be
// regenerated independently.
std::vector<QmPhasePoint> sample_sphere(std::size_t N, std::size_t count, std::uint64_t seed);

struct SphereIdentityEstimate {
  Eigen::MatrixXcd mean;     // (N/2) E[(X_a + i P_a)(X_b - i P_b)]
  Eigen::MatrixXd sigma_re;  // standard error of the real parts
  Eigen::MatrixXd sigma_im;
  std::size_t samples = 0;
};

SphereIdentityEstimate sphere_identity_check(std::size_t N, std::size_t samples,
                                             std::uint64_t seed);

// N! / (2 pi)^N. Iterative product up to N = 20, exp of a log-sum beyond.
double gamma_factor(std::size_t N);

HybridEnsemble evolve_ensemble(const HybridModel& model, const HybridEnsemble& ens,
                               const IntegratorConfig& cfg);

struct EnsembleSeries {
  std::vector<double> times;
  std::vector<HybridEnsemble> snapshots;
};

// Snapshots at every recorded time of cfg (record_stride steps apart).
EnsembleSeries evolve_ensemble_series(const HybridModel& model, const HybridEnsemble& ens,
                                      const IntegratorConfig& cfg);

double expectation(const HybridEnsemble& ens, const HybridObservable& obs);

// Classical axes: index k < n selects x_k, n <= k < 2n selects p_{k-n}.
struct MarginalHistogram {
  std::vector<std::size_t> axes;
  std::vector<std::vector<double>> edges;
  std::vector<double> masses;  // row-major over axes, last axis fastest
  double outside = 0.0;        // weight falling outside the edges

  bool operator==(const MarginalHistogram&) const = default;
};

MarginalHistogram marginal_cl(const HybridEnsemble& ens, const std::vector<std::size_t>& axes,
                              const std::vector<std::vector<double>>& edges);

HermitianMatrix marginal_qm_density_matrix(const HybridEnsemble& ens);

// (<x_a x_b>, <x_a><x_b>) over classical axes.
std::pair<double, double> cl_correlation(const HybridEnsemble& ens, std::size_t a,
                                         std::size_t b);

struct CovarianceEstimate {
  double covariance = 0.0;
  double standard_error = 0.0;
};

// Connected covariance <f g> - <f><g> of two observables over the members,
// with a delta-method standard error for equal-weight ensembles.
CovarianceEstimate cross_covariance(const HybridEnsemble& ens, const HybridObservable& f,
                                    const HybridObservable& g);

// Memberwise canonical map of the quantum sector by a unitary.
HybridEnsemble apply_qm_unitary(const HybridEnsemble& ens, const Eigen::MatrixXcd& u);

// Columnar text: a header line "# hybridyn-ensemble n=<n> N=<N> members=<m>
// seed=<s>", a column-name line, then one row per member: weight, x..., p...,
// X..., P..., 17 significant digits.
void write_snapshot(std::ostream& os, const HybridEnsemble& ens);
HybridEnsemble read_snapshot(std::istream& is);

}  // namespace hybridyn

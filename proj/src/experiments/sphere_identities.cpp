#include <algorithm>
#include <cmath>
#include <numbers>

#include "hybridyn/ensemble.hpp"
#include "hybridyn/experiments/experiment.hpp"

namespace hybridyn::experiments {
namespace {

struct Params {
  std::vector<std::size_t> dims{1, 2, 4};
  std::size_t samples = 100000;
  std::size_t gamma_max = 12;
};

Params parse(ConfigReader& r) {
  r.known_keys("", {"experiment", "seed", "output", "dims", "samples", "gamma_max"});
  Params p;
  p.dims = r.counts("dims", p.dims);
  p.samples = r.count("samples", p.samples, 2);
  p.gamma_max = r.count("gamma_max", p.gamma_max);
  r.require(p.gamma_max <= 170, "gamma_max", "must be at most 170");
  return p;
}

}  // namespace

void parse_sphere_identities(ConfigReader& r) { parse(r); }

ExperimentResult run_sphere_identities(const json& config) {
  ConfigReader rd(config);
  const Params p = parse(rd);
  rd.throw_if_findings();
  const std::uint64_t seed = config.value("seed", std::uint64_t{0});

  ExperimentResult res;
  res.table.columns = {"N", "a", "b", "re", "im", "sigma_re", "sigma_im"};
  double worst = 0.0;  // max deviation in units of the allowed band
  for (std::size_t d = 0; d < p.dims.size(); ++d) {
    const std::size_t N = p.dims[d];
    const SphereIdentityEstimate est = sphere_identity_check(N, p.samples, seed + d);
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = 0; b < N; ++b) {
        const auto ia = static_cast<Eigen::Index>(a);
        const auto ib = static_cast<Eigen::Index>(b);
        const cplx v = est.mean(ia, ib);
        const double target = a == b ? 1.0 : 0.0;
        worst = std::max({worst,
                          std::fabs(v.real() - target) / (4.0 * est.sigma_re(ia, ib) + 1e-12),
                          std::fabs(v.imag()) / (4.0 * est.sigma_im(ia, ib) + 1e-12)});
        res.table.rows.push_back({static_cast<double>(N), static_cast<double>(a),
                                  static_cast<double>(b), v.real(), v.imag(),
                                  est.sigma_re(ia, ib), est.sigma_im(ia, ib)});
      }
    }
  }

  double gamma_err = 0.0;
  json gammas = json::array();
  for (std::size_t N = 1; N <= p.gamma_max; ++N) {
    const double nd = static_cast<double>(N);
    const double ref = std::tgamma(nd + 1.0) / std::pow(2.0 * std::numbers::pi, nd);
    const double g = gamma_factor(N);
    gamma_err = std::max(gamma_err, std::fabs(g - ref) / ref);
    gammas.push_back(g);
  }

  res.checks.push_back(check_at_most("moment_band_ratio", worst, 1.0));
  res.checks.push_back(check_at_most("gamma_relative_error", gamma_err, 1e-14));
  res.details = {{"samples", p.samples}, {"dims", p.dims}, {"gamma_factors", gammas}};
  return res;
}

}  // namespace hybridyn::experiments

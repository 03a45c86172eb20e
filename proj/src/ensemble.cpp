#include "hybridyn/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "hybridyn/errors.hpp"
#include "hybridyn/format.hpp"
#include "hybridyn/parallel.hpp"
#include "hybridyn/rng.hpp"
#include "hybridyn/sampling.hpp"
#include "hybridyn/summation.hpp"

namespace hybridyn {
namespace {

void require_nonempty(const HybridEnsemble& ens) {
  if (ens.members.empty()) throw DimensionError("ensemble is empty");
}

double classical_axis(const HybridPoint& pt, std::size_t axis) {
  const std::size_t n = pt.cl.dim();
  if (axis < n) return pt.cl.x[axis];
  if (axis < 2 * n) return pt.cl.p[axis - n];
  throw DimensionError("classical axis " + std::to_string(axis) + " out of range");
}

// Integrates every member and hands the flat state to `visit` after each
// recorded step. Failures are reported for the lowest failing member index.
template <typename Visit>
void transport(const HybridModel& model, const HybridEnsemble& ens, const IntegratorConfig& cfg,
               Visit visit) {
  cfg.validate();
  const std::size_t steps = cfg.step_count();
  const std::size_t count = ens.size();
  std::vector<std::string> errors(count);
  std::vector<char> failed(count, 0);
  parallel_for(count, [&](std::size_t j) {
    try {
      std::vector<double> y = flatten(ens.members[j].point);
      std::size_t slot = 0;
      for (std::size_t k = 1; k <= steps; ++k) {
        step_flat(model, y, cfg.dt, cfg, static_cast<double>(k - 1) * cfg.dt);
        if (k % cfg.record_stride == 0 || k == steps) visit(j, slot++, y);
      }
    } catch (const std::exception& e) {
      errors[j] = e.what();
      failed[j] = 1;
    }
  });
  for (std::size_t j = 0; j < count; ++j) {
    if (failed[j]) {
      throw ConvergenceError("ensemble member " + std::to_string(j) + ": " + errors[j],
                             std::numeric_limits<double>::quiet_NaN(), 0.0);
    }
  }
}

}  // namespace

std::size_t HybridEnsemble::cl_dim() const {
  require_nonempty(*this);
  return members.front().point.cl_dim();
}

std::size_t HybridEnsemble::qm_dim() const {
  require_nonempty(*this);
  return members.front().point.qm_dim();
}

void HybridEnsemble::validate(double constraint_tolerance) const {
  require_nonempty(*this);
  const std::size_t n = cl_dim();
  const std::size_t N = qm_dim();
  std::vector<double> w;
  w.reserve(members.size());
  for (std::size_t j = 0; j < members.size(); ++j) {
    const auto& m = members[j];
    if (!(m.weight >= 0.0)) throw ParameterError("negative weight at member " + std::to_string(j));
    if (m.point.cl.x.size() != n || m.point.cl.p.size() != n || m.point.qm.X.size() != N ||
        m.point.qm.P.size() != N) {
      throw DimensionError("member " + std::to_string(j) + " has inconsistent dimensions");
    }
    if (std::fabs(constraint(m.point.qm) - 1.0) > constraint_tolerance) {
      throw NormalizationError("member " + std::to_string(j) + " is off the constraint sphere");
    }
    w.push_back(m.weight);
  }
  if (std::fabs(pairwise_sum(w) - 1.0) > 1e-12) {
    throw NormalizationError("ensemble weights do not sum to 1");
  }
}

HybridEnsemble make_ensemble(std::vector<HybridPoint> points, std::uint64_t seed) {
  HybridEnsemble ens;
  ens.rng_seed = seed;
  const double w = 1.0 / static_cast<double>(points.size());
  for (auto& p : points) ens.members.push_back({w, std::move(p)});
  return ens;
}

std::vector<QmPhasePoint> sample_sphere(std::size_t N, std::size_t count, std::uint64_t seed) {
  std::vector<QmPhasePoint> out(count);
  parallel_for(count, [&](std::size_t i) {
    Philox rng(seed, i);
    out[i] = random_sphere_point(N, rng);
  });
  return out;
}

SphereIdentityEstimate sphere_identity_check(std::size_t N, std::size_t samples,
                                             std::uint64_t seed) {
  if (samples < 2) throw ParameterError("sphere identity check needs at least 2 samples");
  const std::vector<QmPhasePoint> pts = sample_sphere(N, samples, seed);
  const auto n = static_cast<Eigen::Index>(N);
  const double half_n = 0.5 * static_cast<double>(N);
  SphereIdentityEstimate est;
  est.samples = samples;
  est.mean = Eigen::MatrixXcd::Zero(n, n);
  est.sigma_re = Eigen::MatrixXd::Zero(n, n);
  est.sigma_im = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> re(samples), im(samples);
  const double s = static_cast<double>(samples);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      for (std::size_t k = 0; k < samples; ++k) {
        const cplx v = half_n * cplx(pts[k].X[ua], pts[k].P[ua]) *
                       cplx(pts[k].X[ub], -pts[k].P[ub]);
        re[k] = v.real();
        im[k] = v.imag();
      }
      const double mr = pairwise_sum(re) / s;
      const double mi = pairwise_sum(im) / s;
      for (std::size_t k = 0; k < samples; ++k) {
        re[k] = (re[k] - mr) * (re[k] - mr);
        im[k] = (im[k] - mi) * (im[k] - mi);
      }
      est.mean(a, b) = cplx(mr, mi);
      est.sigma_re(a, b) = std::sqrt(pairwise_sum(re) / (s - 1.0) / s);
      est.sigma_im(a, b) = std::sqrt(pairwise_sum(im) / (s - 1.0) / s);
    }
  }
  return est;
}

double gamma_factor(std::size_t N) {
  if (N == 0) throw ParameterError("gamma factor needs N >= 1");
  const double two_pi = 2.0 * std::numbers::pi;
  if (N <= 20) {
    double g = 1.0;
    for (std::size_t k = 1; k <= N; ++k) g *= static_cast<double>(k) / two_pi;
    return g;
  }
  double log_g = 0.0;
  for (std::size_t k = 1; k <= N; ++k) log_g += std::log(static_cast<double>(k) / two_pi);
  return std::exp(log_g);
}

HybridEnsemble evolve_ensemble(const HybridModel& model, const HybridEnsemble& ens,
                               const IntegratorConfig& cfg) {
  require_nonempty(ens);
  HybridEnsemble out = ens;
  if (cfg.step_count() == 0) return out;
  IntegratorConfig c = cfg;
  c.record_stride = std::max<std::size_t>(1, cfg.step_count());
  transport(model, ens, c, [&](std::size_t j, std::size_t, const std::vector<double>& y) {
    out.members[j].point = unflatten(y, model.cl_dim(), model.qm_dim());
  });
  return out;
}

EnsembleSeries evolve_ensemble_series(const HybridModel& model, const HybridEnsemble& ens,
                                      const IntegratorConfig& cfg) {
  require_nonempty(ens);
  cfg.validate();
  const std::size_t steps = cfg.step_count();
  EnsembleSeries series;
  series.times.push_back(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    if (k % cfg.record_stride == 0 || k == steps) {
      series.times.push_back(static_cast<double>(k) * cfg.dt);
    }
  }
  series.snapshots.assign(series.times.size(), ens);
  transport(model, ens, cfg, [&](std::size_t j, std::size_t slot, const std::vector<double>& y) {
    series.snapshots[slot + 1].members[j].point = unflatten(y, model.cl_dim(), model.qm_dim());
  });
  return series;
}

double expectation(const HybridEnsemble& ens, const HybridObservable& obs) {
  require_nonempty(ens);
  std::vector<double> v(ens.size());
  for (std::size_t j = 0; j < ens.size(); ++j) {
    v[j] = ens.members[j].weight * eval_hybrid(obs, ens.members[j].point);
  }
  return pairwise_sum(v);
}

MarginalHistogram marginal_cl(const HybridEnsemble& ens, const std::vector<std::size_t>& axes,
                              const std::vector<std::vector<double>>& edges) {
  require_nonempty(ens);
  if (axes.empty() || axes.size() != edges.size()) {
    throw DimensionError("need one edge list per histogram axis");
  }
  std::size_t cells = 1;
  for (const auto& e : edges) {
    if (e.size() < 2 || !std::is_sorted(e.begin(), e.end())) {
      throw ParameterError("histogram edges must be sorted with at least 2 entries");
    }
    cells *= e.size() - 1;
  }
  MarginalHistogram h{axes, edges, std::vector<double>(cells, 0.0), 0.0};
  for (const auto& m : ens.members) {
    std::size_t index = 0;
    bool inside = true;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double v = classical_axis(m.point, axes[a]);
      const auto& e = edges[a];
      if (!(v >= e.front()) || v > e.back()) {
        inside = false;
        break;
      }
      auto it = std::upper_bound(e.begin(), e.end(), v);
      std::size_t bin = static_cast<std::size_t>(it - e.begin());
      bin = bin == 0 ? 0 : bin - 1;
      bin = std::min(bin, e.size() - 2);
      index = index * (e.size() - 1) + bin;
    }
    if (inside) {
      h.masses[index] += m.weight;
    } else {
      h.outside += m.weight;
    }
  }
  return h;
}

HermitianMatrix marginal_qm_density_matrix(const HybridEnsemble& ens) {
  require_nonempty(ens);
  const std::size_t N = ens.qm_dim();
  const std::size_t M = ens.size();
  HermitianMatrix rho(N);
  std::vector<double> re(M), im(M);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) {
      for (std::size_t k = 0; k < M; ++k) {
        const auto& q = ens.members[k].point.qm;
        // c_i conj(c_j) with c = (X + iP)/sqrt(2)
        const cplx v = 0.5 * ens.members[k].weight * cplx(q.X[i], q.P[i]) * cplx(q.X[j], -q.P[j]);
        re[k] = v.real();
        im[k] = v.imag();
      }
      rho.set(i, j, i == j ? cplx(pairwise_sum(re), 0.0) : cplx(pairwise_sum(re), pairwise_sum(im)));
    }
  }
  return rho;
}

std::pair<double, double> cl_correlation(const HybridEnsemble& ens, std::size_t a,
                                         std::size_t b) {
  require_nonempty(ens);
  const std::size_t M = ens.size();
  std::vector<double> ab(M), va(M), vb(M);
  for (std::size_t k = 0; k < M; ++k) {
    const double w = ens.members[k].weight;
    const double xa = classical_axis(ens.members[k].point, a);
    const double xb = classical_axis(ens.members[k].point, b);
    ab[k] = w * xa * xb;
    va[k] = w * xa;
    vb[k] = w * xb;
  }
  return {pairwise_sum(ab), pairwise_sum(va) * pairwise_sum(vb)};
}

CovarianceEstimate cross_covariance(const HybridEnsemble& ens, const HybridObservable& f,
                                    const HybridObservable& g) {
  require_nonempty(ens);
  const std::size_t M = ens.size();
  std::vector<double> fv(M), gv(M), buf(M);
  for (std::size_t k = 0; k < M; ++k) {
    fv[k] = eval_hybrid(f, ens.members[k].point);
    gv[k] = eval_hybrid(g, ens.members[k].point);
  }
  auto weighted_mean = [&](const std::vector<double>& v) {
    for (std::size_t k = 0; k < M; ++k) buf[k] = ens.members[k].weight * v[k];
    return pairwise_sum(buf);
  };
  const double fm = weighted_mean(fv);
  const double gm = weighted_mean(gv);
  std::vector<double> d(M);
  for (std::size_t k = 0; k < M; ++k) d[k] = (fv[k] - fm) * (gv[k] - gm);
  const double cov = weighted_mean(d);
  for (std::size_t k = 0; k < M; ++k) {
    const double w = ens.members[k].weight;
    buf[k] = w * w * (d[k] - cov) * (d[k] - cov);
  }
  return {cov, std::sqrt(pairwise_sum(buf))};
}

HybridEnsemble apply_qm_unitary(const HybridEnsemble& ens, const Eigen::MatrixXcd& u) {
  HybridEnsemble out = ens;
  for (auto& m : out.members) m.point.qm = apply_unitary(u, m.point.qm);
  return out;
}

void write_snapshot(std::ostream& os, const HybridEnsemble& ens) {
  require_nonempty(ens);
  const std::size_t n = ens.cl_dim();
  const std::size_t N = ens.qm_dim();
  os << "# hybridyn-ensemble n=" << n << " N=" << N << " members=" << ens.size()
     << " seed=" << ens.rng_seed << '\n';
  os << "weight";
  for (std::size_t k = 0; k < n; ++k) os << ",x" << k;
  for (std::size_t k = 0; k < n; ++k) os << ",p" << k;
  for (std::size_t i = 0; i < N; ++i) os << ",X" << i;
  for (std::size_t i = 0; i < N; ++i) os << ",P" << i;
  os << '\n';
  for (const auto& m : ens.members) {
    os << format_double(m.weight);
    for (double v : m.point.cl.x) os << ',' << format_double(v);
    for (double v : m.point.cl.p) os << ',' << format_double(v);
    for (double v : m.point.qm.X) os << ',' << format_double(v);
    for (double v : m.point.qm.P) os << ',' << format_double(v);
    os << '\n';
  }
}

HybridEnsemble read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# hybridyn-ensemble", 0) != 0) {
    throw Error("snapshot header missing");
  }
  std::size_t n = 0, N = 0, count = 0;
  std::uint64_t seed = 0;
  {
    std::istringstream hs(line.substr(std::string("# hybridyn-ensemble").size()));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw Error("malformed snapshot header");
      const std::string key = tok.substr(0, eq);
      const std::uint64_t v = std::stoull(tok.substr(eq + 1));
      if (key == "n") n = v;
      else if (key == "N") N = v;
      else if (key == "members") count = v;
      else if (key == "seed") seed = v;
    }
  }
  if (!std::getline(is, line)) throw Error("snapshot column line missing");
  HybridEnsemble ens;
  ens.rng_seed = seed;
  const std::size_t width = 1 + 2 * (n + N);
  std::vector<double> row;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    row.clear();
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = std::min(line.find(',', start), line.size());
      row.push_back(parse_double(std::string_view(line).substr(start, comma - start)));
      start = comma + 1;
    }
    if (row.size() != width) throw Error("snapshot row has wrong number of columns");
    EnsembleMember m;
    m.weight = row[0];
    m.point = unflatten(std::span<const double>(row).subspan(1), n, N);
    ens.members.push_back(std::move(m));
  }
  if (ens.size() != count) throw Error("snapshot member count does not match header");
  return ens;
}

}  // namespace hybridyn

#include "thinlat/volume.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace thinlat {

namespace {

Mat sym_power(const Mat& A, double e) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  return es.eigenvectors() * es.eigenvalues().array().pow(e).matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

double points_to_volume(const CenteredBody& K, const Vec& c, const LatticeBasis& L,
                        double eps, const EnumConfig& cfg, std::int64_t* points) {
  // eps L cap ((1+eps)K - eps c), rescaled by 1/eps.
  BodyPtr Kp(&K, [](const CenteredBody*) {});
  BodyPtr Q = make_translated(make_scaled(Kp, 1 + 1 / eps), -c);
  std::int64_t cnt = count(*Q, L, cfg);
  if (points) *points = cnt;
  return std::pow(eps, K.dim()) * L.det_abs() * static_cast<double>(cnt);
}

VolumeEstimate estimate_volume(BodyPtr K, double eps, const PipelineConfig& cfg) {
  if (!(eps > 0 && eps <= 1)) throw ValidationError("eps", "must lie in (0, 1]");
  const int n = K->dim();
  GeneralCovering g = thin_lattice_general(K, cfg);
  if (!g.lattice.certified())
    throw Error("CertificateMissing", "covering radius bound exceeds 1");
  EnumConfig ec = cfg.enumeration;
  ec.engine = cfg.engine;
  std::int64_t cnt = 0;
  double V = points_to_volume(*K, g.c, g.lattice.basis, eps / 2, ec, &cnt);
  return VolumeEstimate{V,
                        eps,
                        cnt,
                        g.lattice.basis.det_abs(),
                        {V / std::pow(1 + eps, n), V},
                        g.c,
                        g.lattice};
}

ImproveResult improve(BodyPtr A, const Vec& x, double alpha, double eps,
                      const PipelineConfig& cfg, bool early_stop) {
  if (!(alpha > 0 && alpha < 1)) throw ValidationError("alpha", "must lie in (0, 1)");
  if (!(eps > 0)) throw ValidationError("eps", "must be positive");
  eps = std::min(eps, 0.5);
  const int n = A->dim();
  EnumConfig ec = cfg.enumeration;
  ec.engine = cfg.engine;

  ImproveResult res;
  res.x = x;
  res.eps0 = eps / (6 + 3 * eps);
  res.J = static_cast<int>(std::floor(std::log(1 / alpha) / std::log(1 / (1 - res.eps0))));
  const double e0 = res.eps0;
  // A[x] lies in (2/(1-e0)) A[y] for every net point y, so counting on
  // (4/e0 + s) A[y] with the lattice of A[x] estimates vol(A[y]) to within
  // (1 + e0/(1-e0))^n.
  const double s = 2 / (1 - e0);
  const double grow = 4 / e0 + s;
  const double unit = std::pow(e0 / 4, n);

  for (int j = 1; j <= res.J; ++j) {
    BodyPtr Ax = kb_body(A, res.x);
    CoveringLattice cov = thin_lattice_symmetric(Ax, cfg);
    if (!cov.certified())
      throw Error("CertificateMissing", "round lattice is not covering");
    LatticeBasis R = cov.basis.lll_reduced();
    const double det = R.det_abs();

    // Net of (A + x)/2 by (e0/2) A[x], taken over the superset
    // ((1+e0)/2) A + ((1-e0)/2) x, which lies inside A.
    BodyPtr D = make_scaled(make_translated(A, -res.x), (1 + e0) / e0);
    std::vector<Vec> net;
    enumerate(*D, R, [&](const Vec& v, const IVec&) {
      net.push_back(res.x + (e0 / 2) * v);
      return true;
    }, ec);
    res.net_sizes.push_back(static_cast<std::int64_t>(net.size()));

    auto estimate = [&](const Vec& y) -> double {
      BodyPtr Ay;
      try {
        Ay = kb_body(A, y);
      } catch (const Error& e) {
        if (e.name() == "CenterOutsideBody") return 0.0;
        throw;
      }
      BodyPtr Q = make_scaled(Ay, grow);
      return unit * det * static_cast<double>(count_with_basis(*Q, R, ec));
    };

    std::vector<double> vals(net.size(), 0.0);
    const int threads = std::max(1, cfg.threads);
    if (threads == 1) {
      for (std::size_t k = 0; k < net.size(); ++k) vals[k] = estimate(net[k]);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errs(threads);
      for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
          try {
            for (std::size_t k = t; k < net.size(); k += threads) vals[k] = estimate(net[k]);
          } catch (...) {
            errs[t] = std::current_exception();
          }
        });
      for (auto& th : pool) th.join();
      for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    }

    // The previous point is the net point v = 0.
    double prev = estimate(res.x);
    std::size_t best = 0;
    for (std::size_t k = 1; k < net.size(); ++k)
      if (vals[k] > vals[best]) best = k;
    if (net.empty() || !(vals[best] > 0))
      throw Error("NetEmpty", "no net point with a positive volume estimate");
    res.x = net[best];
    res.rounds = j;
    res.previous_estimates.push_back(prev);
    res.chosen_estimates.push_back(vals[best]);

    if (early_stop && prev > 0) {
      // From the progress bound: gamma <= 2 nu^(x_j)/(1-e0) - (1-e0) nu^(x_{j-1})
      // and nu(x_j) >= (1-e0) nu^(x_j), with nu^ the estimated values.
      double m = std::pow(vals[best] / prev, 1.0 / n);
      if ((1 + eps) * m >= 2 * m / ((1 - e0) * (1 - e0)) - 1) {
        res.stopped_early = j < res.J;
        break;
      }
    }
  }
  return res;
}

KBResult kb_point(BodyPtr K, double eps, const PipelineConfig& cfg, bool early_stop) {
  if (!(eps > 0)) throw ValidationError("eps", "must be positive");
  eps = std::min(eps, 0.5);
  const int n = K->dim();
  KBResult out;
  out.eps = eps;
  if (K->symmetric()) {
    out.c = K->center();
    return out;
  }
  // Round so that B in K' in (n+1) sqrt(n) B, with K' = A^{1/2}(K - t).
  RoundingResult rr = gls_round(*K, cfg.engine);
  Mat half = sym_power(rr.A, 0.5), inv_half = sym_power(rr.A, -0.5);
  BodyPtr Kp = make_affine(make_translated(K, -rr.t), half);
  const int T = std::max(
      1, static_cast<int>(std::ceil(std::log2((n + 1) * std::sqrt(double(n))))));
  Vec c = Vec::Zero(n);
  for (int i = 1; i <= T; ++i) {
    bool last = i == T;
    // K_T = K' since K' lies in 2^T B.
    BodyPtr Ki = last ? Kp : make_intersection(make_ball(n, std::ldexp(1.0, i)), Kp);
    ImproveResult r = improve(Ki, c, 1.0 / 6.0, last ? eps : 0.5, cfg, early_stop);
    c = r.x;
    out.iterations += r.rounds;
    out.calls.push_back(std::move(r));
  }
  out.c = rr.t + inv_half * c;
  if (!K->contains(out.c, 0.0))
    throw Error("CenterOutsideBody", "mapped point left the body");
  return out;
}

}  // namespace thinlat

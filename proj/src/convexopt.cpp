#include "thinlat/convexopt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thinlat {

namespace {

constexpr double kMaxDepth = 0.9;

// Ellipsoid {t + L u : |u| <= 1}, kept in factored form (Q = L L') so that
// long thin ellipsoids keep their precision.
//
// Cut by the halfspace a.y <= a.t - alpha |L'a|. Returns false when nothing
// is left.
bool ellipsoid_cut(Vec& t, Mat& L, const Vec& a, double alpha) {
  const int n = static_cast<int>(t.size());
  Vec La = L.transpose() * a;
  double s = La.norm();
  if (!(s > 0) || alpha >= 1) return false;
  if (n == 1) {
    double w = std::abs(L(0, 0));
    double lo, hi;
    if (a(0) > 0) {
      lo = t(0) - w;
      hi = t(0) - alpha * w;
    } else {
      lo = t(0) + alpha * w;
      hi = t(0) + w;
    }
    t(0) = 0.5 * (lo + hi);
    L(0, 0) = 0.5 * (hi - lo);
    return true;
  }
  // Very deep cuts flatten the ellipsoid too fast; a shallower cut is valid.
  alpha = std::min(alpha, kMaxDepth);
  Vec u = La / s;
  double nn = n;
  t -= (1 + nn * alpha) / (nn + 1) * (L * u);
  double scale = nn * nn * (1 - alpha * alpha) / (nn * nn - 1);
  // 1 - rank1 weight, written without cancellation
  double keep = (nn - 1) * (1 - alpha) / ((nn + 1) * (1 + alpha));
  Vec Lu = L * u;
  L = std::sqrt(scale) * (L - (1 - std::sqrt(keep)) * Lu * u.transpose());
  return true;
}

}  // namespace

MinimizeResult weak_minimize_raw(const CenteredBody& K,
                                 const ConvexObjective& f, double eps,
                                 const EngineConfig& cfg,
                                 const StopRule& stop) {
  const Lift* lift = K.lift();
  const CenteredBody& base = lift ? *lift->base : K;
  if (!(base.inner_radius() > 0))
    throw Error("NonCenteredBody", "weak_minimize needs an inner ball");
  const int n = base.dim();

  auto F = [&](const Vec& u, Vec* g) {
    if (!lift) return f.eval(u, g);
    Vec x = lift->L * u + lift->offset;
    if (!g) return f.eval(x, nullptr);
    Vec gx;
    double v = f.eval(x, &gx);
    *g = lift->L.transpose() * gx;
    return v;
  };
  double lip = f.lipschitz;
  if (lift) lip *= std::max(1.0, lift->L.norm());

  double R = base.outer_radius() * (1 + 1e-9) + 1e-300;
  double r = base.inner_radius();
  double ratio = std::max(std::exp(1.0), (R / r) * std::max(1.0, R * lip / eps));
  long budget = static_cast<long>(std::ceil(cfg.budget_scale * 2.0 * (n + 1) *
                                            (n + 1) * std::log(ratio))) +
                cfg.budget_slack;

  Vec t = base.center();
  Mat L = Mat::Identity(n, n) * R;
  MinimizeResult res;
  Vec best = t;
  double best_f = F(t, nullptr);
  double lower = -std::numeric_limits<double>::infinity();
  bool done = false;
  long it = 0;
  for (; it < budget && !done; ++it) {
    if (best_f <= stop.stop_value || lower > stop.stop_lower) break;
    if (!base.contains(t, 0.0)) {
      auto h = base.separate(t, 0.0);
      if (h) {
        double aLa = (L.transpose() * h->a).norm();
        if (!(aLa > 0)) break;
        double alpha = std::max(0.0, (h->a.dot(t) - h->beta) / aLa);
        if (!ellipsoid_cut(t, L, h->a, alpha)) done = true;
        continue;
      }
    }
    Vec g;
    double v = F(t, &g);
    if (v < best_f) {
      best_f = v;
      best = t;
    }
    if (g.isZero()) {
      lower = std::max(lower, v);
      done = true;
      break;
    }
    double s = (L.transpose() * g).norm();
    if (!(s > 0)) break;  // degenerate ellipsoid; no certificate
    lower = std::max(lower, v - s);
    if (best_f - lower <= eps) {
      done = true;
      break;
    }
    double alpha = (v - best_f) / s;
    if (!ellipsoid_cut(t, L, g, alpha)) {
      // The whole remaining ellipsoid lies above the incumbent.
      lower = std::max(lower, best_f - eps);
      done = true;
    }
  }
  res.y = lift ? Vec(lift->L * best + lift->offset) : best;
  res.value = best_f;
  res.lower = std::min(lower, best_f);
  res.iterations = static_cast<int>(it);
  res.converged = done || best_f <= stop.stop_value || lower > stop.stop_lower;
  return res;
}

MinimizeResult weak_minimize(const CenteredBody& K, const ConvexObjective& f,
                             double eps, const EngineConfig& cfg) {
  MinimizeResult r = weak_minimize_raw(K, f, eps, cfg, StopRule{});
  if (!r.converged) {
    std::ostringstream os;
    os.precision(17);
    os << "incumbent value " << r.value << ", lower bound " << r.lower
       << " after " << r.iterations << " iterations";
    throw Error("IterationBudgetExceeded", os.str());
  }
  return r;
}

RoundingResult gls_round(const CenteredBody& K, const EngineConfig& cfg) {
  if (!(K.inner_radius() > 0))
    throw Error("NonCenteredBody", "gls_round needs an inner ball");
  const int n = K.dim();
  const double fac = std::sqrt(double(n)) * (n + 1);
  double R = K.outer_radius() * (1 + 1e-9);
  Vec t = K.center();
  Mat L = Mat::Identity(n, n) * R;
  const double shallow = -1.0 / (n + 1);
  int it = 0;
  for (; it < cfg.gls_max_iterations; ++it) {
    if (!K.contains(t, 0.0)) {
      auto h = K.separate(t, 0.0);
      if (!h) throw Error("IterationBudgetExceeded", "inconsistent separation");
      double aLa = (L.transpose() * h->a).norm();
      double alpha = std::max(0.0, (h->a.dot(t) - h->beta) / aLa);
      if (!ellipsoid_cut(t, L, h->a, alpha))
        throw Error("IterationBudgetExceeded", "rounding ellipsoid vanished");
      continue;
    }
    Mat Q = L * L.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(Q);
    bool cut = false;
    for (int i = 0; i < n && !cut; ++i) {
      Vec axis = es.eigenvectors().col(i) *
                 std::sqrt(std::max(0.0, es.eigenvalues()(i))) / (n + 1);
      for (int sgn = 1; sgn >= -1 && !cut; sgn -= 2) {
        Vec p = t + sgn * axis;
        if (K.contains(p, 0.0)) continue;
        auto h = K.separate(p, 0.0);
        if (!h) continue;
        double aLa = (L.transpose() * h->a).norm();
        double alpha = std::max(shallow, (h->a.dot(t) - h->beta) / aLa);
        if (!ellipsoid_cut(t, L, h->a, alpha))
          throw Error("IterationBudgetExceeded", "rounding ellipsoid vanished");
        cut = true;
      }
    }
    if (!cut) {
      RoundingResult rr;
      rr.A = fac * fac * Q.inverse();
      rr.A = 0.5 * (rr.A + rr.A.transpose()).eval();
      rr.t = t;
      rr.sandwich_factor = fac;
      rr.iterations = it;
      return rr;
    }
  }
  throw Error("IterationBudgetExceeded", "gls_round did not terminate");
}

SupportResult support(const CenteredBody& K, const Vec& u, double eps,
                      const EngineConfig& cfg) {
  ConvexObjective f{[&](const Vec& x, Vec* g) {
                      if (g) *g = -u;
                      return -u.dot(x);
                    },
                    u.norm()};
  if (auto h = K.support(u)) {
    SupportResult s{*h, *h, Vec()};
    return s;
  }
  double e = eps * std::max(1.0, u.norm() * K.outer_radius());
  MinimizeResult r = weak_minimize(K, f, e, cfg);
  return SupportResult{-r.value, -r.lower, r.y};
}

FiberResult fiber_distance(const CenteredBody& K, const Vec& x0, const Mat& D,
                           double tol, const EngineConfig& cfg) {
  const int n = K.dim();
  const int k = static_cast<int>(D.cols());
  Mat P = Mat::Identity(n, n);
  Eigen::HouseholderQR<Mat> qr;
  if (k > 0) {
    qr.compute(D);
    Mat Qd = qr.householderQ() * Mat::Identity(n, k);
    P -= Qd * Qd.transpose();
  }
  ConvexObjective f{[&](const Vec& x, Vec* g) {
                      Vec r = P * (x - x0);
                      double v = r.norm();
                      if (g) *g = v > 0 ? Vec(r / v) : Vec(Vec::Zero(n));
                      return v;
                    },
                    1.0};
  StopRule stop{tol, tol};
  // Small gap so that one of the two stop rules fires except within
  // 1e-3 tol of the threshold.
  double eps = std::max(1e-3 * tol, 1e-14 * K.outer_radius());
  MinimizeResult r = weak_minimize_raw(K, f, eps, cfg, stop);
  if (!r.converged) {
    std::ostringstream os;
    os.precision(17);
    os << "fiber distance undecided: value " << r.value << ", lower "
       << r.lower << ", tol " << tol;
    throw Error("FiberSolveFailure", os.str());
  }
  FiberResult out;
  out.distance = r.value;
  out.lower = r.lower;
  out.witness = r.y;
  out.feasible = r.value <= tol;
  if (k > 0)
    out.w = qr.solve(Vec(r.y - x0));
  else
    out.w = Vec();
  return out;
}

}  // namespace thinlat

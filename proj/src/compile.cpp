#include <algorithm>
#include <cmath>

#include "thinlat/convexopt.hpp"
#include "thinlat/geometry.hpp"

namespace thinlat {

namespace {

constexpr double kBig = 1e6;

// Bounding ball used while the polytope's own sandwich data is unknown.
BodyPtr big_ball(int n) { return make_ball(n, kBig); }

}  // namespace

double gauge_subgradient(const CenteredBody& K, const Vec& x, Vec* g) {
  double val = gauge(K, x);
  if (!g) return val;
  const Vec& a0 = K.center();
  if (val == 0) {
    *g = Vec::Zero(K.dim());
    return val;
  }
  Vec y = a0 + (x - a0) / (val * (1 - 1e-9));
  auto h = K.separate(y, 0.0);
  if (!h) h = K.CenteredBody::separate(y, 0.0);
  if (!h) {
    // boundary point judged inside: fall back to the radial direction
    Vec d = x - a0;
    *g = d * (val / d.squaredNorm());
    return val;
  }
  double den = h->beta - h->a.dot(a0);
  *g = h->a / den;
  return val;
}

// ---- polytopes ------------------------------------------------------------

BodyPtr make_polytope(const Mat& A, const Vec& b) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  if (m == 0 || n == 0 || b.size() != m)
    throw Error("BadDescriptor", "polytope needs A (m x n) and b (m)");
  if (!A.allFinite() || !b.allFinite())
    throw Error("BadDescriptor", "polytope entries must be finite");
  Vec rn = A.rowwise().norm();
  if ((rn.array() <= 0).any())
    throw Error("BadDescriptor", "polytope has a zero row");
  Mat N = rn.cwiseInverse().asDiagonal() * A;
  Vec c = b.cwiseQuotient(rn);
  double scale = 1 + c.cwiseAbs().maxCoeff();

  // Chebyshev center: minimize max_i (n_i.x - c_i).
  BodyPtr ball = big_ball(n);
  ConvexObjective cheb{[&](const Vec& x, Vec* g) {
                         Eigen::Index i;
                         Vec v = N * x - c;
                         double val = v.maxCoeff(&i);
                         if (g) *g = N.row(i).transpose();
                         return val;
                       },
                       1.0};
  EngineConfig cfg;
  cfg.budget_scale = 4.0;
  MinimizeResult ch = weak_minimize(*ball, cheb, 1e-11 * scale, cfg);
  double rho = -ch.value;
  if (!(rho > 1e-9 * scale))
    throw Error("EmptyInterior", "polytope has empty interior");
  if (ch.y.norm() > 0.5 * kBig)
    throw Error("UnboundedBody", "polytope is unbounded");
  Vec center = ch.y;
  bool symmetric = false;

  // Symmetry: every row has an opposite partner, and all slabs share a
  // midpoint.
  std::vector<int> partner(m, -1);
  bool paired = true;
  for (int i = 0; i < m && paired; ++i) {
    for (int j = 0; j < m; ++j)
      if (j != i && (N.row(i) + N.row(j)).norm() <= 1e-9) {
        partner[i] = j;
        break;
      }
    if (partner[i] < 0) paired = false;
  }
  if (paired) {
    Mat S(m, n);
    Vec rhs(m);
    for (int i = 0; i < m; ++i) {
      S.row(i) = N.row(i);
      rhs(i) = 0.5 * (c(i) - c(partner[i]));
    }
    Vec xs = S.colPivHouseholderQr().solve(rhs);
    if ((S * xs - rhs).cwiseAbs().maxCoeff() <= 1e-9 * scale) {
      double rs = (c - N * xs).minCoeff();
      if (rs > 0) {
        center = xs;
        rho = rs;
        symmetric = true;
      }
    }
  }

  // Outer radius: farthest vertex when vertices are available, else the
  // half-diagonal of the bounding box.
  auto probe = std::make_shared<HPolytope>(A, b, center, rho, kBig, false);
  double R = 0;
  if (!probe->vertices().empty()) {
    // a bounded polytope in R^n has vertices; check boundedness via the box
    for (const Vec& v : probe->vertices()) R = std::max(R, (v - center).norm());
  }
  Vec half(n);
  for (int i = 0; i < n; ++i) {
    double ext = 0;
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      ConvexObjective lin{[&](const Vec& x, Vec* g) {
                            if (g) {
                              *g = Vec::Zero(n);
                              (*g)(i) = -sgn;
                            }
                            return -sgn * (x(i) - center(i));
                          },
                          1.0};
      MinimizeResult r = weak_minimize(*probe, lin, 1e-9 * scale, cfg);
      double e = -r.lower;
      if (e > 0.25 * kBig) throw Error("UnboundedBody", "polytope is unbounded");
      ext = std::max(ext, e);
    }
    half(i) = ext;
  }
  if (R == 0) R = half.norm();
  R *= 1 + 1e-12;
  return std::make_shared<HPolytope>(A, b, center, rho, R, symmetric);
}

// ---- intersection ---------------------------------------------------------

BodyPtr make_intersection(BodyPtr left, BodyPtr right) {
  if (left->dim() != right->dim())
    throw Error("BadDescriptor", "intersection dimension mismatch");
  auto radius_at = [&](const Vec& x) {
    double gl = gauge(*left, x), gr = gauge(*right, x);
    return std::min((1 - gl) * left->inner_radius(),
                    (1 - gr) * right->inner_radius());
  };
  std::vector<Vec> cands{left->center(), right->center(),
                         0.5 * (left->center() + right->center())};
  Vec best = cands[0];
  double rbest = -1;
  for (const Vec& x : cands) {
    double r = radius_at(x);
    if (r > rbest) {
      rbest = r;
      best = x;
    }
  }
  if (!(rbest > 1e-3 * std::min(left->inner_radius(), right->inner_radius()))) {
    ConvexObjective f{[&](const Vec& x, Vec* g) {
                        Vec gl, gr;
                        double a = gauge_subgradient(*left, x, g ? &gl : nullptr);
                        double b = gauge_subgradient(*right, x, g ? &gr : nullptr);
                        if (g) *g = a >= b ? gl : gr;
                        return std::max(a, b);
                      },
                      1.0 / std::min(left->inner_radius(), right->inner_radius())};
    MinimizeResult r = weak_minimize(*left, f, 1e-9);
    double rr = radius_at(r.y);
    if (rr > rbest) {
      rbest = rr;
      best = r.y;
    }
  }
  if (!(rbest > 1e-12 * std::max(left->outer_radius(), right->outer_radius())))
    throw Error("EmptyInterior", "intersection has empty interior");
  double R = std::min(left->outer_radius() + (best - left->center()).norm(),
                      right->outer_radius() + (best - right->center()).norm());
  bool sym = left->symmetric() && right->symmetric() &&
             (left->center() - best).norm() <= 1e-12 * (1 + best.norm()) &&
             (right->center() - best).norm() <= 1e-12 * (1 + best.norm());
  return std::make_shared<IntersectionBody>(std::move(left), std::move(right),
                                            best, rbest, R, sym);
}

// ---- Minkowski sums -------------------------------------------------------

MinkowskiBody::MinkowskiBody(BodyPtr first, double s, BodyPtr second)
    : CenteredBody(first->center() + s * second->center(),
                   first->inner_radius() + std::abs(s) * second->inner_radius(),
                   first->outer_radius() + std::abs(s) * second->outer_radius(),
                   first->symmetric() && second->symmetric()),
      first_(first),
      second_(second),
      s_(s) {
  const int n = first->dim();
  Mat L(n, 2 * n);
  L << Mat::Identity(n, n), s * Mat::Identity(n, n);
  lift_ = Lift{make_product(first, second), L, Vec::Zero(n)};
}

namespace {

MinimizeResult nearest_in(const CenteredBody& K, const Vec& x, double delta) {
  ConvexObjective f{[&](const Vec& y, Vec* g) {
                      Vec d = y - x;
                      double v = d.norm();
                      if (g) *g = v > 0 ? Vec(d / v) : Vec(Vec::Zero(x.size()));
                      return v;
                    },
                    1.0};
  double eps = std::max(0.25 * delta, 1e-13 * K.outer_radius());
  StopRule stop{delta, delta};
  return weak_minimize_raw(K, f, eps, EngineConfig{}, stop);
}

}  // namespace

bool MinkowskiBody::contains(const Vec& x, double delta) const {
  MinimizeResult r = nearest_in(*this, x, delta);
  return r.value <= delta + 1e-13 * R_;
}

std::optional<Halfspace> MinkowskiBody::separate(const Vec& x,
                                                 double delta) const {
  MinimizeResult r = nearest_in(*this, x, delta);
  if (r.value <= delta + 1e-13 * R_) return std::nullopt;
  Vec nrm = x - r.y;
  return Halfspace{nrm, nrm.dot(r.y) + (r.value - std::max(r.lower, 0.0)) * nrm.norm()};
}

std::optional<double> MinkowskiBody::support(const Vec& u) const {
  SupportResult a = thinlat::support(*first_, u);
  SupportResult b = thinlat::support(*second_, Vec(s_ * u));
  return a.upper + b.upper;
}

BodyPtr make_minkowski(BodyPtr first, double s, BodyPtr second) {
  if (first->dim() != second->dim())
    throw Error("BadDescriptor", "minkowski dimension mismatch");
  if (s == 0) return first;
  return std::make_shared<MinkowskiBody>(std::move(first), s, std::move(second));
}

// ---- polar ----------------------------------------------------------------

PolarBody::PolarBody(BodyPtr K)
    : CenteredBody(Vec::Zero(K->dim()), 1 / K->outer_radius(),
                   1 / K->inner_radius(), true),
      K_(std::move(K)) {}

double PolarBody::h(const Vec& a) const { return thinlat::support(*K_, a).upper; }

bool PolarBody::contains(const Vec& a, double delta) const {
  return h(a) <= 1 + delta * K_->outer_radius();
}

std::optional<Halfspace> PolarBody::separate(const Vec& a, double delta) const {
  if (contains(a, delta)) return std::nullopt;
  // any x in K with <a, x> > 1 gives the cut <x, b> <= 1
  ConvexObjective f{[&](const Vec& x, Vec* g) {
                      if (g) *g = -a;
                      return -a.dot(x);
                    },
                    a.norm()};
  StopRule stop{-1 - 1e-12, std::numeric_limits<double>::infinity()};
  MinimizeResult r = weak_minimize_raw(*K_, f, 1e-12 * a.norm() * K_->outer_radius(),
                                       EngineConfig{}, stop);
  if (!K_->contains(r.y, 0.0) || r.y.dot(a) <= 1) {
    // closed-form support said outside; fall back to the scaled direction
    return CenteredBody::separate(a, delta);
  }
  return Halfspace{r.y, 1.0};
}

std::optional<Interval> PolarBody::line_range(const Vec& p, const Vec& d,
                                              double delta) const {
  Interval box = ball_chord(center_, R_ * (1 + 1e-9) + delta, p, d);
  if (box.empty()) return box;
  double level = 1 + delta * K_->outer_radius();
  return convex_sublevel([&](double s) { return h(p + s * d); }, level, box.lo,
                         box.hi);
}

BodyPtr make_polar(BodyPtr K) {
  if (!K->symmetric() || K->center().norm() > 1e-12)
    throw Error("BadDescriptor", "polar needs a body symmetric about 0");
  return std::make_shared<PolarBody>(std::move(K));
}

// ---- descriptors ----------------------------------------------------------

BodyPtr compile(const BodyDescriptor& d) {
  auto need_inner = [&](const std::shared_ptr<BodyDescriptor>& p,
                        const char* what) {
    if (!p) throw Error("BadDescriptor", std::string("missing ") + what);
    return compile(*p);
  };
  if (d.type == "hpolytope") return make_polytope(d.A, d.b);
  if (d.type == "ellipsoid")
    return make_ellipsoid(d.A, d.t.size() ? d.t : Vec(Vec::Zero(d.A.rows())));
  if (d.type == "lpball") return make_lpball(d.dim, d.p, d.radius);
  if (d.type == "scale") return make_scaled(need_inner(d.inner, "inner"), d.s);
  if (d.type == "translate")
    return make_translated(need_inner(d.inner, "inner"), d.t);
  if (d.type == "intersect")
    return make_intersection(need_inner(d.inner, "left"),
                             need_inner(d.inner2, "right"));
  if (d.type == "kbsym") return kb_body(need_inner(d.inner, "inner"), d.t);
  if (d.type == "affine") return make_affine(need_inner(d.inner, "inner"), d.A);
  if (d.type == "minkowski")
    return make_minkowski(need_inner(d.inner, "inner"), d.s,
                          need_inner(d.inner2, "inner2"));
  throw Error("BadDescriptor", "unknown body type '" + d.type + "'");
}

}  // namespace thinlat

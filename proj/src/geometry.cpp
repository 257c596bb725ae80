#include "thinlat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thinlat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Interval empty_interval() { return {1.0, 0.0}; }

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

// Solve a s^2 + 2 b s + c <= 0 for a > 0.
Interval quadratic_range(double a, double b, double c) {
  double disc = b * b - a * c;
  if (disc < 0) return empty_interval();
  double sq = std::sqrt(disc);
  // numerically stable pair of roots
  double q = (b >= 0) ? -(b + sq) : -(b - sq);
  double r1, r2;
  if (q == 0) {
    r1 = r2 = 0;
  } else {
    r1 = q / a;
    r2 = c / q;
  }
  return {std::min(r1, r2), std::max(r1, r2)};
}

}  // namespace

double unit_ball_volume(int n) {
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

CenteredBody::CenteredBody(Vec center, double r, double R, bool symmetric)
    : center_(std::move(center)), r_(r), R_(R), symmetric_(symmetric) {}

std::optional<Halfspace> CenteredBody::separate(const Vec& x,
                                                double delta) const {
  if (contains(x, delta)) return std::nullopt;
  // Boundary point on the ray from the center, then a finite-difference
  // gauge gradient there; normalised so that the cut is u.(y - a0) <= 1.
  const Vec& a0 = center_;
  double g = gauge_bisect(*this, x, 1e-13);
  Vec y = a0 + (x - a0) / g;
  int n = dim();
  double h = 1e-6 * R_;
  Vec u(n);
  for (int i = 0; i < n; ++i) {
    Vec yp = y, ym = y;
    yp(i) += h;
    ym(i) -= h;
    u(i) = (gauge_bisect(*this, yp, 1e-13) - gauge_bisect(*this, ym, 1e-13)) /
           (2 * h);
  }
  double s = u.dot(y - a0);
  if (!(s > 1e-12)) {
    u = x - a0;
    s = u.dot(y - a0);
  }
  u /= s;
  return Halfspace{u, 1.0 + u.dot(a0)};
}

std::optional<Interval> CenteredBody::line_range(const Vec&, const Vec&,
                                                 double) const {
  return std::nullopt;
}

std::optional<double> CenteredBody::support(const Vec&) const {
  return std::nullopt;
}

// ---- gauge ----------------------------------------------------------------

double gauge_bisect(const CenteredBody& K, const Vec& x, double tol) {
  if (!(K.inner_radius() > 0))
    throw Error("NonCenteredBody", "inner radius must be positive");
  const Vec& a0 = K.center();
  Vec d = x - a0;
  double nd = d.norm();
  if (nd == 0) return 0.0;
  double lo = nd / K.outer_radius();
  double hi = nd / K.inner_radius();
  for (int it = 0; it < 128; ++it) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    double mid = 0.5 * (lo + hi);
    if (K.contains(a0 + d / mid, 0.0))
      hi = mid;
    else
      lo = mid;
  }
  if (hi - lo <= tol) return 0.5 * (lo + hi);
  throw Error("ToleranceTooSmall", "gauge bisection budget exhausted");
}

double gauge(const CenteredBody& K, const Vec& x, double tol) {
  return gauge_about(K, K.center(), x, tol);
}

double gauge_about(const CenteredBody& K, const Vec& c, const Vec& x,
                   double tol) {
  Vec d = x - c;
  double nd = d.norm();
  if (nd == 0) return 0.0;
  if (auto lr = K.line_range(c, d, 0.0)) {
    if (lr->empty() || lr->hi <= 0) return kInf;
    return 1.0 / lr->hi;
  }
  if (c == K.center()) return gauge_bisect(K, x, tol);
  if (!K.contains(c, 0.0)) return kInf;
  double lo = 0, hi = 1;
  int guard = 0;
  while (!K.contains(c + d / hi, 0.0)) {
    lo = hi;
    hi *= 2;
    if (++guard > 200) throw Error("NonCenteredBody", "point on boundary");
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (K.contains(c + d / mid, 0.0))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Interval convex_sublevel(const std::function<double(double)>& phi,
                         double level, double smin, double smax) {
  if (!(smin <= smax)) return empty_interval();
  // golden-section search for the minimizer
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double a = smin, b = smax;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1 + std::abs(a) + std::abs(b));
       ++it) {
    if (f1 <= level || f2 <= level) break;
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = phi(x2);
    }
  }
  double sm;
  if (f1 <= level)
    sm = x1;
  else if (f2 <= level)
    sm = x2;
  else {
    double m = 0.5 * (a + b);
    if (phi(m) > level) return empty_interval();
    sm = m;
  }
  auto edge = [&](double in, double out) {
    // phi(in) <= level < phi(out)
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (in + out);
      if (mid == in || mid == out) break;
      if (phi(mid) <= level)
        in = mid;
      else
        out = mid;
    }
    return in;
  };
  double lo = phi(smin) <= level ? smin : edge(sm, smin);
  double hi = phi(smax) <= level ? smax : edge(sm, smax);
  return {lo, hi};
}

Interval ball_chord(const Vec& center, double R, const Vec& p, const Vec& d) {
  Vec q = p - center;
  double a = d.squaredNorm();
  if (a == 0) return q.norm() <= R ? Interval{-kInf, kInf} : empty_interval();
  return quadratic_range(a, d.dot(q), q.squaredNorm() - R * R);
}

// ---- HPolytope ------------------------------------------------------------

HPolytope::HPolytope(Mat A, Vec b, Vec center, double r, double R,
                     bool symmetric)
    : CenteredBody(std::move(center), r, R, symmetric),
      A_(std::move(A)),
      b_(std::move(b)) {
  row_norm_ = A_.rowwise().norm();
  // Vertex list for closed-form support on small instances.
  int m = static_cast<int>(A_.rows()), n = static_cast<int>(A_.cols());
  double combos = 1;
  for (int i = 0; i < n; ++i) combos = combos * (m - i) / (i + 1);
  if (n <= 4 && combos <= 60000) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    double scale = 1 + b_.cwiseAbs().maxCoeff();
    while (true) {
      Mat S(n, n);
      Vec rhs(n);
      for (int i = 0; i < n; ++i) {
        S.row(i) = A_.row(idx[i]);
        rhs(i) = b_(idx[i]);
      }
      Eigen::FullPivLU<Mat> lu(S);
      if (lu.isInvertible()) {
        Vec v = lu.solve(rhs);
        if (((A_ * v - b_).array() <= 1e-9 * scale * row_norm_.array()).all()) {
          bool dup = false;
          for (const Vec& w : vertices_)
            if ((w - v).norm() <= 1e-9 * scale) dup = true;
          if (!dup) vertices_.push_back(v);
        }
      }
      int k = n - 1;
      while (k >= 0 && idx[k] == m - n + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
}

bool HPolytope::contains(const Vec& x, double delta) const {
  for (Eigen::Index i = 0; i < A_.rows(); ++i)
    if (A_.row(i).dot(x) > b_(i) + delta * row_norm_(i)) return false;
  return true;
}

std::optional<Halfspace> HPolytope::separate(const Vec& x,
                                             double delta) const {
  Eigen::Index worst = -1;
  double wv = 0;
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    double v = (A_.row(i).dot(x) - b_(i)) / row_norm_(i);
    if (v > delta && (worst < 0 || v > wv)) {
      worst = i;
      wv = v;
    }
  }
  if (worst < 0) return std::nullopt;
  return Halfspace{A_.row(worst).transpose(), b_(worst)};
}

std::optional<Interval> HPolytope::line_range(const Vec& p, const Vec& d,
                                              double delta) const {
  double lo = -kInf, hi = kInf;
  double dn = d.norm();
  for (Eigen::Index i = 0; i < A_.rows(); ++i) {
    double ad = A_.row(i).dot(d);
    double rhs = b_(i) + delta * row_norm_(i) - A_.row(i).dot(p);
    if (std::abs(ad) <= 1e-15 * row_norm_(i) * dn) {
      if (rhs < 0) return empty_interval();
      continue;
    }
    double s = rhs / ad;
    if (ad > 0)
      hi = std::min(hi, s);
    else
      lo = std::max(lo, s);
  }
  return Interval{lo, hi};
}

std::optional<double> HPolytope::support(const Vec& u) const {
  if (vertices_.empty()) return std::nullopt;
  double best = -kInf;
  for (const Vec& v : vertices_) best = std::max(best, u.dot(v));
  return best;
}

// ---- Ellipsoid ------------------------------------------------------------

EllipsoidBody::EllipsoidBody(Mat A, Vec t)
    : CenteredBody(std::move(t), 0, 0, true), A_(std::move(A)) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A_);
  double lmin = es.eigenvalues().minCoeff();
  double lmax = es.eigenvalues().maxCoeff();
  r_ = 1 / std::sqrt(lmax);
  R_ = 1 / std::sqrt(lmin);
  lip_ = std::sqrt(lmax);
  Ainv_ = A_.inverse();
}

bool EllipsoidBody::contains(const Vec& x, double delta) const {
  Vec q = x - center_;
  double L = 1 + delta * lip_;
  return q.dot(A_ * q) <= L * L;
}

std::optional<Halfspace> EllipsoidBody::separate(const Vec& x,
                                                 double delta) const {
  if (contains(x, delta)) return std::nullopt;
  Vec a = A_ * (x - center_);
  double h = std::sqrt(a.dot(Ainv_ * a));
  return Halfspace{a, a.dot(center_) + h};
}

std::optional<Interval> EllipsoidBody::line_range(const Vec& p, const Vec& d,
                                                  double delta) const {
  Vec q = p - center_;
  Vec Ad = A_ * d;
  double a = d.dot(Ad);
  double L = 1 + delta * lip_;
  if (a == 0) return q.dot(A_ * q) <= L * L ? Interval{-kInf, kInf}
                                            : empty_interval();
  return quadratic_range(a, Ad.dot(q), q.dot(A_ * q) - L * L);
}

std::optional<double> EllipsoidBody::support(const Vec& u) const {
  return u.dot(center_) + std::sqrt(u.dot(Ainv_ * u));
}

// ---- LpBall ---------------------------------------------------------------

LpBall::LpBall(int n, double p, double radius)
    : CenteredBody(Vec::Zero(n), 0, 0, true), p_(p), rho_(radius) {
  double e = std::isinf(p) ? 0.5 : 0.5 - 1.0 / p;
  if (p >= 2) {
    r_ = radius;
    R_ = radius * std::pow(n, e);
    kappa_ = 1;
  } else {
    r_ = radius * std::pow(n, e);
    R_ = radius;
    kappa_ = std::pow(n, -e);
  }
}

double LpBall::norm(const Vec& x) const {
  if (std::isinf(p_)) return x.cwiseAbs().maxCoeff();
  if (p_ == 1) return x.cwiseAbs().sum();
  if (p_ == 2) return x.norm();
  double m = x.cwiseAbs().maxCoeff();
  if (m == 0) return 0;
  return m * std::pow((x.cwiseAbs() / m).array().pow(p_).sum(), 1.0 / p_);
}

bool LpBall::contains(const Vec& x, double delta) const {
  return norm(x) <= rho_ + kappa_ * delta;
}

std::optional<Halfspace> LpBall::separate(const Vec& x, double delta) const {
  if (contains(x, delta)) return std::nullopt;
  int n = dim();
  Vec g = Vec::Zero(n);
  if (std::isinf(p_)) {
    Eigen::Index i;
    x.cwiseAbs().maxCoeff(&i);
    g(i) = x(i) > 0 ? 1 : -1;
  } else if (p_ == 1) {
    for (int i = 0; i < n; ++i) g(i) = x(i) > 0 ? 1 : (x(i) < 0 ? -1 : 0);
  } else {
    double nx = norm(x);
    for (int i = 0; i < n; ++i)
      g(i) = (x(i) >= 0 ? 1 : -1) * std::pow(std::abs(x(i)) / nx, p_ - 1);
  }
  return Halfspace{g, rho_};
}

std::optional<Interval> LpBall::line_range(const Vec& p, const Vec& d,
                                           double delta) const {
  double lim = rho_ + kappa_ * delta;
  if (std::isinf(p_)) {
    double lo = -kInf, hi = kInf;
    for (int i = 0; i < dim(); ++i) {
      if (d(i) == 0) {
        if (std::abs(p(i)) > lim) return empty_interval();
        continue;
      }
      double s1 = (-lim - p(i)) / d(i), s2 = (lim - p(i)) / d(i);
      lo = std::max(lo, std::min(s1, s2));
      hi = std::min(hi, std::max(s1, s2));
    }
    return Interval{lo, hi};
  }
  if (p_ == 2) {
    double a = d.squaredNorm();
    return quadratic_range(a, d.dot(p), p.squaredNorm() - lim * lim);
  }
  Interval box = ball_chord(center_, R_ + delta + 1e-12 * R_, p, d);
  if (box.empty()) return box;
  return convex_sublevel([&](double s) { return norm(p + s * d); }, lim,
                         box.lo, box.hi);
}

std::optional<double> LpBall::support(const Vec& u) const {
  if (std::isinf(p_)) return rho_ * u.cwiseAbs().sum();
  if (p_ == 1) return rho_ * u.cwiseAbs().maxCoeff();
  double q = p_ / (p_ - 1);
  double m = u.cwiseAbs().maxCoeff();
  if (m == 0) return 0.0;
  return rho_ * m * std::pow((u.cwiseAbs() / m).array().pow(q).sum(), 1 / q);
}

// ---- Scaled / Translated / Affine -----------------------------------------

ScaledBody::ScaledBody(BodyPtr inner, double s)
    : CenteredBody(s * inner->center(), s * inner->inner_radius(),
                   s * inner->outer_radius(), inner->symmetric()),
      inner_(std::move(inner)),
      s_(s) {
  if (const Lift* l = inner_->lift())
    lift_ = Lift{l->base, s_ * l->L, s_ * l->offset};
}

bool ScaledBody::contains(const Vec& x, double delta) const {
  return inner_->contains(x / s_, delta / s_);
}

std::optional<Halfspace> ScaledBody::separate(const Vec& x,
                                              double delta) const {
  auto h = inner_->separate(x / s_, delta / s_);
  if (!h) return h;
  return Halfspace{h->a, s_ * h->beta};
}

std::optional<Interval> ScaledBody::line_range(const Vec& p, const Vec& d,
                                               double delta) const {
  return inner_->line_range(p / s_, d / s_, delta / s_);
}

std::optional<double> ScaledBody::support(const Vec& u) const {
  auto h = inner_->support(u);
  if (!h) return h;
  return s_ * *h;
}

TranslatedBody::TranslatedBody(BodyPtr inner, Vec t)
    : CenteredBody(inner->center() + t, inner->inner_radius(),
                   inner->outer_radius(), inner->symmetric()),
      inner_(std::move(inner)),
      t_(std::move(t)) {
  if (const Lift* l = inner_->lift()) lift_ = Lift{l->base, l->L, l->offset + t_};
}

bool TranslatedBody::contains(const Vec& x, double delta) const {
  return inner_->contains(x - t_, delta);
}

std::optional<Halfspace> TranslatedBody::separate(const Vec& x,
                                                  double delta) const {
  auto h = inner_->separate(x - t_, delta);
  if (!h) return h;
  return Halfspace{h->a, h->beta + h->a.dot(t_)};
}

std::optional<Interval> TranslatedBody::line_range(const Vec& p, const Vec& d,
                                                   double delta) const {
  return inner_->line_range(p - t_, d, delta);
}

std::optional<double> TranslatedBody::support(const Vec& u) const {
  auto h = inner_->support(u);
  if (!h) return h;
  return *h + u.dot(t_);
}

AffineBody::AffineBody(BodyPtr inner, Mat M)
    : CenteredBody(M * inner->center(), 0, 0, inner->symmetric()),
      inner_(std::move(inner)),
      M_(std::move(M)) {
  Eigen::JacobiSVD<Mat> svd(M_);
  double smax = svd.singularValues().maxCoeff();
  double smin = svd.singularValues().minCoeff();
  if (!(smin > 0)) throw Error("BadDescriptor", "affine map is singular");
  r_ = inner_->inner_radius() * smin;
  R_ = inner_->outer_radius() * smax;
  Minv_ = M_.inverse();
  inv_norm_ = 1 / smin;
  if (const Lift* l = inner_->lift()) lift_ = Lift{l->base, M_ * l->L, M_ * l->offset};
}

bool AffineBody::contains(const Vec& x, double delta) const {
  return inner_->contains(Minv_ * x, delta * inv_norm_);
}

std::optional<Halfspace> AffineBody::separate(const Vec& x,
                                              double delta) const {
  auto h = inner_->separate(Minv_ * x, delta * inv_norm_);
  if (!h) return h;
  return Halfspace{Minv_.transpose() * h->a, h->beta};
}

std::optional<Interval> AffineBody::line_range(const Vec& p, const Vec& d,
                                               double delta) const {
  return inner_->line_range(Minv_ * p, Minv_ * d, delta * inv_norm_);
}

std::optional<double> AffineBody::support(const Vec& u) const {
  return inner_->support(M_.transpose() * u);
}

// ---- Intersection / KBSym / Product ---------------------------------------

IntersectionBody::IntersectionBody(BodyPtr left, BodyPtr right, Vec center,
                                   double r, double R, bool symmetric)
    : CenteredBody(std::move(center), r, R, symmetric),
      left_(std::move(left)),
      right_(std::move(right)) {}

bool IntersectionBody::contains(const Vec& x, double delta) const {
  return left_->contains(x, delta) && right_->contains(x, delta);
}

std::optional<Halfspace> IntersectionBody::separate(const Vec& x,
                                                    double delta) const {
  if (auto h = left_->separate(x, delta)) return h;
  return right_->separate(x, delta);
}

std::optional<Interval> IntersectionBody::line_range(const Vec& p,
                                                     const Vec& d,
                                                     double delta) const {
  auto a = left_->line_range(p, d, delta);
  if (!a) return a;
  if (a->empty()) return a;
  auto b = right_->line_range(p, d, delta);
  if (!b) return b;
  return intersect(*a, *b);
}

KBSymBody::KBSymBody(BodyPtr K, Vec c, double r, double R)
    : CenteredBody(Vec::Zero(K->dim()), r, R, true),
      K_(std::move(K)),
      c_(std::move(c)) {}

bool KBSymBody::contains(const Vec& x, double delta) const {
  return K_->contains(c_ + x, delta) && K_->contains(c_ - x, delta);
}

std::optional<Halfspace> KBSymBody::separate(const Vec& x,
                                             double delta) const {
  if (auto h = K_->separate(c_ + x, delta))
    return Halfspace{h->a, h->beta - h->a.dot(c_)};
  if (auto h = K_->separate(c_ - x, delta))
    return Halfspace{-h->a, h->beta - h->a.dot(c_)};
  return std::nullopt;
}

std::optional<Interval> KBSymBody::line_range(const Vec& p, const Vec& d,
                                              double delta) const {
  auto a = K_->line_range(c_ + p, d, delta);
  if (!a || a->empty()) return a;
  auto b = K_->line_range(c_ - p, -d, delta);
  if (!b) return b;
  return intersect(*a, *b);
}

ProductBody::ProductBody(BodyPtr first, BodyPtr second)
    : CenteredBody(Vec(), std::min(first->inner_radius(), second->inner_radius()),
                   std::hypot(first->outer_radius(), second->outer_radius()),
                   first->symmetric() && second->symmetric()),
      first_(std::move(first)),
      second_(std::move(second)),
      n1_(first_->dim()) {
  center_.resize(n1_ + second_->dim());
  center_ << first_->center(), second_->center();
}

bool ProductBody::contains(const Vec& x, double delta) const {
  return first_->contains(x.head(n1_), delta) &&
         second_->contains(x.tail(second_->dim()), delta);
}

std::optional<Halfspace> ProductBody::separate(const Vec& x,
                                               double delta) const {
  int n2 = second_->dim();
  if (auto h = first_->separate(x.head(n1_), delta)) {
    Vec a = Vec::Zero(n1_ + n2);
    a.head(n1_) = h->a;
    return Halfspace{a, h->beta};
  }
  if (auto h = second_->separate(x.tail(n2), delta)) {
    Vec a = Vec::Zero(n1_ + n2);
    a.tail(n2) = h->a;
    return Halfspace{a, h->beta};
  }
  return std::nullopt;
}

std::optional<Interval> ProductBody::line_range(const Vec& p, const Vec& d,
                                                double delta) const {
  int n2 = second_->dim();
  auto a = first_->line_range(p.head(n1_), d.head(n1_), delta);
  if (!a || a->empty()) return a;
  auto b = second_->line_range(p.tail(n2), d.tail(n2), delta);
  if (!b) return b;
  return intersect(*a, *b);
}

std::optional<double> ProductBody::support(const Vec& u) const {
  auto a = first_->support(u.head(n1_));
  auto b = second_->support(u.tail(second_->dim()));
  if (!a || !b) return std::nullopt;
  return *a + *b;
}

// ---- factories ------------------------------------------------------------

BodyPtr make_ellipsoid(const Mat& A, const Vec& t) {
  if (A.rows() != A.cols() || A.rows() != t.size())
    throw Error("BadDescriptor", "ellipsoid dimensions disagree");
  if (!A.isApprox(A.transpose(), 1e-12))
    throw Error("BadDescriptor", "ellipsoid matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  if (!(es.eigenvalues().minCoeff() > 0))
    throw Error("BadDescriptor", "ellipsoid matrix not positive definite");
  return std::make_shared<EllipsoidBody>(0.5 * (A + A.transpose()), t);
}

BodyPtr make_ball(int n, double radius) {
  return make_ellipsoid(Mat::Identity(n, n) / (radius * radius), Vec::Zero(n));
}

BodyPtr make_lpball(int n, double p, double radius) {
  if (n < 1) throw Error("BadDescriptor", "lpball dimension must be positive");
  if (!(p >= 1)) throw Error("BadDescriptor", "lpball exponent must be >= 1");
  if (!(radius > 0)) throw Error("BadDescriptor", "lpball radius must be > 0");
  return std::make_shared<LpBall>(n, p, radius);
}

BodyPtr make_scaled(BodyPtr inner, double s) {
  if (!(s > 0)) throw Error("BadDescriptor", "scale factor must be > 0");
  return std::make_shared<ScaledBody>(std::move(inner), s);
}

BodyPtr make_translated(BodyPtr inner, const Vec& t) {
  if (t.size() != inner->dim())
    throw Error("BadDescriptor", "translation dimension mismatch");
  return std::make_shared<TranslatedBody>(std::move(inner), t);
}

BodyPtr make_affine(BodyPtr inner, const Mat& M) {
  if (M.rows() != inner->dim() || M.cols() != inner->dim())
    throw Error("BadDescriptor", "affine map dimension mismatch");
  return std::make_shared<AffineBody>(std::move(inner), M);
}

BodyPtr make_product(BodyPtr first, BodyPtr second) {
  return std::make_shared<ProductBody>(std::move(first), std::move(second));
}

BodyPtr kb_body(BodyPtr K, const Vec& c) {
  if (c.size() != K->dim()) throw Error("BadDescriptor", "kbsym point dimension");
  if (!K->contains(c, 0.0))
    throw Error("CenterOutsideBody", "symmetrization point is not in the body");
  double g = gauge(*K, c);
  if (!(g < 1 - 1e-12))
    throw Error("CenterOutsideBody", "symmetrization point is on the boundary");
  double r = (1 - g) * K->inner_radius();
  double R = std::min(2 * K->outer_radius(),
                      K->outer_radius() + (K->center() - c).norm());
  return std::make_shared<KBSymBody>(std::move(K), c, r, R);
}

}  // namespace thinlat

#pragma once

#include "thinlat/core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace thinlat {

// Closed interval of line parameters; empty when lo > hi.
struct Interval {
  double lo;
  double hi;
  bool empty() const { return lo > hi; }
};

// Halfspace {y : a.y <= beta}.
struct Halfspace {
  Vec a;
  double beta;
};

class CenteredBody;
using BodyPtr = std::shared_ptr<const CenteredBody>;

// The body is the affine image L(base) + offset; used for Minkowski sums so
// that membership and fiber problems become one optimization over the base.
struct Lift {
  BodyPtr base;
  Mat L;
  Vec offset;
};

// Convex body with a (weak) membership oracle and sandwiching data
//   center + r B  subset of  K  subset of  center + R B.
// The slack delta in every query is Euclidean: contains(x, delta) accepts
// all points within distance delta of K and may accept a little more.
class CenteredBody {
 public:
  CenteredBody(Vec center, double r, double R, bool symmetric);
  virtual ~CenteredBody() = default;

  int dim() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  double inner_radius() const { return r_; }
  double outer_radius() const { return R_; }
  bool symmetric() const { return symmetric_; }

  virtual bool contains(const Vec& x, double delta) const = 0;

  // Halfspace containing K and violated by x, or nullopt when x is in K at
  // slack delta. The default derives a cut from membership alone.
  virtual std::optional<Halfspace> separate(const Vec& x, double delta) const;

  // Parameters s with p + s d in K (at slack delta). nullopt when the body
  // has no closed form; callers then fall back to optimization.
  virtual std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                             double delta) const;

  // Closed-form support function max_{x in K} <u, x>, when available.
  virtual std::optional<double> support(const Vec& u) const;

  virtual const Lift* lift() const { return nullptr; }

  virtual std::string kind() const = 0;

 protected:
  Vec center_;
  double r_;
  double R_;
  bool symmetric_;
};

// ---- concrete bodies ------------------------------------------------------

class HPolytope : public CenteredBody {
 public:
  // {x : A x <= b}; center/radii as computed by compile_polytope.
  HPolytope(Mat A, Vec b, Vec center, double r, double R, bool symmetric);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  std::string kind() const override { return "hpolytope"; }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }
  const std::vector<Vec>& vertices() const { return vertices_; }

 private:
  Mat A_;
  Vec b_;
  Vec row_norm_;
  std::vector<Vec> vertices_;  // filled for small instances, used by support
};

class EllipsoidBody : public CenteredBody {
 public:
  // {x : (x-t)' A (x-t) <= 1}, A symmetric positive definite.
  EllipsoidBody(Mat A, Vec t);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  std::string kind() const override { return "ellipsoid"; }
  const Mat& A() const { return A_; }

 private:
  Mat A_;
  Mat Ainv_;
  double lip_;  // sqrt(lambda_max(A))
};

class LpBall : public CenteredBody {
 public:
  // {x : ||x||_p <= radius}; p = +inf allowed.
  LpBall(int n, double p, double radius);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  std::string kind() const override { return "lpball"; }
  double p() const { return p_; }
  double radius() const { return rho_; }

 private:
  double norm(const Vec& x) const;
  double p_;
  double rho_;
  double kappa_;  // ||v||_p <= kappa ||v||_2
};

class ScaledBody : public CenteredBody {
 public:
  ScaledBody(BodyPtr inner, double s);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  const Lift* lift() const override { return lift_ ? &*lift_ : nullptr; }
  std::string kind() const override { return "scale"; }

 private:
  BodyPtr inner_;
  double s_;
  std::optional<Lift> lift_;
};

class TranslatedBody : public CenteredBody {
 public:
  TranslatedBody(BodyPtr inner, Vec t);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  const Lift* lift() const override { return lift_ ? &*lift_ : nullptr; }
  std::string kind() const override { return "translate"; }

 private:
  BodyPtr inner_;
  Vec t_;
  std::optional<Lift> lift_;
};

class AffineBody : public CenteredBody {
 public:
  // M * inner, M nonsingular.
  AffineBody(BodyPtr inner, Mat M);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  const Lift* lift() const override { return lift_ ? &*lift_ : nullptr; }
  std::string kind() const override { return "affine"; }

 private:
  BodyPtr inner_;
  Mat M_;
  Mat Minv_;
  double inv_norm_;
  std::optional<Lift> lift_;
};

class IntersectionBody : public CenteredBody {
 public:
  // center/radii supplied by make_intersection.
  IntersectionBody(BodyPtr left, BodyPtr right, Vec center, double r, double R,
                   bool symmetric);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::string kind() const override { return "intersect"; }

 private:
  BodyPtr left_;
  BodyPtr right_;
};

// K[c] = (K - c) intersect (c - K), centered at 0.
class KBSymBody : public CenteredBody {
 public:
  KBSymBody(BodyPtr K, Vec c, double r, double R);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::string kind() const override { return "kbsym"; }
  const Vec& c() const { return c_; }

 private:
  BodyPtr K_;
  Vec c_;
};

// K1 x K2 in the direct sum of the two spaces.
class ProductBody : public CenteredBody {
 public:
  ProductBody(BodyPtr first, BodyPtr second);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  std::string kind() const override { return "product"; }

 private:
  BodyPtr first_;
  BodyPtr second_;
  int n1_;
};

// K1 + s K2; s may be negative (s = -1 gives the difference body).
class MinkowskiBody : public CenteredBody {
 public:
  MinkowskiBody(BodyPtr first, double s, BodyPtr second);
  bool contains(const Vec& x, double delta) const override;
  std::optional<Halfspace> separate(const Vec& x, double delta) const override;
  std::optional<double> support(const Vec& u) const override;
  const Lift* lift() const override { return &lift_; }
  std::string kind() const override { return "minkowski"; }

 private:
  BodyPtr first_;
  BodyPtr second_;
  double s_;
  Lift lift_;
};

// Polar body of a 0-symmetric K: {a : h_K(a) <= 1}.
class PolarBody : public CenteredBody {
 public:
  explicit PolarBody(BodyPtr K);
  bool contains(const Vec& a, double delta) const override;
  std::optional<Halfspace> separate(const Vec& a, double delta) const override;
  std::optional<Interval> line_range(const Vec& p, const Vec& d,
                                     double delta) const override;
  std::string kind() const override { return "polar"; }
  // Upper bound on h_K(a) (exact when K has a closed-form support).
  double h(const Vec& a) const;
  const BodyPtr& primal() const { return K_; }

 private:
  BodyPtr K_;
};

// ---- construction ---------------------------------------------------------

BodyPtr make_polytope(const Mat& A, const Vec& b);
BodyPtr make_ellipsoid(const Mat& A, const Vec& t);
BodyPtr make_ball(int n, double radius = 1.0);
BodyPtr make_lpball(int n, double p, double radius);
BodyPtr make_scaled(BodyPtr inner, double s);
BodyPtr make_translated(BodyPtr inner, const Vec& t);
BodyPtr make_affine(BodyPtr inner, const Mat& M);
BodyPtr make_intersection(BodyPtr left, BodyPtr right);
BodyPtr make_product(BodyPtr first, BodyPtr second);
BodyPtr make_minkowski(BodyPtr first, double s, BodyPtr second);
BodyPtr make_polar(BodyPtr K);

// K[c]; throws CenterOutsideBody when c is not in K.
BodyPtr kb_body(BodyPtr K, const Vec& c);

// Gauge about the center together with a subgradient (from the separating
// halfspace at the boundary point on the ray).
double gauge_subgradient(const CenteredBody& K, const Vec& x, Vec* g);

// Gauge of x about the body's center: inf{s >= 0 : center + (x-center)/s in K}.
// Exact via line_range when available, else bisection to tol.
double gauge(const CenteredBody& K, const Vec& x, double tol = 1e-12);
// Same, about an arbitrary interior point c.
double gauge_about(const CenteredBody& K, const Vec& c, const Vec& x,
                   double tol = 1e-12);
// Always uses bisection on membership (the spec's reference procedure).
double gauge_bisect(const CenteredBody& K, const Vec& x, double tol);

// Smallest and largest s with phi(p + s d) <= level, for phi convex along the
// line, searched inside [smin, smax].
Interval convex_sublevel(const std::function<double(double)>& phi,
                         double level, double smin, double smax);

// Parameter range of a line inside the ball center + R B.
Interval ball_chord(const Vec& center, double R, const Vec& p, const Vec& d);

// ---- descriptors ----------------------------------------------------------

struct BodyDescriptor {
  std::string type;  // hpolytope ellipsoid lpball scale translate intersect
                     // kbsym affine minkowski
  Mat A;             // hpolytope / ellipsoid matrix, affine map M
  Vec b;             // hpolytope right-hand side
  Vec t;             // ellipsoid center, translation, kbsym point c
  double p = 2.0;    // lpball exponent
  double radius = 1.0;
  double s = 1.0;    // scale factor / minkowski coefficient
  int dim = 0;       // lpball dimension
  std::shared_ptr<BodyDescriptor> inner;
  std::shared_ptr<BodyDescriptor> inner2;
};

// Throws BadDescriptor, UnboundedBody or EmptyInterior.
BodyPtr compile(const BodyDescriptor& d);

}  // namespace thinlat

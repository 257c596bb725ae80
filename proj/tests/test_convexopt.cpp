#include "helpers.hpp"

#include "doctest.h"

using namespace thinlat;

namespace {

ConvexObjective linear(const Vec& c) {
  return {[c](const Vec& x, Vec* g) {
            if (g) *g = c;
            return c.dot(x);
          },
          c.norm()};
}

double ellipsoid_support(const Mat& A, const Vec& t, const Vec& u) {
  return u.dot(t) + std::sqrt(u.dot(A.ldlt().solve(u)));
}

Vec random_unit(std::mt19937& rng, int n) {
  std::normal_distribution<double> N;
  Vec u(n);
  for (int i = 0; i < n; ++i) u(i) = N(rng);
  return u.normalized();
}

// exact distance between the line x0 + s d and a convex polygon
double line_polygon_distance(const refcheck::Polygon& P, const refcheck::P2& x0,
                             const refcheck::P2& d) {
  refcheck::P2 nrm(-d.y(), d.x());
  nrm.normalize();
  double lo = 1e300, hi = -1e300;
  for (const auto& v : P) {
    double s = nrm.dot(v - x0);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (lo <= 0 && hi >= 0) return 0;
  return lo > 0 ? lo : -hi;
}

}  // namespace

TEST_CASE("weak_minimize examples") {
  const double eps = 1e-6;
  BodyPtr B = make_ball(3);
  MinimizeResult r = weak_minimize(*B, linear(Vec::Unit(3, 0)), eps);
  CHECK(r.value >= -1 - 1e-12);
  CHECK(r.value <= -1 + eps);
  CHECK((r.y - Vec::Unit(3, 0) * -1).norm() < 1e-2);

  BodyPtr sq = th::square();
  Vec target(2);
  target << 3, 0;
  ConvexObjective dist{[target](const Vec& x, Vec* g) {
                         Vec r = x - target;
                         if (g) *g = r.normalized();
                         return r.norm();
                       },
                       1.0};
  MinimizeResult d = weak_minimize(*sq, dist, eps);
  CHECK(d.value == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(d.y(0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("weak_minimize matches vertex LP") {
  std::mt19937 rng(7);
  const double eps = 1e-6;
  for (int it = 0; it < 20; ++it) {
    refcheck::Polygon P = th::random_polygon(rng, it % 3 == 0);
    BodyPtr K = th::polygon_body(P);
    Vec c = random_unit(rng, 2);
    double exact = 1e300;
    for (const auto& v : P) exact = std::min(exact, c.dot(Vec(v)));
    MinimizeResult r = weak_minimize(*K, linear(c), eps);
    CHECK(r.value >= exact - 1e-9);
    CHECK(r.value <= exact + eps);
    CHECK(r.lower <= exact + 1e-9);
  }
}

TEST_CASE("gls_round on an ellipsoid") {
  std::mt19937 rng(9);
  Mat A0(3, 3);
  A0 << 4, 1, 0, 1, 2, 0.5, 0, 0.5, 1;
  Vec t0(3);
  t0 << 1, -2, 0.5;
  BodyPtr K = make_ellipsoid(A0, t0);
  RoundingResult r = gls_round(*K);
  CHECK(r.sandwich_factor <= std::sqrt(3.0) * 4 + 1e-12);
  for (int i = 0; i < 200; ++i) {
    Vec u = random_unit(rng, 3);
    double hk = ellipsoid_support(A0, t0, u);
    double he = ellipsoid_support(r.A, r.t, u);
    CHECK(he <= hk + 1e-7);
    CHECK(hk <= u.dot(r.t) + r.sandwich_factor * (he - u.dot(r.t)) + 1e-7);
  }
}

TEST_CASE("gls_round on a box") {
  for (int n = 2; n <= 4; ++n) {
    BodyPtr K = th::box(Vec::Ones(n));
    RoundingResult r = gls_round(*K);
    double f = std::sqrt(double(n)) * (n + 1);
    Eigen::SelfAdjointEigenSolver<Mat> es(r.A);
    double min_axis = 1 / std::sqrt(es.eigenvalues().maxCoeff());
    CHECK(min_axis >= (1 - r.t.norm()) / f - 1e-9);
  }
}

TEST_CASE("gls_round sandwich on random triangles") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-3, 3);
  for (int it = 0; it < 10; ++it) {
    refcheck::Polygon P;
    do {
      P = refcheck::convex_hull({{U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)}});
    } while (P.size() != 3 || refcheck::signed_area(P) < 0.5);
    BodyPtr K = th::polygon_body(P);
    RoundingResult r = gls_round(*K);
    for (int k = 0; k < 64; ++k) {
      Vec u = random_unit(rng, 2);
      double hk = -1e300;
      for (const auto& v : P) hk = std::max(hk, u.dot(Vec(v)));
      double he = ellipsoid_support(r.A, r.t, u);
      CHECK(he <= hk + 1e-7);
      CHECK(hk <= u.dot(r.t) + r.sandwich_factor * (he - u.dot(r.t)) + 1e-7);
    }
  }
}

TEST_CASE("gls_round is translation equivariant") {
  std::mt19937 rng(15);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int it = 0; it < 5; ++it) {
    BodyPtr K = th::polygon_body(th::random_polygon(rng, false));
    Vec v(2);
    v << U(rng), U(rng);
    RoundingResult a = gls_round(*K);
    RoundingResult b = gls_round(*make_translated(K, v));
    CHECK((a.A - b.A).norm() <= 1e-6 * a.A.norm());
    CHECK((a.t + v - b.t).norm() <= 1e-6 * (1 + v.norm()));
  }
}

TEST_CASE("support matches vertex maxima") {
  std::mt19937 rng(19);
  for (int it = 0; it < 10; ++it) {
    refcheck::Polygon P = th::random_polygon(rng, false);
    BodyPtr K = th::polygon_body(P);
    Vec u = random_unit(rng, 2);
    double h = -1e300;
    for (const auto& v : P) h = std::max(h, u.dot(Vec(v)));
    SupportResult s = support(*K, u);
    CHECK(s.lower <= h + 1e-9);
    CHECK(s.upper >= h - 1e-9);
  }
}

TEST_CASE("fiber_distance examples") {
  BodyPtr B = make_ball(2);
  Mat D = Vec::Unit(2, 0);
  Vec x0 = Vec::Unit(2, 1) * 0.5;
  FiberResult f = fiber_distance(*B, x0, D, 1e-9);
  CHECK(f.feasible);
  CHECK(f.distance <= 1e-9);
  CHECK(B->contains(f.witness, 1e-9));
  CHECK(std::abs(f.witness(1) - 0.5) <= 1e-9);

  x0 = Vec::Unit(2, 1) * 2;
  FiberResult far = fiber_distance(*B, x0, D, 1e-9);
  CHECK_FALSE(far.feasible);
  FiberResult below = fiber_distance(*B, x0, D, 1 - 1e-2);
  CHECK_FALSE(below.feasible);
  CHECK(below.lower <= 1 + 1e-12);
  CHECK(below.lower > 1 - 1e-2);
  FiberResult above = fiber_distance(*B, x0, D, 1 + 1e-2);
  CHECK(above.feasible);
  CHECK(above.distance >= 1 - 1e-12);
}

TEST_CASE("fiber_distance against line-polygon geometry") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> U(-2, 2);
  int decided = 0;
  for (int it = 0; it < 40; ++it) {
    refcheck::Polygon P = th::random_polygon(rng, false);
    BodyPtr K = th::polygon_body(P);
    refcheck::P2 x0(U(rng), U(rng)), d(U(rng), U(rng));
    double exact = line_polygon_distance(P, x0, d);
    FiberResult f = fiber_distance(*K, Vec(x0), Mat(Vec(d)), 1e-9);
    if (exact > 1e-7) {
      CHECK_FALSE(f.feasible);
      CHECK(f.lower <= exact + 1e-9);
      ++decided;
    } else if (exact == 0) {
      CHECK(f.feasible);
      ++decided;
    }
    if (exact > 1e-3) {
      FiberResult g = fiber_distance(*K, Vec(x0), Mat(Vec(d)), exact * (1 + 1e-2));
      CHECK(g.feasible);
      CHECK(g.distance >= exact - 1e-9);
    }
  }
  CHECK(decided > 30);
}

TEST_CASE("fiber through a deep point is feasible") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int it = 0; it < 20; ++it) {
    BodyPtr K = make_lpball(3, 1 + 3 * (U(rng) + 1), 1.0);
    Vec p(3);
    p << U(rng), U(rng), U(rng);
    p *= 0.9 / std::max(gauge(*K, p), 1e-3);
    if (gauge(*K, p) >= 1 - 1e-6) continue;
    Mat D(3, 2);
    D << U(rng), U(rng), U(rng), U(rng), U(rng), U(rng);
    Vec x0 = p + D * Vec::Constant(2, 0.7);
    CHECK(fiber_distance(*K, x0, D, 1e-9).feasible);
  }
}

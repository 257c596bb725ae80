#pragma once

#include "refcheck/refcheck.hpp"
#include "thinlat/volume.hpp"

#include <cmath>
#include <random>

namespace th {

using namespace thinlat;

inline BodyPtr box(const Vec& half) {
  const int n = static_cast<int>(half.size());
  Mat A(2 * n, n);
  A.setZero();
  Vec b(2 * n);
  for (int i = 0; i < n; ++i) {
    A(2 * i, i) = 1;
    A(2 * i + 1, i) = -1;
    b(2 * i) = b(2 * i + 1) = half(i);
  }
  return make_polytope(A, b);
}

inline BodyPtr square(double h = 1.0) { return box(Vec::Constant(2, h)); }

inline BodyPtr polygon_body(const refcheck::Polygon& P) {
  Mat A;
  Vec b;
  refcheck::to_halfplanes(P, A, b);
  return make_polytope(A, b);
}

inline refcheck::Polygon triangle01() { return {{0, 0}, {1, 0}, {0, 1}}; }

inline refcheck::Polygon regular(int m, double radius, double phase = 0) {
  refcheck::Polygon P;
  for (int i = 0; i < m; ++i) {
    double t = phase + 2 * M_PI * i / m;
    P.push_back({radius * std::cos(t), radius * std::sin(t)});
  }
  return P;
}

// Convex polygon from random angles; symmetric about 0 when `sym`.
inline refcheck::Polygon random_polygon(std::mt19937& rng, bool sym) {
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<refcheck::P2> pts;
  int m = 3 + static_cast<int>(U(rng) * 5);
  for (int i = 0; i < m; ++i) {
    double t = 2 * M_PI * U(rng);
    double r = 0.5 + U(rng);
    refcheck::P2 p(r * std::cos(t), r * std::sin(t));
    p.x() *= 0.6 + U(rng);
    pts.push_back(p);
    if (sym) pts.push_back(-p);
  }
  refcheck::Polygon h = refcheck::convex_hull(pts);
  if (h.size() < 3 || refcheck::signed_area(h) < 0.2) return random_polygon(rng, sym);
  if (!sym) {
    refcheck::P2 shift(U(rng) - 0.5, U(rng) - 0.5);
    h = refcheck::translate(h, shift);
  }
  return h;
}

inline refcheck::Membership membership(const BodyPtr& K) {
  return [K](const refcheck::VecX& x) { return K->contains(x, 0.0); };
}

}  // namespace th

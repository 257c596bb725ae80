#include "refcheck/refcheck.hpp"

#include <algorithm>
#include <cmath>

namespace refcheck {

namespace {

double cross(const P2& a, const P2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

double signed_area(const Polygon& P) {
  double s = 0;
  for (std::size_t i = 0; i < P.size(); ++i) s += cross(P[i], P[(i + 1) % P.size()]);
  return 0.5 * s;
}

double exact_area(const Polygon& P) {
  if (P.size() < 3) throw RefError("DegeneratePolygon", "fewer than 3 vertices");
  double a = signed_area(P);
  if (!(std::abs(a) > 0)) throw RefError("DegeneratePolygon", "zero area");
  return std::abs(a);
}

bool is_convex_ccw(const Polygon& P) {
  const std::size_t m = P.size();
  if (m < 3) return false;
  for (std::size_t i = 0; i < m; ++i) {
    const P2& a = P[i];
    const P2& b = P[(i + 1) % m];
    const P2& c = P[(i + 2) % m];
    if (cross(b - a, c - b) < -1e-12) return false;
  }
  return true;
}

Polygon clip(const Polygon& P, const Polygon& Q) {
  Polygon out = P;
  for (std::size_t i = 0; i < Q.size() && !out.empty(); ++i) {
    const P2 a = Q[i], b = Q[(i + 1) % Q.size()];
    auto side = [&](const P2& x) { return cross(b - a, x - a); };
    Polygon in = out;
    out.clear();
    for (std::size_t k = 0; k < in.size(); ++k) {
      const P2 cur = in[k], nxt = in[(k + 1) % in.size()];
      double sc = side(cur), sn = side(nxt);
      if (sc >= 0) out.push_back(cur);
      if ((sc >= 0) != (sn >= 0)) {
        double t = sc / (sc - sn);
        out.push_back(cur + t * (nxt - cur));
      }
    }
  }
  if (out.size() < 3 || std::abs(signed_area(out)) < 1e-15) return {};
  return out;
}

Polygon convex_hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  Polygon h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

Polygon translate(const Polygon& P, const P2& t) {
  Polygon Q = P;
  for (auto& v : Q) v += t;
  return Q;
}

Polygon scale(const Polygon& P, double s) {
  Polygon Q = P;
  for (auto& v : Q) v *= s;
  if (s < 0) return convex_hull(Q);
  return Q;
}

Polygon negate(const Polygon& P) { return scale(P, -1.0); }

Polygon minkowski_sum(const Polygon& P, const Polygon& Q) {
  std::vector<P2> pts;
  for (const auto& p : P)
    for (const auto& q : Q) pts.push_back(p + q);
  return convex_hull(pts);
}

Polygon hpolygon(const MatX& A, const VecX& b) {
  // Start from a box that surely contains the bounded region.
  double big = 1e6;
  Polygon out{P2(-big, -big), P2(big, -big), P2(big, big), P2(-big, big)};
  for (Eigen::Index i = 0; i < A.rows() && !out.empty(); ++i) {
    P2 a(A(i, 0), A(i, 1));
    Polygon in = out;
    out.clear();
    for (std::size_t k = 0; k < in.size(); ++k) {
      const P2 cur = in[k], nxt = in[(k + 1) % in.size()];
      double sc = b(i) - a.dot(cur), sn = b(i) - a.dot(nxt);
      if (sc >= 0) out.push_back(cur);
      if ((sc >= 0) != (sn >= 0)) out.push_back(cur + (sc / (sc - sn)) * (nxt - cur));
    }
  }
  return out;
}

void to_halfplanes(const Polygon& P, MatX& A, VecX& b) {
  const auto m = static_cast<Eigen::Index>(P.size());
  A.resize(m, 2);
  b.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    P2 e = P[static_cast<std::size_t>((i + 1) % m)] - P[static_cast<std::size_t>(i)];
    P2 nrm(e.y(), -e.x());
    nrm.normalize();
    A.row(i) = nrm.transpose();
    b(i) = nrm.dot(P[static_cast<std::size_t>(i)]);
  }
}

bool contains(const Polygon& P, const P2& x, double slack) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    P2 e = P[(i + 1) % P.size()] - P[i];
    if (cross(e, x - P[i]) < -slack * e.norm()) return false;
  }
  return true;
}

P2 centroid(const Polygon& P) {
  double a = 0;
  P2 c(0, 0);
  for (std::size_t i = 0; i < P.size(); ++i) {
    const P2& p = P[i];
    const P2& q = P[(i + 1) % P.size()];
    double w = cross(p, q);
    a += w;
    c += w * (p + q);
  }
  return c / (3 * a);
}

double kb_ratio(const Polygon& P, const P2& c) {
  Polygon left = translate(P, -c);
  Polygon right = translate(negate(P), c);
  Polygon s = clip(left, right);
  if (s.empty()) return 0;
  return std::abs(signed_area(s)) / exact_area(P);
}

double polytope_volume_3d(const MatX& A, const VecX& b) {
  const Eigen::Index m = A.rows();
  std::vector<Eigen::Vector3d> verts;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i + 1; j < m; ++j)
      for (Eigen::Index k = j + 1; k < m; ++k) {
        Eigen::Matrix3d M;
        M.row(0) = A.row(i);
        M.row(1) = A.row(j);
        M.row(2) = A.row(k);
        if (std::abs(M.determinant()) < 1e-12) continue;
        Eigen::Vector3d x = M.partialPivLu().solve(Eigen::Vector3d(b(i), b(j), b(k)));
        if (((A * x - b).array() <= 1e-9).all()) verts.push_back(x);
      }
  if (verts.size() < 4) throw RefError("DegeneratePolytope", "fewer than 4 vertices");
  Eigen::Vector3d o = Eigen::Vector3d::Zero();
  for (const auto& v : verts) o += v;
  o /= static_cast<double>(verts.size());
  double vol = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::Vector3d a = A.row(i).transpose();
    double na = a.norm();
    Eigen::Vector3d u = a / na;
    Eigen::Vector3d e1 = u.unitOrthogonal(), e2 = u.cross(e1);
    std::vector<P2> face;
    for (const auto& v : verts)
      if (std::abs(a.dot(v) - b(i)) <= 1e-9 * std::max(1.0, std::abs(b(i))))
        face.push_back(P2(e1.dot(v), e2.dot(v)));
    Polygon h = convex_hull(face);
    if (h.size() < 3) continue;
    double height = (b(i) - a.dot(o)) / na;
    vol += std::abs(signed_area(h)) * height / 3.0;
  }
  return vol;
}

CoverBounds brute_covering_number(const Polygon& C, const Polygon& K, double grid_step) {
  // inradius bound of K about its centroid
  P2 kc = centroid(K);
  double inr = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < K.size(); ++i) {
    P2 e = K[(i + 1) % K.size()] - K[i];
    inr = std::min(inr, cross(e, kc - K[i]) / e.norm());
  }
  if (!(grid_step > 0) || grid_step > inr / 4)
    throw RefError("GridTooCoarse", "grid step must be at most inradius/4");

  Polygon diff = minkowski_sum(C, negate(K));
  Polygon kk = minkowski_sum(K, negate(K));
  long lower = static_cast<long>(std::ceil(exact_area(diff) / exact_area(kk) - 1e-9));

  auto grid_in = [&](const Polygon& P) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& v : P) {
      xmin = std::min(xmin, v.x());
      xmax = std::max(xmax, v.x());
      ymin = std::min(ymin, v.y());
      ymax = std::max(ymax, v.y());
    }
    std::vector<P2> g;
    for (long i = static_cast<long>(std::floor(xmin / grid_step));
         i <= static_cast<long>(std::ceil(xmax / grid_step)); ++i)
      for (long j = static_cast<long>(std::floor(ymin / grid_step));
           j <= static_cast<long>(std::ceil(ymax / grid_step)); ++j) {
        P2 p(i * grid_step, j * grid_step);
        if (contains(P, p, 1e-12)) g.push_back(p);
      }
    return g;
  };
  std::vector<P2> samples = grid_in(C);
  for (const auto& v : C) samples.push_back(v);
  std::vector<P2> cands = grid_in(diff);

  std::vector<std::vector<int>> covers(cands.size());
  for (std::size_t t = 0; t < cands.size(); ++t)
    for (std::size_t s = 0; s < samples.size(); ++s)
      if (contains(K, samples[s] - cands[t], 1e-12)) covers[t].push_back(static_cast<int>(s));

  std::vector<char> done(samples.size(), 0);
  std::size_t left = samples.size();
  long upper = 0;
  while (left > 0) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t t = 0; t < cands.size(); ++t) {
      std::size_t g = 0;
      for (int s : covers[t]) g += !done[static_cast<std::size_t>(s)];
      if (g > best_gain) {
        best_gain = g;
        best = t;
      }
    }
    if (best_gain == 0) break;  // unreachable for a fine enough grid
    for (int s : covers[best])
      if (!done[static_cast<std::size_t>(s)]) {
        done[static_cast<std::size_t>(s)] = 1;
        --left;
      }
    ++upper;
  }
  if (left > 0) throw RefError("GridTooCoarse", "samples left uncovered");
  return CoverBounds{lower, std::max(upper, lower)};
}

KBPoint brute_kb(const Polygon& K, double grid_step) {
  P2 g = centroid(K);
  KBPoint best{g, kb_ratio(K, g)};
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& v : K) {
    xmin = std::min(xmin, v.x());
    xmax = std::max(xmax, v.x());
    ymin = std::min(ymin, v.y());
    ymax = std::max(ymax, v.y());
  }
  for (double x = xmin; x <= xmax; x += grid_step)
    for (double y = ymin; y <= ymax; y += grid_step) {
      P2 c(x, y);
      if (!contains(K, c)) continue;
      double v = kb_ratio(K, c);
      if (v > best.value) best = KBPoint{c, v};
    }
  return best;
}

double gauge(const Membership& in, const VecX& c, const VecX& x, double tol) {
  // c + d/s is inside exactly when s >= gauge
  VecX d = x - c;
  if (d.norm() == 0) return 0;
  double hi = 1;
  while (!in(c + d / hi)) hi *= 2;
  double lo = hi;
  while (in(c + d / lo)) {
    lo *= 0.5;
    if (lo < 1e-300) return 0;
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    double mid = 0.5 * (lo + hi);
    if (in(c + d / mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<VecX> coeff_box_scan(const Membership& in, const MatX& B, const VecX& a0,
                                 double R) {
  const Eigen::Index n = B.cols();
  MatX Binv = B.inverse();
  VecX z0 = Binv * a0;
  Eigen::VectorXi lo(n), hi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double w = R * Binv.row(i).norm();
    lo(i) = static_cast<int>(std::floor(z0(i) - w));
    hi(i) = static_cast<int>(std::ceil(z0(i) + w));
  }
  std::vector<VecX> out;
  Eigen::VectorXi z = lo;
  while (true) {
    VecX x = B * z.cast<double>();
    if (in(x)) out.push_back(x);
    Eigen::Index k = 0;
    while (k < n && z(k) == hi(k)) {
      z(k) = lo(k);
      ++k;
    }
    if (k == n) break;
    ++z(k);
  }
  return out;
}

}  // namespace refcheck

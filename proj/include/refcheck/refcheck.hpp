#pragma once

// Brute-force reference oracles for tests. Nothing here calls into the
// thinlat library; the code only depends on Eigen.

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace refcheck {

using P2 = Eigen::Vector2d;
using Polygon = std::vector<P2>;  // counterclockwise, convex
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

struct RefError : std::runtime_error {
  RefError(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name(std::move(name)) {}
  std::string name;
};

// Shoelace area; throws DegeneratePolygon for fewer than 3 vertices or zero area.
double exact_area(const Polygon& P);
// Signed area, no checks (0 for degenerate input).
double signed_area(const Polygon& P);
bool is_convex_ccw(const Polygon& P);

// Sutherland-Hodgman intersection of two convex polygons; empty if disjoint.
Polygon clip(const Polygon& P, const Polygon& Q);
Polygon convex_hull(std::vector<P2> pts);
Polygon translate(const Polygon& P, const P2& t);
Polygon scale(const Polygon& P, double s);
Polygon negate(const Polygon& P);
Polygon minkowski_sum(const Polygon& P, const Polygon& Q);
// {x : A x <= b} in the plane (bounded).
Polygon hpolygon(const MatX& A, const VecX& b);
// Half-plane form (A x <= b) of a convex ccw polygon.
void to_halfplanes(const Polygon& P, MatX& A, VecX& b);
bool contains(const Polygon& P, const P2& x, double slack = 0);
P2 centroid(const Polygon& P);

// area(P[c]) / area(P) with P[c] = (P - c) cap (c - P).
double kb_ratio(const Polygon& P, const P2& c);

// Volume of a bounded 3-D polytope {x : A x <= b}, from facet areas.
double polytope_volume_3d(const MatX& A, const VecX& b);

struct CoverBounds {
  long lower;
  long upper;
};
// Greedy cover of grid samples of C by translates of K on a grid anchored
// at the origin (upper), and ceil(area(C-K)/area(K-K)) (lower).
CoverBounds brute_covering_number(const Polygon& C, const Polygon& K, double grid_step);

struct KBPoint {
  P2 c;
  double value;
};
// Grid (plus centroid) argmax of kb_ratio.
KBPoint brute_kb(const Polygon& K, double grid_step);

using Membership = std::function<bool(const VecX&)>;

// All lattice points B z inside the body, scanning every integer z whose
// point can lie within distance R of a0.
std::vector<VecX> coeff_box_scan(const Membership& in, const MatX& B, const VecX& a0,
                                 double R);

// Gauge of x about c by bisection on membership, to tol.
double gauge(const Membership& in, const VecX& c, const VecX& x, double tol = 1e-12);

}  // namespace refcheck

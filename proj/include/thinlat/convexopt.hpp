#pragma once

#include "thinlat/geometry.hpp"

#include <functional>
#include <limits>

namespace thinlat {

struct EngineConfig {
  // Multiplies the classical iteration budget 2(n+1)^2 ln(R L/(r eps)).
  double budget_scale = 2.0;
  int budget_slack = 64;
  int gls_max_iterations = 200000;
};

// Convex function with a subgradient oracle. eval(x, g) returns f(x) and,
// when g is non-null, writes a subgradient into *g.
struct ConvexObjective {
  std::function<double(const Vec&, Vec*)> eval;
  double lipschitz = 1.0;
};

struct MinimizeResult {
  Vec y;          // best feasible point found
  double value;   // f(y) = omega
  double lower;   // certified lower bound on min_K f
  int iterations = 0;
  bool converged = false;
};

// Optional early exits for weak_minimize: stop once f(y) <= stop_value, or
// once the lower bound exceeds stop_lower.
struct StopRule {
  double stop_value = -std::numeric_limits<double>::infinity();
  double stop_lower = std::numeric_limits<double>::infinity();
};

// Ellipsoid method (deep cuts, running lower bound). Returns y in K with
// value - eps <= min_K f <= f(y) = value. Throws IterationBudgetExceeded with
// the incumbent in the message when the budget runs out.
MinimizeResult weak_minimize(const CenteredBody& K, const ConvexObjective& f,
                             double eps, const EngineConfig& cfg = {});
// Same, but never throws on budget; the caller inspects converged/stop.
MinimizeResult weak_minimize_raw(const CenteredBody& K,
                                 const ConvexObjective& f, double eps,
                                 const EngineConfig& cfg, const StopRule& stop);

struct RoundingResult {
  Mat A;  // E(A) = {x : x' A x <= 1}
  Vec t;
  double sandwich_factor;  // sqrt(n)(n+1)
  int iterations = 0;
};

// Shallow-cut ellipsoid rounding: E(A) + t in K in sandwich_factor E(A) + t.
RoundingResult gls_round(const CenteredBody& K, const EngineConfig& cfg = {});

struct SupportResult {
  double lower;
  double upper;
  Vec argmax;
};

// max_{x in K} <u, x>, closed form when the body has one.
SupportResult support(const CenteredBody& K, const Vec& u, double eps = 1e-10,
                      const EngineConfig& cfg = {});

struct FiberResult {
  double distance;  // upper bound on dist(F, K) (value at the witness)
  double lower;     // certified lower bound
  Vec witness;      // point of K attaining `distance`
  Vec w;            // fiber coordinates of the nearest fiber point
  bool feasible;    // distance <= tol
};

// Distance between K and the affine subspace F = {x0 + D w}. Decides
// feasibility at tolerance tol: feasible when distance <= tol, infeasible
// when the lower bound exceeds tol. Throws FiberSolveFailure if neither is
// certified within budget.
FiberResult fiber_distance(const CenteredBody& K, const Vec& x0, const Mat& D,
                           double tol, const EngineConfig& cfg = {});

}  // namespace thinlat

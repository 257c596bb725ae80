#pragma once

#include "thinlat/thinlattice.hpp"

#include <utility>
#include <vector>

namespace thinlat {

struct VolumeEstimate {
  double V;
  double eps;
  std::int64_t points_counted;
  double lattice_det;
  std::pair<double, double> guarantee;  // [V (1+eps)^{-n}, V]
  Vec c;                                // symmetrization point used
  CoveringLattice lattice;
};

// vol(K) <= V <= (1+eps)^n vol(K), 0 < eps <= 1.
VolumeEstimate estimate_volume(BodyPtr K, double eps, const PipelineConfig& cfg = {});

// eps^n det(L) |eps L cap ((1+eps)K - eps c)| for a lattice L covering some
// symmetric K0 inside K - c.
double points_to_volume(const CenteredBody& K, const Vec& c, const LatticeBasis& L,
                        double eps, const EnumConfig& cfg = {},
                        std::int64_t* points = nullptr);

struct ImproveResult {
  Vec x;
  int J = 0;
  double eps0 = 0;
  int rounds = 0;
  bool stopped_early = false;
  // per round: estimate at the previous point and at the chosen point
  std::vector<double> previous_estimates;
  std::vector<double> chosen_estimates;
  std::vector<std::int64_t> net_sizes;
};

// One call of the improvement procedure on body A from x (vol(A[x]) >=
// alpha^n vol(A)). With early_stop, rounds end as soon as the estimates
// certify nu(x_j) >= gamma/(1+eps).
ImproveResult improve(BodyPtr A, const Vec& x, double alpha, double eps,
                      const PipelineConfig& cfg = {}, bool early_stop = true);

struct KBResult {
  Vec c;
  double nu = std::numeric_limits<double>::quiet_NaN();
  double eps;
  int iterations = 0;
  std::vector<ImproveResult> calls;
};

// Point c in K with vol(K[c]) >= (1+eps)^{-n} Sym_kb(K) vol(K).
KBResult kb_point(BodyPtr K, double eps, const PipelineConfig& cfg = {},
                  bool early_stop = true);

struct OperatorNormResult {
  double V;
  std::pair<double, double> bracket;  // [V, V/(1-eps/2)] contains ||T||
  std::int64_t net_points;
};

// ||T||_{X->Y} with X, Y given by their 0-symmetric unit balls.
OperatorNormResult operator_norm(const Mat& T, BodyPtr BX, BodyPtr BY, double eps,
                                 const PipelineConfig& cfg = {});

struct PolyApprox {
  Mat A;  // rows a with |<x - center, a>| <= 1 written as A x <= b
  Vec b;
  BodyPtr P;
  std::int64_t facets;
  std::int64_t net_points;
};

// Symmetric polytope with K in P in (1+eps)K (about K's center).
PolyApprox polyhedral_approx(BodyPtr K, double eps, const PipelineConfig& cfg = {});

}  // namespace thinlat

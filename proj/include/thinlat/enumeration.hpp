#pragma once

#include "thinlat/convexopt.hpp"
#include "thinlat/geometry.hpp"
#include "thinlat/lattice.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace thinlat {

struct EnumConfig {
  // Gauge band: points with gauge <= 1 - tol are always emitted, points with
  // gauge > 1 + tol never are.
  double tol = 1e-9;
  std::int64_t node_budget = 100000000;
  EngineConfig engine;
};

struct EnumerationReport {
  std::int64_t points_emitted = 0;
  // level_node_counts[l] = feasible coefficient choices at depth l; the last
  // entry counts leaves.
  std::vector<std::int64_t> level_node_counts;
  std::int64_t fiber_solves = 0;
  double tolerance_used = 0;
  bool stopped_early = false;
};

// Receives each lattice point and its coefficient vector; return false to
// stop the enumeration.
using PointSink = std::function<bool(const Vec&, const IVec&)>;

// Schnorr-Euchner enumeration of K intersect Lambda using the given basis.
EnumerationReport enumerate(const CenteredBody& K, const LatticeBasis& L,
                            const PointSink& sink, const EnumConfig& cfg = {});

// |K intersect Lambda| (basis-independent; enumerates with a reduced basis).
std::int64_t count(const CenteredBody& K, const LatticeBasis& L,
                   const EnumConfig& cfg = {},
                   EnumerationReport* report = nullptr);
// Same count with the given basis, no reduction.
std::int64_t count_with_basis(const CenteredBody& K, const LatticeBasis& L,
                              const EnumConfig& cfg = {},
                              EnumerationReport* report = nullptr);

struct Lambda1Result {
  double lambda;
  Vec witness;
};

// Shortest nonzero lattice vector in the gauge of the 0-symmetric body K,
// searched in s K. Throws NoNonzeroPoint when s K holds only 0.
Lambda1Result lambda1(const CenteredBody& K, const LatticeBasis& L, double s,
                      const EnumConfig& cfg = {});

// True iff Lambda misses x + lambda K (ties inside the band count as near).
bool is_far(const CenteredBody& K, const LatticeBasis& L, const Vec& x,
            double lambda, const EnumConfig& cfg = {});

struct CoveringBracket {
  double lower;
  double upper;
  double max_coset_distance_lo;
  double max_coset_distance_hi;
};

// Brackets mu(K, Lambda) from the coset distances of Lambda/p mod Lambda.
CoveringBracket covering_radius_bracket(const CenteredBody& K,
                                        const LatticeBasis& L, int p,
                                        const EnumConfig& cfg = {},
                                        double rel_tol = 1e-9);

}  // namespace thinlat

#pragma once

#include "thinlat/enumeration.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace thinlat {

// Returns A with E(A) = {x : x'Ax <= 1} inside the 0-symmetric body K.
using EllipsoidProvider = std::function<Mat(const CenteredBody&)>;
EllipsoidProvider gls_provider(const EngineConfig& cfg = {});

enum class GreedyMode {
  Marking,       // one pass per coordinate marks every rejected candidate
  PerCandidate,  // one early-exit pass per candidate
};

struct PipelineConfig {
  double c0 = 4.0;
  EnumConfig enumeration;
  EngineConfig engine;
  int bracket_p = 3;
  double bracket_rel_tol = 1e-9;
  GreedyMode greedy = GreedyMode::Marking;
  std::string provider_id = "gls";
  int threads = 1;
};

struct IndexStep {
  std::string step;      // m_lattice, sparsify, adjoin, scale
  std::int64_t index;    // lattice index of the step (1 for m_lattice/scale)
  std::string relation;  // base, sub, super, scale
  double factor;         // det(new)/det(old)
};

struct CoveringLattice {
  explicit CoveringLattice(LatticeBasis b) : basis(std::move(b)) {}

  LatticeBasis basis;
  std::string body_ref;
  std::pair<double, double> lambda1_bracket{0, 0};
  std::pair<double, double> mu_bracket{0, 0};
  double thinness = std::numeric_limits<double>::quiet_NaN();
  std::vector<IndexStep> index_trace;
  std::string provider;
  double c0 = 4.0;
  double tol = 1e-9;
  // measured Schnorr-Euchner node counts of K against the final basis
  std::vector<std::int64_t> se_node_counts;
  // pipeline diagnostics
  std::int64_t packing_N = 0;
  std::optional<SublatticeSpec> sparsifier;
  int adjoins = 0;
  double initial_packing_density = 0;

  bool certified(double slack = 1e-6) const { return mu_bracket.second <= 1 + slack; }
  // Same certificates for (sK, s Lambda).
  CoveringLattice scaled(double s) const;
};

// B = V_n^{1/n} / (2^{1+1/n} c0) A^{-1/2}.
LatticeBasis m_lattice_from_ellipsoid(const Mat& A, double c0);
LatticeBasis m_lattice(const CenteredBody& K, const EllipsoidProvider& provider,
                       double c0);

struct PackingResult {
  LatticeBasis M;
  SublatticeSpec spec;
  std::int64_t N;  // |K cap Lambda| - 1
  std::int64_t candidates_tried = 0;
};

PackingResult packing_lattice(const CenteredBody& K, const LatticeBasis& Lambda,
                              const PipelineConfig& cfg = {});

struct DensifyResult {
  LatticeBasis basis;
  int adjoins;
  std::vector<Vec> adjoined;
};

DensifyResult rogers_densify(const CenteredBody& K, const LatticeBasis& M,
                             double lambda, const PipelineConfig& cfg = {});

// Full symmetric pipeline. vol_ref (if given) fills the thinness field.
CoveringLattice thin_lattice_symmetric(BodyPtr K,
                                       const PipelineConfig& cfg = {},
                                       std::optional<double> vol_ref = {},
                                       const EllipsoidProvider& provider = {});

struct GeneralCovering {
  CoveringLattice lattice;  // certified for K[c], hence for K
  Vec c;
  BodyPtr symmetrized;      // K[c]
};

GeneralCovering thin_lattice_general(BodyPtr K, const PipelineConfig& cfg = {});

// Streams (C - K_cov) cap Lambda. `difference` may supply C - K_cov in
// closed form; otherwise it is built as a Minkowski body.
std::int64_t epsilon_net(BodyPtr C, BodyPtr K_cov, const CoveringLattice& L,
                         const PointSink& sink, const EnumConfig& cfg = {},
                         BodyPtr difference = nullptr);

}  // namespace thinlat

#include "thinlat/thinlattice.hpp"

#include "thinlat/volume.hpp"

#include <cmath>
#include <sstream>

namespace thinlat {

namespace {

// Adjoin threshold: a coset is far when d >= lambda (1 + kFarSlack).
constexpr double kFarSlack = 1e-6;

std::int64_t modp(std::int64_t v, std::int64_t p) {
  v %= p;
  return v < 0 ? v + p : v;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = modp(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = static_cast<std::int64_t>((__int128)r * b % p);
    b = static_cast<std::int64_t>((__int128)b * b % p);
    e >>= 1;
  }
  return r;
}

// <a^{<i}, z^{<i}> mod p
std::int64_t prefix_dot(const IVec& a, const IVec& z, int i, std::int64_t p) {
  __int128 s = 0;
  for (int j = 0; j < i; ++j) s += (__int128)modp(a(j), p) * modp(z(j), p) % p;
  return static_cast<std::int64_t>(s % p);
}

bool tail_zero(const IVec& z, int i, std::int64_t p) {
  for (int j = i + 1; j < z.size(); ++j)
    if (modp(z(j), p) != 0) return false;
  return true;
}

}  // namespace

EllipsoidProvider gls_provider(const EngineConfig& cfg) {
  // For 0-symmetric K, E + t in K implies E - t in K and hence E in K.
  return [cfg](const CenteredBody& K) { return gls_round(K, cfg).A; };
}

CoveringLattice CoveringLattice::scaled(double s) const {
  CoveringLattice out = *this;
  out.basis = basis.scaled(s);
  return out;
}

LatticeBasis m_lattice_from_ellipsoid(const Mat& A, double c0) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || !A.allFinite())
    throw Error("ProviderFailure", "ellipsoid matrix is not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  if (!(es.eigenvalues().minCoeff() > 0))
    throw Error("ProviderFailure", "ellipsoid matrix is not positive definite");
  Mat inv_sqrt = es.eigenvectors() *
                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().transpose();
  double f = std::pow(unit_ball_volume(n), 1.0 / n) /
             (std::pow(2.0, 1.0 + 1.0 / n) * c0);
  return LatticeBasis(f * inv_sqrt);
}

LatticeBasis m_lattice(const CenteredBody& K, const EllipsoidProvider& provider,
                       double c0) {
  if (!(c0 >= 1)) throw ValidationError("c0", "must be at least 1");
  Mat A;
  try {
    A = provider(K);
  } catch (const Error& e) {
    throw Error("ProviderFailure", e.what());
  }
  return m_lattice_from_ellipsoid(A, c0);
}

PackingResult packing_lattice(const CenteredBody& K, const LatticeBasis& Lambda,
                              const PipelineConfig& cfg) {
  const int n = Lambda.dim();
  EnumConfig ec = cfg.enumeration;
  ec.engine = cfg.engine;

  std::int64_t total = 0;
  enumerate(K, Lambda, [&](const Vec&, const IVec&) { ++total; return true; }, ec);
  const std::int64_t N = total - 1;
  if (N < 2)
    throw Error("NoPrimeFound", "K holds fewer than two nonzero lattice points");
  const std::int64_t p = next_prime_above(N);
  if (p >= 2 * N) throw Error("NoPrimeFound", "no prime in (N, 2N)");

  PackingResult res{Lambda, SublatticeSpec{IVec::Zero(n), p}, N, 0};
  IVec& a = res.spec.a;

  for (int i = 0; i < n; ++i) {
    bool chosen = false;
    if (cfg.greedy == GreedyMode::Marking) {
      std::vector<char> killed(static_cast<std::size_t>(p), 0);
      bool all_killed = false;
      enumerate(K, Lambda, [&](const Vec&, const IVec& z) {
        if (z.cwiseAbs().maxCoeff() == 0 || !tail_zero(z, i, p)) return true;
        std::int64_t s = prefix_dot(a, z, i, p);
        std::int64_t zi = modp(z(i), p);
        if (zi == 0) {
          if (s == 0) {
            all_killed = true;
            return false;
          }
          return true;
        }
        std::int64_t v = modp(-(__int128)s * inv_mod(zi, p) % p, p);
        killed[static_cast<std::size_t>(v)] = 1;
        return true;
      }, ec);
      if (!all_killed)
        for (std::int64_t cand = 0; cand < p; ++cand) {
          ++res.candidates_tried;
          if (!killed[static_cast<std::size_t>(cand)]) {
            a(i) = cand;
            chosen = true;
            break;
          }
        }
    } else {
      for (std::int64_t cand = 0; cand < p && !chosen; ++cand) {
        ++res.candidates_tried;
        a(i) = cand;
        bool hit = false;
        enumerate(K, Lambda, [&](const Vec&, const IVec& z) {
          if (z.cwiseAbs().maxCoeff() == 0 || !tail_zero(z, i, p)) return true;
          if (prefix_dot(a, z, i + 1, p) == 0) {
            hit = true;
            return false;
          }
          return true;
        }, ec);
        chosen = !hit;
      }
    }
    if (!chosen) {
      std::ostringstream os;
      os << "no admissible value for coordinate " << i << " (N = " << N
         << ", p = " << p << ")";
      throw Error("GreedyStuck", os.str());
    }
  }
  if (a.isZero())
    throw Error("GreedyStuck", "greedy produced a = 0");

  res.M = parity_sublattice_basis(Lambda, res.spec);
  std::int64_t inside = count(K, res.M, ec);
  if (inside != 1) {
    std::ostringstream os;
    os << "sublattice keeps " << inside - 1 << " nonzero points of K";
    throw Error("GreedyStuck", os.str());
  }
  return res;
}

DensifyResult rogers_densify(const CenteredBody& K, const LatticeBasis& M,
                             double lambda, const PipelineConfig& cfg) {
  const int n = M.dim();
  EnumConfig ec = cfg.enumeration;
  ec.engine = cfg.engine;
  const int bound =
      static_cast<int>(std::ceil(n * std::log(4 * cfg.c0) / std::log(3.0))) + 8;
  DensifyResult out{M, 0, {}};
  for (bool again = true; again;) {
    again = false;
    CosetStream cs(out.basis, 3);
    Vec c;
    IVec digits;
    while (cs.next(c, digits)) {
      if (digits.isZero()) continue;
      if (!is_far(K, out.basis, c, lambda * (1 + kFarSlack), ec)) continue;
      if (out.adjoins >= bound) {
        std::ostringstream os;
        os << "more than " << bound << " adjoins";
        throw Error("IterationOverflow", os.str());
      }
      out.basis = adjoin(out.basis, c);
      out.adjoined.push_back(c);
      ++out.adjoins;
      again = true;
      break;
    }
  }
  return out;
}

CoveringLattice thin_lattice_symmetric(BodyPtr K, const PipelineConfig& cfg,
                                       std::optional<double> vol_ref,
                                       const EllipsoidProvider& provider) {
  if (!K->symmetric())
    throw Error("BadDescriptor", "symmetric pipeline needs a symmetric body");
  if (K->center().norm() > 0) K = make_translated(K, -K->center());
  const int n = K->dim();
  EnumConfig ec = cfg.enumeration;
  ec.engine = cfg.engine;

  CoveringLattice out{LatticeBasis(Mat::Identity(n, n))};
  out.body_ref = K->kind();
  out.provider = cfg.provider_id;
  out.c0 = cfg.c0;
  out.tol = ec.tol;

  EllipsoidProvider prov = provider ? provider : gls_provider(cfg.engine);
  Mat A;
  try {
    A = prov(*K);
  } catch (const Error& e) {
    throw Error("ProviderFailure", e.what());
  }
  LatticeBasis L0 = m_lattice_from_ellipsoid(A, cfg.c0);
  out.index_trace.push_back({"m_lattice", 1, "base", 1.0});

  PackingResult pk = packing_lattice(*K, L0, cfg);
  out.packing_N = pk.N;
  out.sparsifier = pk.spec;
  out.index_trace.push_back(
      {"sparsify", pk.spec.p, "sub", static_cast<double>(pk.spec.p)});

  // Minkowski: lambda_1 <= 2 (det M / vol K)^{1/n} and vol K >= vol E(A).
  double vol_e = unit_ball_volume(n) / std::sqrt(A.determinant());
  double s = 2 * std::pow(pk.M.det_abs() / vol_e, 1.0 / n) * 1.01;
  Lambda1Result l1{};
  for (int tries = 0;; ++tries) {
    try {
      l1 = lambda1(*K, pk.M, s, ec);
      break;
    } catch (const Error& e) {
      if (e.name() != "NoNonzeroPoint" || tries >= 8) throw;
      s *= 2;
    }
  }
  const double lambda = l1.lambda;
  if (vol_ref)
    out.initial_packing_density =
        std::pow(lambda / 2, n) * *vol_ref / pk.M.det_abs();

  DensifyResult dr = rogers_densify(*K, pk.M, lambda, cfg);
  out.adjoins = dr.adjoins;
  for (int i = 0; i < dr.adjoins; ++i)
    out.index_trace.push_back({"adjoin", 3, "super", 1.0 / 3.0});

  // The densified lattice has no coset at distance >= lambda (1 + kFarSlack),
  // so this scaling makes it K-covering.
  double scale = 2.0 / (3.0 * lambda * (1 + kFarSlack));
  out.basis = dr.basis.scaled(scale);
  out.index_trace.push_back({"scale", 1, "scale", std::pow(scale, n)});

  CoveringBracket cb =
      covering_radius_bracket(*K, out.basis, cfg.bracket_p, ec, cfg.bracket_rel_tol);
  out.mu_bracket = {cb.lower, cb.upper};
  Lambda1Result lf = lambda1(*K, out.basis, 1.0, ec);
  out.lambda1_bracket = {lf.lambda * (1 - ec.tol), lf.lambda * (1 + ec.tol)};

  EnumerationReport rep;
  count_with_basis(*K, out.basis, ec, &rep);
  out.se_node_counts = rep.level_node_counts;
  if (vol_ref) out.thinness = *vol_ref / out.basis.det_abs();
  return out;
}

GeneralCovering thin_lattice_general(BodyPtr K, const PipelineConfig& cfg) {
  GeneralCovering g{CoveringLattice{LatticeBasis(Mat::Identity(K->dim(), K->dim()))},
                    K->center(), nullptr};
  if (K->symmetric()) {
    g.symmetrized = K->center().norm() > 0 ? make_translated(K, -K->center()) : K;
  } else {
    // (1 + 1/6)^{-n} = (6/7)^n
    KBResult kb = kb_point(K, 1.0 / 6.0, cfg);
    g.c = kb.c;
    g.symmetrized = kb_body(K, g.c);
  }
  g.lattice = thin_lattice_symmetric(g.symmetrized, cfg);
  return g;
}

std::int64_t epsilon_net(BodyPtr C, BodyPtr K_cov, const CoveringLattice& L,
                         const PointSink& sink, const EnumConfig& cfg,
                         BodyPtr difference) {
  if (!L.certified())
    throw Error("CertificateMissing", "lattice has no covering certificate");
  BodyPtr D = difference ? difference : make_minkowski(C, -1.0, K_cov);
  EnumerationReport rep = enumerate(*D, L.basis.lll_reduced(), sink, cfg);
  return rep.points_emitted;
}

}  // namespace thinlat

#include "thinlat/enumeration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace thinlat {

namespace {

struct StopEnumeration {};

class Enumerator {
 public:
  Enumerator(const CenteredBody& K, const LatticeBasis& L, const PointSink* sink,
             const EnumConfig& cfg)
      : K_(K), L_(L), sink_(sink), cfg_(cfg), n_(L.dim()) {
    if (K.dim() != n_) throw Error("BadDescriptor", "body/lattice dimension mismatch");
    delta_ = 0.5 * cfg.tol * K.inner_radius();
    rep_.level_node_counts.assign(n_, 0);
    rep_.tolerance_used = cfg.tol;
    exact_ = K.line_range(K.center(), L.B().col(0), 0.0).has_value();
    zint_ = IVec::Zero(n_);
  }

  EnumerationReport run() {
    Vec z = L_.coords(K_.center());
    try {
      descend(n_ - 1, z, Vec::Zero(n_));
    } catch (const StopEnumeration&) {
      rep_.stopped_early = true;
    }
    return rep_;
  }

 private:
  void tick() {
    if (++nodes_ > cfg_.node_budget) {
      std::ostringstream os;
      os << "node budget " << cfg_.node_budget << " exhausted";
      throw Error("BudgetExceeded", os.str());
    }
  }

  // Leaf level: integer range for coefficient 0 along the line tail + s b_0.
  void leaf(const Vec& tail, double z0, const Interval* known) {
    const Vec b0 = L_.B().col(0);
    const int lvl = n_ - 1;
    double start = std::floor(z0);
    if (known || exact_) {
      Interval I = known ? *known : *K_.line_range(tail, b0, delta_);
      if (I.empty()) return;
      double lo = std::ceil(I.lo - 1e-12 * (1 + std::abs(I.lo)));
      double hi = std::floor(I.hi + 1e-12 * (1 + std::abs(I.hi)));
      if (lo > hi) return;
      if (!sink_) {
        auto cnt = static_cast<std::int64_t>(hi - lo + 1);
        rep_.level_node_counts[lvl] += cnt;
        rep_.points_emitted += cnt;
        nodes_ += cnt;
        if (nodes_ > cfg_.node_budget) throw Error("BudgetExceeded", "node budget exhausted");
        return;
      }
      for (double c = std::min(hi, start); c >= lo; c -= 1) emit(tail, c);
      for (double c = std::max(lo, start + 1); c <= hi; c += 1) emit(tail, c);
      return;
    }
    for (double c = start;; c -= 1) {
      if (!K_.contains(tail + c * b0, delta_)) break;
      emit(tail, c);
    }
    for (double c = start + 1;; c += 1) {
      if (!K_.contains(tail + c * b0, delta_)) break;
      emit(tail, c);
    }
  }

  void emit(const Vec& tail, double c) {
    tick();
    rep_.level_node_counts[n_ - 1]++;
    rep_.points_emitted++;
    zint_(0) = static_cast<std::int64_t>(c);
    if (sink_) {
      Vec x = tail + c * L_.B().col(0);
      if (!(*sink_)(x, zint_)) throw StopEnumeration{};
    }
  }

  // Chooses coefficient k given integral coefficients above k in `tail`.
  void descend(int k, const Vec& z, const Vec& tail) {
    if (k == 0) {
      leaf(tail, z(0), nullptr);
      return;
    }
    const Vec bk = L_.B().col(k);
    const int lvl = n_ - 1 - k;
    double start = std::floor(z(k));
    auto try_c = [&](double c) {
      tick();
      Vec base = tail + c * bk;
      if (k == 1 && exact_) {
        Interval I = *K_.line_range(base, L_.B().col(0), delta_);
        if (I.empty()) return false;
        rep_.level_node_counts[lvl]++;
        zint_(1) = static_cast<std::int64_t>(c);
        double w0 = std::min(std::max(z(0), I.lo), I.hi);
        leaf(base, w0, &I);
        return true;
      }
      rep_.fiber_solves++;
      FiberResult fr;
      try {
        fr = fiber_distance(K_, base, L_.B().leftCols(k), delta_, cfg_.engine);
      } catch (const Error& e) {
        std::ostringstream os;
        os << e.what() << " at level " << lvl << ", coefficient " << c;
        throw Error("FiberSolveFailure", os.str());
      }
      if (!fr.feasible) return false;
      rep_.level_node_counts[lvl]++;
      zint_(k) = static_cast<std::int64_t>(c);
      Vec zn = z;
      zn.head(k) = fr.w;
      zn(k) = c;
      descend(k - 1, zn, base);
      return true;
    };
    for (double c = start;; c -= 1)
      if (!try_c(c)) break;
    for (double c = start + 1;; c += 1)
      if (!try_c(c)) break;
  }

  const CenteredBody& K_;
  const LatticeBasis& L_;
  const PointSink* sink_;
  EnumConfig cfg_;
  int n_;
  double delta_;
  bool exact_;
  std::int64_t nodes_ = 0;
  IVec zint_;
  EnumerationReport rep_;
};

bool is_far_raw(const CenteredBody& K, const LatticeBasis& L, const Vec& x,
                double lambda, const EnumConfig& cfg) {
  BodyPtr shell = make_translated(
      make_scaled(BodyPtr(&K, [](const CenteredBody*) {}), lambda), x);
  bool found = false;
  PointSink sink = [&](const Vec&, const IVec&) {
    found = true;
    return false;
  };
  enumerate(*shell, L, sink, cfg);
  return !found;
}

}  // namespace

EnumerationReport enumerate(const CenteredBody& K, const LatticeBasis& L,
                            const PointSink& sink, const EnumConfig& cfg) {
  Enumerator e(K, L, &sink, cfg);
  return e.run();
}

std::int64_t count_with_basis(const CenteredBody& K, const LatticeBasis& L,
                              const EnumConfig& cfg, EnumerationReport* report) {
  Enumerator e(K, L, nullptr, cfg);
  EnumerationReport r = e.run();
  if (report) *report = r;
  return r.points_emitted;
}

std::int64_t count(const CenteredBody& K, const LatticeBasis& L,
                   const EnumConfig& cfg, EnumerationReport* report) {
  return count_with_basis(K, L.lll_reduced(), cfg, report);
}

Lambda1Result lambda1(const CenteredBody& K, const LatticeBasis& L, double s,
                      const EnumConfig& cfg) {
  BodyPtr sK = make_scaled(BodyPtr(&K, [](const CenteredBody*) {}), s);
  LatticeBasis R = L.lll_reduced();
  Lambda1Result best{std::numeric_limits<double>::infinity(), Vec()};
  double zero_cut = 1e-12 * K.inner_radius();
  PointSink sink = [&](const Vec& x, const IVec&) {
    if (x.norm() <= zero_cut) return true;
    double g = gauge(K, x);
    if (g < best.lambda) {
      best.lambda = g;
      best.witness = x;
    }
    return true;
  };
  enumerate(*sK, R, sink, cfg);
  if (best.witness.size() == 0)
    throw Error("NoNonzeroPoint", "search radius holds no nonzero lattice point");
  return best;
}

bool is_far(const CenteredBody& K, const LatticeBasis& L, const Vec& x,
            double lambda, const EnumConfig& cfg) {
  return is_far_raw(K, L.lll_reduced(), x, lambda, cfg);
}

CoveringBracket covering_radius_bracket(const CenteredBody& K,
                                        const LatticeBasis& L, int p,
                                        const EnumConfig& cfg, double rel_tol) {
  if (p < 2) throw Error("BadDescriptor", "p must be at least 2");
  LatticeBasis R = L.lll_reduced();
  CosetStream cs = mod_p_cosets(L, p);
  Vec c;
  IVec digits;
  double m_lo = 0, m_hi = 0;
  while (cs.next(c, digits)) {
    if (digits.cwiseAbs().maxCoeff() == 0) continue;
    double lo = 0;
    if (m_lo > 0) {
      if (!is_far_raw(K, R, c, m_lo, cfg)) continue;
      lo = m_lo;
    }
    double hi = gauge(K, c);
    if (hi <= lo) hi = 2 * lo;
    while (hi - lo > rel_tol * hi) {
      double mid = 0.5 * (lo + hi);
      if (is_far_raw(K, R, c, mid, cfg))
        lo = mid;
      else
        hi = mid;
    }
    m_lo = std::max(m_lo, lo);
    m_hi = std::max(m_hi, hi * (1 + cfg.tol));
  }
  m_hi = std::max(m_hi, m_lo);
  return CoveringBracket{m_lo, m_hi * p / (p - 1.0), m_lo, m_hi};
}

}  // namespace thinlat

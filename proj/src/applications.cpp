#include "thinlat/volume.hpp"

#include <cmath>

namespace thinlat {

OperatorNormResult operator_norm(const Mat& T, BodyPtr BX, BodyPtr BY, double eps,
                                 const PipelineConfig& cfg) {
  if (!(eps > 0 && eps <= 1)) throw ValidationError("eps", "must lie in (0, 1]");
  if (T.cols() != BX->dim() || T.rows() != BY->dim())
    throw ValidationError("T", "shape does not match the two bodies");
  if (!BX->symmetric() || BX->center().norm() > 1e-12)
    throw Error("BadDescriptor", "domain ball must be symmetric about 0");
  if (!BY->symmetric() || BY->center().norm() > 1e-12)
    throw Error("BadDescriptor", "target ball must be symmetric about 0");
  EnumConfig ec = cfg.enumeration;
  ec.engine = cfg.engine;

  // Net of BX by delta BX. With y the net point closest to a maximizer,
  // ||Ty||/||y|| >= ||T|| (1-delta)/(1+delta) = ||T|| (1 - eps/2).
  const double delta = eps / (4 - eps);
  CoveringLattice cov = thin_lattice_symmetric(BX, cfg).scaled(delta);
  OperatorNormResult res{0.0, {0.0, 0.0}, 0};
  PointSink sink = [&](const Vec& y, const IVec& z) {
    if (z.isZero()) return true;
    double gx = gauge(*BX, y);
    if (gx > 0) res.V = std::max(res.V, gauge(*BY, T * y) / gx);
    return true;
  };
  res.net_points = epsilon_net(BX, make_scaled(BX, delta), cov, sink, ec,
                               make_scaled(BX, 1 + delta));
  res.bracket = {res.V, res.V / (1 - eps / 2)};
  return res;
}

PolyApprox polyhedral_approx(BodyPtr K, double eps, const PipelineConfig& cfg) {
  if (!(eps > 0 && eps <= 1)) throw ValidationError("eps", "must lie in (0, 1]");
  if (!K->symmetric()) throw Error("BadDescriptor", "body must be symmetric");
  const int n = K->dim();
  const Vec center = K->center();
  BodyPtr K0 = center.norm() > 0 ? make_translated(K, -center) : K;
  EnumConfig ec = cfg.enumeration;
  ec.engine = cfg.engine;

  // A net of (1-e/2)K° by (e/2)K° gives K in P in K/(1-e); e = eps/(1+eps)
  // turns that into (1+eps)K.
  const double e = eps / (1 + eps);
  auto polar = std::static_pointer_cast<const PolarBody>(make_polar(K0));
  CoveringLattice cov = thin_lattice_symmetric(polar, cfg).scaled(e / 2);

  std::vector<Vec> rows;
  PointSink sink = [&](const Vec& a, const IVec& z) {
    // one of each +-pair: first nonzero coefficient positive
    int k = 0;
    while (k < z.size() && z(k) == 0) ++k;
    if (k == z.size() || z(k) < 0) return true;
    double h = polar->h(a);
    if (h > 0) rows.push_back(a / h);
    return true;
  };
  std::int64_t pts = epsilon_net(make_scaled(polar, 1 - e / 2), make_scaled(polar, e / 2),
                                 cov, sink, ec, polar);
  if (rows.empty()) throw Error("NetEmpty", "polar net has no nonzero point");

  const int m = static_cast<int>(rows.size());
  PolyApprox out;
  out.A.resize(2 * m, n);
  out.b.resize(2 * m);
  for (int i = 0; i < m; ++i) {
    out.A.row(2 * i) = rows[i].transpose();
    out.A.row(2 * i + 1) = -rows[i].transpose();
    double shift = rows[i].dot(center);
    out.b(2 * i) = 1 + shift;
    out.b(2 * i + 1) = 1 - shift;
  }
  out.facets = 2 * m;
  out.net_points = pts;
  out.P = make_polytope(out.A, out.b);
  return out;
}

}  // namespace thinlat

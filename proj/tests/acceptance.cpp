// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <thinlat-cli> <tests/data dir>

#include "helpers.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace thinlat;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  int failures = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (++failures <= 3) detail << " [" << what << "]";
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Mat random_basis(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> U(-1, 1);
  Mat B(n, n);
  do {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = scale * (U(rng) + (i == j ? 1.5 : 0));
  } while (std::abs(B.determinant()) < 0.3 * std::pow(scale, n));
  return B;
}

// Random symmetric 3-d polytope with its exact volume.
BodyPtr random_symmetric_3d(std::mt19937& rng, double& vol) {
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(0.7, 1.3);
  int m = 4 + static_cast<int>(rng() % 3);
  Mat A(2 * m + 6, 3);
  Vec b(2 * m + 6);
  for (int i = 0; i < m; ++i) {
    Vec a(3);
    a << N(rng), N(rng), N(rng);
    a.normalize();
    double h = U(rng);
    A.row(2 * i) = a.transpose();
    A.row(2 * i + 1) = -a.transpose();
    b(2 * i) = b(2 * i + 1) = h;
  }
  for (int j = 0; j < 3; ++j) {
    A.row(2 * m + 2 * j) = Vec::Unit(3, j).transpose();
    A.row(2 * m + 2 * j + 1) = -Vec::Unit(3, j).transpose();
    b(2 * m + 2 * j) = b(2 * m + 2 * j + 1) = 1.5;
  }
  vol = refcheck::polytope_volume_3d(A, b);
  return make_polytope(A, b);
}

BodyPtr random_enum_body(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> U(-1, 1);
  if (rng() % 2 == 0) {
    Mat M = random_basis(rng, n, 1.0);
    Vec t(n);
    for (int i = 0; i < n; ++i) t(i) = U(rng);
    return make_ellipsoid((M * M.transpose()).inverse() / 4, t);
  }
  if (n == 2) return th::polygon_body(refcheck::scale(th::random_polygon(rng, false), 2));
  double vol = 0;
  return make_translated(random_symmetric_3d(rng, vol), (Vec(3) << U(rng), U(rng), U(rng)).finished());
}

using Key = std::vector<long long>;

Key key_of(const Vec& x) {
  Key k;
  for (Eigen::Index i = 0; i < x.size(); ++i) k.push_back(std::llround(x(i) * 1e6));
  return k;
}

Vec from_key(const Key& k) {
  Vec x(static_cast<Eigen::Index>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) x(static_cast<Eigen::Index>(i)) = k[i] * 1e-6;
  return x;
}

// 1. enumerate equals the coefficient-box scan off the tolerance band
void enumeration_ground_truth(Outcome& o) {
  std::mt19937 rng(2024);
  const double tol = EnumConfig{}.tol;
  auto t0 = Clock::now();
  double enum_time = 0;
  int instances = 0, points = 0;
  for (int it = 0; it < 25; ++it) {
    int n = 2 + it % 2;
    BodyPtr K = random_enum_body(rng, n);
    LatticeBasis L(random_basis(rng, n, 0.35));
    auto ref = refcheck::coeff_box_scan(th::membership(K), L.B(), K->center(), K->outer_radius());
    std::set<Key> want, got;
    for (const auto& x : ref) want.insert(key_of(x));
    auto te = Clock::now();
    enumerate(*K, L, [&](const Vec& x, const IVec&) {
      got.insert(key_of(x));
      return true;
    });
    enum_time += seconds_since(te);
    for (const auto& k : want)
      if (!got.count(k)) o.expect(gauge(*K, from_key(k)) > 1 - tol, "missed interior point");
    for (const auto& k : got)
      if (!want.count(k)) o.expect(gauge(*K, from_key(k)) <= 1 + tol, "extra exterior point");
    ++instances;
    points += static_cast<int>(got.size());
  }
  o.expect(enum_time < 5.0, "enumeration time");
  o.detail << " instances=" << instances << " points=" << points << " enumerate_s=" << enum_time
           << " total_s=" << seconds_since(t0);
}

// 2. covering radius brackets of Z^2 against the unit square
void covering_certification(Outcome& o) {
  BodyPtr sq = th::square();
  LatticeBasis Z(Mat::Identity(2, 2));
  CoveringBracket b2 = covering_radius_bracket(*sq, Z, 2);
  CoveringBracket b3 = covering_radius_bracket(*sq, Z, 3);
  o.expect(std::abs(b2.lower - 0.5) <= 1e-6 && std::abs(b2.upper - 1.0) <= 1e-6, "p=2");
  o.expect(std::abs(b3.lower - 1.0 / 3) <= 1e-6 && std::abs(b3.upper - 0.5) <= 1e-6, "p=3");
  o.expect(b2.lower <= 0.5 && 0.5 <= b2.upper && b3.lower <= 0.5 && 0.5 <= b3.upper, "mu inside");
  char buf[160];
  std::snprintf(buf, sizeof buf, " p=2 (%.9f, %.9f) p=3 (%.9f, %.9f)", b2.lower, b2.upper,
                b3.lower, b3.upper);
  o.detail << buf;
}

// 3. symmetric pipeline certificates
void symmetric_pipeline(Outcome& o) {
  std::mt19937 rng(77);
  double worst_ratio = 1e300, worst_mu = 0, worst_thin = 0, worst_time = 0;
  for (int it = 0; it < 25; ++it) {
    int n = it < 20 ? 2 : 3;
    double vol = 0;
    BodyPtr K;
    if (n == 2) {
      refcheck::Polygon P = th::random_polygon(rng, true);
      vol = refcheck::exact_area(P);
      K = th::polygon_body(P);
    } else {
      K = random_symmetric_3d(rng, vol);
    }
    auto t0 = Clock::now();
    CoveringLattice c = thin_lattice_symmetric(K, {}, vol);
    double secs = seconds_since(t0);
    double ratio = c.lambda1_bracket.first / (2 * c.mu_bracket.second);
    double thin = vol / c.basis.det_abs() / std::pow(3.0, n);
    o.expect(c.mu_bracket.second <= 1 + 1e-3, "mu upper");
    o.expect(ratio >= 1.0 / 3 - 1e-3, "packing/covering ratio");
    o.expect(thin <= 1 + 1e-2, "thinness");
    o.expect(secs < 10, "time");
    worst_ratio = std::min(worst_ratio, ratio);
    worst_mu = std::max(worst_mu, c.mu_bracket.second);
    worst_thin = std::max(worst_thin, thin);
    worst_time = std::max(worst_time, secs);
  }
  o.detail << " max_mu_upper=" << worst_mu << " min_ratio=" << worst_ratio
           << " max_thinness/3^n=" << worst_thin << " max_s=" << worst_time;
}

// 4. sparsifier output avoids K, has index p, and agrees with exhaustive search
void sparsifier(Outcome& o) {
  auto avoids = [](const CenteredBody& K, const LatticeBasis& M) { return count(K, M) == 1; };
  auto check_exhaustive = [&](const CenteredBody& K, const LatticeBasis& L, const PackingResult& r) {
    const std::int64_t p = r.spec.p;
    int feasible = 0;
    bool greedy_in = false;
    for (std::int64_t a0 = 0; a0 < p; ++a0)
      for (std::int64_t a1 = 0; a1 < p; ++a1) {
        if (a0 == 0 && a1 == 0) continue;
        IVec a(2);
        a << a0, a1;
        if (!avoids(K, parity_sublattice_basis(L, {a, p}))) continue;
        ++feasible;
        greedy_in = greedy_in || a == r.spec.a;
      }
    o.expect(feasible > 0 && greedy_in, "exhaustive search");
  };

  BodyPtr box = th::square(1.5);
  LatticeBasis Z(Mat::Identity(2, 2));
  PackingResult w = packing_lattice(*box, Z);
  o.expect(w.N == 8 && w.spec.p == 11, "N=8, p=11");
  o.expect(w.spec.a(0) == 1 && w.spec.a(1) == 2, "a=(1,2)");
  o.expect(avoids(*box, w.M), "worked instance avoids K");
  o.expect(std::abs(w.M.det_abs() / Z.det_abs() - 11) < 1e-9, "worked index");
  check_exhaustive(*box, Z, w);

  std::mt19937 rng(31);
  int n2 = 0;
  for (int it = 0; it < 10; ++it) {
    int n = it < 7 ? 2 : 3;
    BodyPtr K = n == 2 ? th::polygon_body(th::random_polygon(rng, true))
                       : make_lpball(3, 1 + it % 3, 1.0);
    LatticeBasis L(random_basis(rng, n, n == 2 ? 0.3 : 0.4));
    PackingResult r = packing_lattice(*K, L);
    o.expect(avoids(*K, r.M), "random instance avoids K");
    o.expect(std::abs(r.M.det_abs() / L.det_abs() - double(r.spec.p)) < 1e-9 * r.spec.p,
             "random index");
    if (n == 2) {
      check_exhaustive(*K, L, r);
      ++n2;
    }
  }
  o.detail << " worked a=(" << w.spec.a(0) << "," << w.spec.a(1) << ") random=10 exhaustive_2d="
           << n2 + 1;
}

// 5. densification keeps lambda1 and divides det by 3 per adjoin
void densification(Outcome& o) {
  std::mt19937 rng(53);
  int total_adjoins = 0, max_bound = 0;
  for (int it = 0; it < 20; ++it) {
    refcheck::Polygon P = th::random_polygon(rng, true);
    BodyPtr K = th::polygon_body(P);
    LatticeBasis L(random_basis(rng, 2, 0.3));
    PackingResult pk = packing_lattice(*K, L);
    double lam = lambda1(*K, pk.M, 8.0).lambda;
    DensifyResult d = rogers_densify(*K, pk.M, lam);
    double after = lambda1(*K, d.basis, 8.0).lambda;
    o.expect(std::abs(after - lam) <= 1e-6 * lam, "lambda1 changed");
    o.expect(std::abs(pk.M.det_abs() / d.basis.det_abs() / std::pow(3.0, d.adjoins) - 1) < 1e-9,
             "det ratio");
    double alpha0 = std::pow(lam / 2, 2) * refcheck::exact_area(P) / pk.M.det_abs();
    int bound = static_cast<int>(std::floor(std::log(1 / alpha0) / std::log(3.0) + 1e-9));
    o.expect(d.adjoins <= bound, "adjoin count");
    total_adjoins += d.adjoins;
    max_bound = std::max(max_bound, bound);
  }
  o.detail << " instances=20 adjoins=" << total_adjoins << " max_log3_bound=" << max_bound;
}

// 6. volume estimates land in [vol, (1+eps)^2 vol]
void volume_estimator(Outcome& o) {
  struct Case {
    const char* name;
    BodyPtr K;
    double area;
  };
  std::vector<Case> cases = {{"square", th::square(), 4.0},
                             {"triangle", th::polygon_body(th::triangle01()), 0.5}};
  for (const auto& c : cases)
    for (double eps : {1.0, 0.5, 0.25}) {
      auto t0 = Clock::now();
      VolumeEstimate v = estimate_volume(c.K, eps);
      double secs = seconds_since(t0);
      bool in = v.V >= c.area && v.V <= std::pow(1 + eps, 2) * c.area;
      o.expect(in, std::string(c.name) + " interval");
      if (eps == 0.25) o.expect(secs < 30, std::string(c.name) + " time");
      char buf[96];
      std::snprintf(buf, sizeof buf, " %s@%.2f=%.4f(%.2fs)", c.name, eps, v.V, secs);
      o.detail << buf;
    }
}

// 7. approximate KB points
void kb_points(Outcome& o) {
  std::mt19937 rng(97);
  const double eps = 0.5, f = 1 / ((1 + eps) * (1 + eps));
  double worst_sym = 1e300, worst_asym = 1e300;
  for (int it = 0; it < 10; ++it) {
    refcheck::Polygon P = refcheck::translate(th::random_polygon(rng, true),
                                              {std::uniform_real_distribution<double>(-2, 2)(rng), 1.0});
    KBResult r = kb_point(th::polygon_body(P), eps);
    double nu2 = refcheck::kb_ratio(P, {r.c(0), r.c(1)});
    o.expect(nu2 >= f - 1e-3, "symmetric polygon");
    worst_sym = std::min(worst_sym, nu2 - f);
  }
  for (int it = 0; it < 10; ++it) {
    refcheck::Polygon P = th::random_polygon(rng, false);
    KBResult r = kb_point(th::polygon_body(P), eps);
    double got = refcheck::kb_ratio(P, {r.c(0), r.c(1)});
    double best = refcheck::brute_kb(P, 0.01).value;
    o.expect(got >= f * best - 1e-3, "asymmetric polygon");
    worst_asym = std::min(worst_asym, got / best);
  }
  o.detail << " min_sym_margin=" << worst_sym << " min_asym_ratio_to_grid=" << worst_asym
           << " (need >= " << f << ")";
}

// 8. square-root area of K[c] is concave in c
void concavity(Outcome& o) {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> U(0, 1);
  auto root_area = [](const refcheck::Polygon& P, const refcheck::P2& c) {
    refcheck::Polygon s = refcheck::translate(P, -c);
    refcheck::Polygon k = refcheck::clip(s, refcheck::negate(s));
    return k.size() >= 3 ? std::sqrt(std::max(0.0, refcheck::signed_area(k))) : 0.0;
  };
  auto point_in = [&](const refcheck::Polygon& P) {
    std::vector<double> w(P.size());
    double tot = 0;
    for (auto& x : w) tot += (x = -std::log(U(rng) + 1e-300));
    refcheck::P2 p(0, 0);
    for (std::size_t i = 0; i < P.size(); ++i) p += w[i] / tot * P[i];
    return p;
  };
  double worst = 1e300;
  for (int it = 0; it < 1000; ++it) {
    refcheck::Polygon P = th::random_polygon(rng, false);
    refcheck::P2 x = point_in(P), y = point_in(P);
    double gap = root_area(P, 0.5 * (x + y)) - 0.5 * (root_area(P, x) + root_area(P, y));
    o.expect(gap >= -1e-9, "midpoint inequality");
    worst = std::min(worst, gap);
  }
  o.detail << " triples=1000 min_gap=" << worst;
}

// 9. net sizes against 4^n t(n) times the brute-force covering number
void net_sizes(Outcome& o) {
  const double factor = 16 * 9;
  // cube against cube: (C - K) cap Z^2 = [-1,1]^2 cap Z^2
  Mat A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  BodyPtr unit = make_polytope(A, (Vec(4) << 1, 0, 1, 0).finished());
  LatticeBasis Z(Mat::Identity(2, 2));
  CoveringLattice zc(Z);
  CoveringBracket zb = covering_radius_bracket(*th::square(0.5), Z, 3);
  zc.mu_bracket = {zb.lower, zb.upper};
  std::int64_t cube = epsilon_net(unit, unit, zc, [](const Vec&, const IVec&) { return true; });
  o.expect(cube == 9, "cube-vs-cube count");
  o.expect(cube >= 4, "cube-vs-cube lower bound");
  o.detail << " cube=" << cube;

  auto run = [&](const char* name, BodyPtr C, const refcheck::Polygon& Cp, BodyPtr Ksym,
                 const refcheck::Polygon& Kp, double eps, BodyPtr diff) {
    CoveringLattice L = thin_lattice_symmetric(Ksym).scaled(eps);
    std::int64_t n = epsilon_net(C, make_scaled(Ksym, eps), L,
                                 [](const Vec&, const IVec&) { return true; }, {}, diff);
    refcheck::Polygon Ke = refcheck::scale(Kp, eps);
    // a quarter of the inradius of eps K about its centroid
    refcheck::P2 kc = refcheck::centroid(Ke);
    double inr = 1e300;
    for (std::size_t i = 0; i < Ke.size(); ++i) {
      refcheck::P2 e = Ke[(i + 1) % Ke.size()] - Ke[i];
      inr = std::min(inr, (e.x() * (kc - Ke[i]).y() - e.y() * (kc - Ke[i]).x()) / e.norm());
    }
    double step = inr / 4;
    refcheck::CoverBounds cb = refcheck::brute_covering_number(Cp, Ke, step);
    o.expect(n <= factor * cb.upper, name);
    o.detail << " " << name << "@" << eps << "=" << n << "/" << cb.upper;
  };
  const int m = 64;
  for (double eps : {1.0, 0.5})
    run("disk3", make_ball(2, 3), th::regular(m, 3 / std::cos(M_PI / m)), make_ball(2),
        th::regular(m, 1.0), eps, make_ball(2, 3 + eps));
  std::mt19937 rng(131);
  for (int it = 0; it < 3; ++it) {
    refcheck::Polygon Cp = refcheck::scale(th::random_polygon(rng, false), 2);
    refcheck::Polygon Kp = th::random_polygon(rng, true);
    run("poly", th::polygon_body(Cp), Cp, th::polygon_body(Kp), Kp, 0.5, nullptr);
  }
}

// 10. every CLI command twice: byte-identical reports and point streams
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void determinism(Outcome& o, const std::string& cli, const std::string& data) {
  if (cli.empty() || data.empty()) {
    o.expect(false, "usage: acceptance <cli> <data-dir>");
    return;
  }
  const std::string tmp = "acceptance_tmp";
  std::filesystem::create_directories(tmp);
  std::vector<std::pair<std::string, std::string>> cmds = {
      {"net", "net --body " + data + "/triangle.json --eps 0.5"},
      {"net-cover", "net --body " + data + "/disk.json --cover " + data + "/square.json --eps 0.5"},
      {"volume", "volume --body " + data + "/triangle.json --eps 0.5"},
      {"kb-point", "kb-point --body " + data + "/triangle.json --eps 0.5"},
      {"thin-lattice", "thin-lattice --body " + data + "/disk.json"},
      {"covering-radius", "covering-radius --body " + data + "/linf.json --lattice " + data +
                              "/z2.json --p 3"},
      {"opnorm", "opnorm --body " + data + "/square.json --matrix " + data + "/diag.json --eps 0.5"},
      {"polyapprox", "polyapprox --body " + data + "/disk.json --eps 0.5"},
  };
  int compared = 0;
  for (const auto& [name, args] : cmds) {
    std::string outs[2], pts[2];
    for (int k = 0; k < 2; ++k) {
      std::string rep = tmp + "/" + name + "." + std::to_string(k) + ".json";
      std::string pf = tmp + "/" + name + "." + std::to_string(k) + ".pts";
      std::string cmd = "\"" + cli + "\" " + args + " --out " + rep;
      if (name.rfind("net", 0) == 0) cmd += " --points-out " + pf;
      int rc = std::system(cmd.c_str());  // NOLINT
      o.expect(rc == 0, name + " exit code");
      outs[k] = slurp(rep);
      pts[k] = slurp(pf);
    }
    o.expect(!outs[0].empty() && outs[0] == outs[1], name + " report");
    o.expect(pts[0] == pts[1], name + " points");
    if (name.rfind("net", 0) == 0) o.expect(!pts[0].empty(), name + " empty point stream");
    ++compared;
  }
  o.detail << " commands=" << compared;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "", data = argc > 2 ? argv[2] : "";
  struct Item {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  std::vector<Item> items = {
      {"enumeration ground truth", enumeration_ground_truth},
      {"covering certification", covering_certification},
      {"symmetric pipeline", symmetric_pipeline},
      {"sparsifier correctness", sparsifier},
      {"densification invariant", densification},
      {"volume estimator", volume_estimator},
      {"KB point", kb_points},
      {"concavity", concavity},
      {"net size bound", net_sizes},
      {"determinism", [&](Outcome& o) { determinism(o, cli, data); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      items[i].run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    char head[96];
    std::snprintf(head, sizeof head, "%s %2zu %s (%.1fs):", o.pass ? "PASS" : "FAIL", i + 1,
                  items[i].name, seconds_since(t0));
    std::printf("%s%s\n", head, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(items.size()) - failed, items.size());
  return failed ? 1 : 0;
}

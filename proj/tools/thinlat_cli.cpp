// thinlat command-line front end. Reports go to stdout (or --out), point
// streams to --points-out, diagnostics to stderr.

#include "thinlat/io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace thinlat;

namespace {

struct Options {
  std::string body, lattice, target, matrix, cover, out, points_out;
  double eps = 0.25;
  int p = 3;
  double c0 = 4.0;
  int threads = 1;
  std::int64_t node_budget = 100000000;
  double tolerance = 1e-9;
  bool timing = false;
};

class PointWriter {
 public:
  explicit PointWriter(const std::string& path) {
    if (path.empty()) return;
    f_ = std::fopen(path.c_str(), "w");
    if (!f_) throw ValidationError("points-out", "cannot open '" + path + "'");
  }
  ~PointWriter() {
    if (f_) std::fclose(f_);
  }
  void write(const Vec& x) {
    if (!f_) return;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      std::fprintf(f_, i ? " %.12f" : "%.12f", x(i) == 0 ? 0.0 : x(i));
    std::fputc('\n', f_);
  }

 private:
  std::FILE* f_ = nullptr;
};

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

BodyPtr load_body(const std::string& file, const std::string& field) {
  if (file.empty()) throw ValidationError(field, "required");
  json j = read_json_file(file, field);
  BodyDescriptor d = parse_body(j, field);
  // a body that does not compile is bad input, not a failed computation
  try {
    return compile(d);
  } catch (const Error& e) {
    throw ValidationError(field, e.what());
  }
}

PipelineConfig make_config(const Options& o) {
  if (!(o.c0 >= 1)) throw ValidationError("c0", "must be at least 1");
  if (o.threads < 1) throw ValidationError("threads", "must be at least 1");
  if (o.node_budget < 1) throw ValidationError("node-budget", "must be positive");
  if (!(o.tolerance > 0 && o.tolerance < 0.1))
    throw ValidationError("tolerance", "must lie in (0, 0.1)");
  PipelineConfig cfg;
  cfg.c0 = o.c0;
  cfg.threads = o.threads;
  cfg.enumeration.node_budget = o.node_budget;
  cfg.enumeration.tol = o.tolerance;
  return cfg;
}

void check_eps(double eps, double hi) {
  if (!(eps > 0 && eps <= hi)) {
    std::ostringstream os;
    os << "must lie in (0, " << hi << "]";
    throw ValidationError("eps", os.str());
  }
}

json run_volume(const Options& o) {
  check_eps(o.eps, 1.0);
  BodyPtr K = load_body(o.body, "body");
  VolumeEstimate v = estimate_volume(K, o.eps, make_config(o));
  return json{{"V", v.V},
              {"eps", v.eps},
              {"interval", {v.guarantee.first, v.guarantee.second}},
              {"points", v.points_counted},
              {"c", vec_json(v.c)},
              {"lattice", covering_to_json(v.lattice)}};
}

json run_kb(const Options& o) {
  check_eps(o.eps, 1.0);
  BodyPtr K = load_body(o.body, "body");
  KBResult r = kb_point(K, o.eps, make_config(o));
  json calls = json::array();
  for (const auto& c : r.calls)
    calls.push_back({{"J", c.J}, {"eps0", c.eps0}, {"rounds", c.rounds},
                     {"stopped_early", c.stopped_early}});
  return json{{"c", vec_json(r.c)}, {"eps", r.eps}, {"iterations", r.iterations},
              {"improve_calls", calls}};
}

json run_thin(const Options& o) {
  BodyPtr K = load_body(o.body, "body");
  PipelineConfig cfg = make_config(o);
  GeneralCovering g = thin_lattice_general(K, cfg);
  return json{{"c", vec_json(g.c)}, {"symmetric", K->symmetric()},
              {"lattice", covering_to_json(g.lattice)}};
}

json run_covering(const Options& o) {
  BodyPtr K = load_body(o.body, "body");
  if (o.lattice.empty()) throw ValidationError("lattice", "required");
  LatticeBasis L = parse_lattice(read_json_file(o.lattice, "lattice"));
  if (L.dim() != K->dim()) throw ValidationError("lattice", "dimension differs from body");
  if (o.p < 2) throw ValidationError("p", "must be at least 2");
  if (!K->symmetric()) throw ValidationError("body", "must be symmetric");
  if (K->center().norm() > 0) K = make_translated(K, -K->center());
  PipelineConfig cfg = make_config(o);
  CoveringBracket b = covering_radius_bracket(*K, L, o.p, cfg.enumeration);
  return json{{"p", o.p},
              {"bracket", {b.lower, b.upper}},
              {"max_coset_distance", {b.max_coset_distance_lo, b.max_coset_distance_hi}}};
}

json run_net(const Options& o) {
  check_eps(o.eps, 1.0);
  BodyPtr C = load_body(o.body, "body");
  PipelineConfig cfg = make_config(o);
  BodyPtr unit;
  CoveringLattice cov{LatticeBasis(Mat::Identity(C->dim(), C->dim()))};
  if (!o.cover.empty()) {
    unit = load_body(o.cover, "cover");
    if (unit->dim() != C->dim()) throw ValidationError("cover", "dimension differs from body");
    if (!unit->symmetric()) throw ValidationError("cover", "must be symmetric");
    if (unit->center().norm() > 0) unit = make_translated(unit, -unit->center());
    cov = thin_lattice_symmetric(unit, cfg);
  } else {
    GeneralCovering g = thin_lattice_general(C, cfg);
    unit = g.symmetrized;
    cov = g.lattice;
  }
  BodyPtr Kc = make_scaled(unit, o.eps);
  CoveringLattice net_lat = cov.scaled(o.eps);
  PointWriter pw(o.points_out);
  std::int64_t n = epsilon_net(C, Kc, net_lat, [&](const Vec& x, const IVec&) {
    pw.write(x);
    return true;
  }, cfg.enumeration);
  return json{{"eps", o.eps}, {"count", n}, {"lattice", covering_to_json(net_lat)}};
}

json run_opnorm(const Options& o) {
  check_eps(o.eps, 1.0);
  BodyPtr BX = load_body(o.body, "body");
  BodyPtr BY = o.target.empty() ? BX : load_body(o.target, "target");
  if (o.matrix.empty()) throw ValidationError("matrix", "required");
  json mj = read_json_file(o.matrix, "matrix");
  if (!mj.is_object() || !mj.contains("T") || !mj["T"].is_array() || mj["T"].empty())
    throw ValidationError("matrix.T", "expected an array of rows");
  const auto rows = mj["T"].size();
  Mat T;
  for (std::size_t i = 0; i < rows; ++i) {
    const json& r = mj["T"][i];
    if (!r.is_array() || r.empty()) throw ValidationError("matrix.T", "rows must be arrays");
    if (i == 0) T.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(r.size()));
    if (r.size() != static_cast<std::size_t>(T.cols()))
      throw ValidationError("matrix.T", "rows differ in length");
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (!r[k].is_number()) throw ValidationError("matrix.T", "entries must be numbers");
      T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = r[k].get<double>();
    }
  }
  OperatorNormResult r = operator_norm(T, BX, BY, o.eps, make_config(o));
  return json{{"V", r.V}, {"bracket", {r.bracket.first, r.bracket.second}},
              {"net_points", r.net_points}, {"eps", o.eps}};
}

json run_polyapprox(const Options& o) {
  check_eps(o.eps, 1.0);
  BodyPtr K = load_body(o.body, "body");
  PolyApprox pa = polyhedral_approx(K, o.eps, make_config(o));
  BodyDescriptor d;
  d.type = "hpolytope";
  d.A = pa.A;
  d.b = pa.b;
  return json{{"polytope", body_to_json(d)}, {"facets", pa.facets},
              {"net_points", pa.net_points}, {"eps", o.eps}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thin lattice coverings, epsilon-nets and volume estimates"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--body", o.body, "body descriptor JSON file");
    sc->add_option("--c0", o.c0, "M-lattice constant");
    sc->add_option("--threads", o.threads, "worker threads");
    sc->add_option("--node-budget", o.node_budget, "enumeration node cap");
    sc->add_option("--tolerance", o.tolerance, "enumeration gauge band");
    sc->add_option("--out", o.out, "report file (default stdout)");
    sc->add_flag("--timing", o.timing, "include runtime_ms in the report");
  };
  struct Cmd {
    const char* name;
    const char* help;
    json (*fn)(const Options&);
  };
  const Cmd cmds[] = {
      {"net", "stream an epsilon-net of the body", run_net},
      {"volume", "estimate the volume", run_volume},
      {"kb-point", "approximate Kovner-Besicovitch point", run_kb},
      {"thin-lattice", "build a certified thin covering lattice", run_thin},
      {"covering-radius", "bracket the covering radius of a lattice", run_covering},
      {"opnorm", "approximate an operator norm", run_opnorm},
      {"polyapprox", "symmetric polyhedral approximation", run_polyapprox},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const Cmd& c : cmds) {
    CLI::App* sc = app.add_subcommand(c.name, c.help);
    add_common(sc);
    std::string n = c.name;
    if (n != "thin-lattice" && n != "covering-radius")
      sc->add_option("--eps", o.eps, "accuracy parameter");
    if (n == "covering-radius") {
      sc->add_option("--lattice", o.lattice, "lattice basis JSON file");
      sc->add_option("--p", o.p, "coset modulus");
    }
    if (n == "net") {
      sc->add_option("--points-out", o.points_out, "point stream file");
      sc->add_option("--cover", o.cover, "symmetric unit body of the net");
    }
    if (n == "opnorm") {
      sc->add_option("--target", o.target, "unit ball of the target norm");
      sc->add_option("--matrix", o.matrix, "JSON file {\"T\": rows}");
    }
    subs.emplace_back(sc, &c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Cmd* cmd = nullptr;
  for (auto& [sc, c] : subs)
    if (sc->parsed()) cmd = c;

  auto t0 = std::chrono::steady_clock::now();
  json report;
  try {
    report = cmd->fn(o);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.name() == "BadDescriptor" ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: ComputationError: " << e.what() << "\n";
    return 3;
  }
  json full;
  full["schema"] = kSchema;
  full["command"] = cmd->name;
  for (auto& [k, v] : report.items()) full[k] = v;
  if (o.timing)
    full["runtime_ms"] = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  std::string text = full.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "validation error: out: cannot open '" << o.out << "'\n";
      return 2;
    }
    f << text;
  }
  return 0;
}

#include "thinlat/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace thinlat {

namespace {

double parse_number(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
      auto slash = s.find('/');
      std::size_t used = 0;
      if (slash == std::string::npos) {
        double x = std::stod(s, &used);
        if (used == s.size()) return x;
      } else {
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        std::size_t ua = 0, ub = 0;
        double x = std::stod(a, &ua), y = std::stod(b, &ub);
        if (ua == a.size() && ub == b.size() && y != 0) return x / y;
      }
    } catch (const std::exception&) {
    }
    throw ValidationError(path, "not a number: '" + s + "'");
  }
  throw ValidationError(path, "expected a number");
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ValidationError(path + "." + key, "missing");
  return j.at(key);
}

Vec parse_vec(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ValidationError(path, "expected a nonempty array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_number(j[i], path + "[" + std::to_string(i) + "]");
  if (!v.allFinite()) throw ValidationError(path, "entries must be finite");
  return v;
}

// Array of equal-length arrays; rows of the result are the inner arrays.
Mat parse_rows(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ValidationError(path, "expected a nonempty array of arrays");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < j.size(); ++i)
    rows.push_back(parse_vec(j[i], path + "[" + std::to_string(i) + "]"));
  Mat M(static_cast<Eigen::Index>(rows.size()), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw ValidationError(path + "[" + std::to_string(i) + "]", "row length differs");
    M.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return M;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json rows_json(const Mat& M) {
  json a = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) a.push_back(vec_json(M.row(i).transpose()));
  return a;
}

json ivec_json(const IVec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace

BodyDescriptor parse_body(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  BodyDescriptor d;
  const json& t = member(j, "type", path);
  if (!t.is_string()) throw ValidationError(path + ".type", "expected a string");
  d.type = t.get<std::string>();
  auto inner = [&](const char* key) {
    return std::make_shared<BodyDescriptor>(parse_body(member(j, key, path), path + "." + key));
  };
  auto num = [&](const char* key) {
    return parse_number(member(j, key, path), path + "." + key);
  };
  if (d.type == "hpolytope") {
    d.A = parse_rows(member(j, "A", path), path + ".A");
    d.b = parse_vec(member(j, "b", path), path + ".b");
    if (d.b.size() != d.A.rows()) throw ValidationError(path + ".b", "length must equal rows of A");
  } else if (d.type == "ellipsoid") {
    d.A = parse_rows(member(j, "A", path), path + ".A");
    if (d.A.rows() != d.A.cols()) throw ValidationError(path + ".A", "must be square");
    d.t = j.contains("t") ? parse_vec(j["t"], path + ".t") : Vec::Zero(d.A.rows());
    if (d.t.size() != d.A.rows()) throw ValidationError(path + ".t", "dimension mismatch");
  } else if (d.type == "lpball") {
    d.p = num("p");
    d.radius = j.contains("radius") ? num("radius") : 1.0;
    const json& dim = member(j, "dim", path);
    if (!dim.is_number_integer() || dim.get<int>() < 1)
      throw ValidationError(path + ".dim", "expected a positive integer");
    d.dim = dim.get<int>();
    if (!(d.p >= 1)) throw ValidationError(path + ".p", "must be at least 1");
    if (!(d.radius > 0) || std::isinf(d.radius)) throw ValidationError(path + ".radius", "must be positive");
  } else if (d.type == "scale") {
    d.s = num("s");
    if (!(d.s > 0) || std::isinf(d.s)) throw ValidationError(path + ".s", "must be positive");
    d.inner = inner("inner");
  } else if (d.type == "translate") {
    d.t = parse_vec(member(j, "t", path), path + ".t");
    d.inner = inner("inner");
  } else if (d.type == "intersect") {
    d.inner = inner("left");
    d.inner2 = inner("right");
  } else if (d.type == "kbsym") {
    d.t = parse_vec(member(j, "c", path), path + ".c");
    d.inner = inner("inner");
  } else if (d.type == "affine") {
    d.A = parse_rows(member(j, "M", path), path + ".M");
    if (d.A.rows() != d.A.cols()) throw ValidationError(path + ".M", "must be square");
    d.inner = inner("inner");
  } else if (d.type == "minkowski") {
    d.s = j.contains("s") ? num("s") : 1.0;
    if (!std::isfinite(d.s)) throw ValidationError(path + ".s", "must be finite");
    d.inner = inner("inner");
    d.inner2 = inner("inner2");
  } else {
    throw ValidationError(path + ".type", "unknown body type '" + d.type + "'");
  }
  return d;
}

json body_to_json(const BodyDescriptor& d) {
  json j;
  j["type"] = d.type;
  if (d.type == "hpolytope") {
    j["A"] = rows_json(d.A);
    j["b"] = vec_json(d.b);
  } else if (d.type == "ellipsoid") {
    j["A"] = rows_json(d.A);
    j["t"] = vec_json(d.t);
  } else if (d.type == "lpball") {
    if (std::isinf(d.p))
      j["p"] = "inf";
    else
      j["p"] = d.p;
    j["radius"] = d.radius;
    j["dim"] = d.dim;
  } else if (d.type == "scale") {
    j["s"] = d.s;
    j["inner"] = body_to_json(*d.inner);
  } else if (d.type == "translate") {
    j["t"] = vec_json(d.t);
    j["inner"] = body_to_json(*d.inner);
  } else if (d.type == "intersect") {
    j["left"] = body_to_json(*d.inner);
    j["right"] = body_to_json(*d.inner2);
  } else if (d.type == "kbsym") {
    j["c"] = vec_json(d.t);
    j["inner"] = body_to_json(*d.inner);
  } else if (d.type == "affine") {
    j["M"] = rows_json(d.A);
    j["inner"] = body_to_json(*d.inner);
  } else if (d.type == "minkowski") {
    j["s"] = d.s;
    j["inner"] = body_to_json(*d.inner);
    j["inner2"] = body_to_json(*d.inner2);
  }
  return j;
}

LatticeBasis parse_lattice(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  Mat cols = parse_rows(member(j, "basis", path), path + ".basis");
  if (cols.rows() != cols.cols()) throw ValidationError(path + ".basis", "must be square");
  try {
    return LatticeBasis(cols.transpose());
  } catch (const Error& e) {
    throw ValidationError(path + ".basis", e.what());
  }
}

json lattice_to_json(const LatticeBasis& L) {
  return json{{"basis", rows_json(L.B().transpose())}, {"det", L.det_abs()}};
}

json covering_to_json(const CoveringLattice& c) {
  json j;
  j["schema"] = kSchema;
  j["basis"] = rows_json(c.basis.B().transpose());
  j["det"] = c.basis.det_abs();
  j["body_ref"] = c.body_ref;
  j["lambda1_bracket"] = {c.lambda1_bracket.first, c.lambda1_bracket.second};
  j["mu_bracket"] = {c.mu_bracket.first, c.mu_bracket.second};
  if (std::isnan(c.thinness))
    j["thinness"] = nullptr;
  else
    j["thinness"] = c.thinness;
  json tr = json::array();
  for (const auto& s : c.index_trace)
    tr.push_back({{"step", s.step}, {"index", s.index}, {"relation", s.relation}, {"factor", s.factor}});
  j["index_trace"] = tr;
  j["provider"] = c.provider;
  j["config"] = {{"c0", c.c0}, {"tol", c.tol}};
  j["se_node_counts"] = c.se_node_counts;
  j["packing_N"] = c.packing_N;
  if (c.sparsifier)
    j["sparsifier"] = {{"a", ivec_json(c.sparsifier->a)}, {"p", c.sparsifier->p}};
  else
    j["sparsifier"] = nullptr;
  j["adjoins"] = c.adjoins;
  j["initial_packing_density"] = c.initial_packing_density;
  return j;
}

CoveringLattice covering_from_json(const json& j) {
  try {
    if (j.value("schema", std::string()) != kSchema)
      throw ValidationError("schema", "expected " + std::string(kSchema));
    Mat cols = parse_rows(j.at("basis"), "basis");
    CoveringLattice c{LatticeBasis(cols.transpose())};
    c.body_ref = j.at("body_ref").get<std::string>();
    c.lambda1_bracket = {j.at("lambda1_bracket")[0].get<double>(), j.at("lambda1_bracket")[1].get<double>()};
    c.mu_bracket = {j.at("mu_bracket")[0].get<double>(), j.at("mu_bracket")[1].get<double>()};
    c.thinness = j.at("thinness").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                             : j.at("thinness").get<double>();
    for (const auto& s : j.at("index_trace"))
      c.index_trace.push_back({s.at("step").get<std::string>(), s.at("index").get<std::int64_t>(),
                               s.at("relation").get<std::string>(), s.at("factor").get<double>()});
    c.provider = j.at("provider").get<std::string>();
    c.c0 = j.at("config").at("c0").get<double>();
    c.tol = j.at("config").at("tol").get<double>();
    c.se_node_counts = j.at("se_node_counts").get<std::vector<std::int64_t>>();
    c.packing_N = j.at("packing_N").get<std::int64_t>();
    if (!j.at("sparsifier").is_null()) {
      auto a = j.at("sparsifier").at("a").get<std::vector<std::int64_t>>();
      SublatticeSpec sp{IVec(static_cast<Eigen::Index>(a.size())), j.at("sparsifier").at("p").get<std::int64_t>()};
      for (std::size_t i = 0; i < a.size(); ++i) sp.a(static_cast<Eigen::Index>(i)) = a[i];
      c.sparsifier = sp;
    }
    c.adjoins = j.at("adjoins").get<int>();
    c.initial_packing_density = j.at("initial_packing_density").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw ValidationError("covering", e.what());
  }
}

json read_json_file(const std::string& file, const std::string& field) {
  std::ifstream in(file);
  if (!in) throw ValidationError(field, "cannot open '" + file + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(field, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace thinlat

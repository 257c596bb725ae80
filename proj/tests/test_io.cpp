#include "thinlat/io.hpp"

#include "helpers.hpp"

#include "doctest.h"

using namespace thinlat;

namespace {

std::string field_of(const json& j) {
  try {
    parse_body(j);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("parse bodies") {
  json sq = json::parse(R"({"type": "hpolytope",
    "A": [[1, 0], [-1, 0], [0, 1], [0, -1]], "b": [1, 1, 1, 1]})");
  BodyPtr K = compile(parse_body(sq));
  CHECK(K->dim() == 2);
  CHECK(K->symmetric());
  CHECK(K->contains(Vec::Constant(2, 0.99), 0));

  json lp = json::parse(R"({"type": "lpball", "p": "inf", "radius": 2, "dim": 3})");
  BodyPtr L = compile(parse_body(lp));
  CHECK(L->contains(Vec::Constant(3, 1.99), 0));
  CHECK_FALSE(L->contains(Vec::Constant(3, 2.01), 0));

  json nested = json::parse(R"({"type": "translate", "t": [1, "1/2"],
    "inner": {"type": "scale", "s": 2, "inner": {"type": "ellipsoid", "A": [[1, 0], [0, 4]]}}})");
  BodyPtr N = compile(parse_body(nested));
  CHECK(N->center()(0) == doctest::Approx(1.0));
  CHECK(N->center()(1) == doctest::Approx(0.5));
  CHECK(N->contains((Vec(2) << 2.99, 0.5).finished(), 0));

  json kb = json::parse(R"({"type": "kbsym", "c": ["1/3", "1/3"],
    "inner": {"type": "hpolytope", "A": [[-1, 0], [0, -1], [1, 1]], "b": [0, 0, 1]}})");
  BodyPtr S = compile(parse_body(kb));
  CHECK(S->symmetric());
}

TEST_CASE("validation errors name the field") {
  CHECK(field_of(json::parse(R"({"A": [[1]]})")) == "body.type");
  CHECK(field_of(json::parse(R"({"type": "hpolytope", "A": [[1, 0]]})")) == "body.b");
  CHECK(field_of(json::parse(R"({"type": "hpolytope", "A": [[1, 0], [1]], "b": [1, 1]})")) ==
        "body.A[1]");
  CHECK(field_of(json::parse(R"({"type": "scale", "s": 2,
    "inner": {"type": "ellipsoid", "A": [[1, "x"], [0, 1]]}})")) == "body.inner.A[0][1]");
  CHECK(field_of(json::parse(R"({"type": "lpball", "p": 0.5, "dim": 2})")) == "body.p");
  CHECK(field_of(json::parse(R"({"type": "blob"})")) == "body.type");
  CHECK(field_of(json::parse("[1, 2]")) == "body");
}

TEST_CASE("body descriptors round trip") {
  json src = json::parse(R"({"type": "intersect",
    "left": {"type": "lpball", "p": 1, "radius": 1.5, "dim": 2},
    "right": {"type": "affine", "M": [[2, 1], [0, 1]],
              "inner": {"type": "ellipsoid", "A": [[1, 0], [0, 1]], "t": [0, 0]}}})");
  BodyDescriptor d = parse_body(src);
  json out = body_to_json(d);
  BodyDescriptor d2 = parse_body(out);
  CHECK(body_to_json(d2) == out);
  BodyPtr a = compile(d), b = compile(d2);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 200; ++i) {
    Vec x(2);
    x << U(rng), U(rng);
    CHECK(a->contains(x, 0) == b->contains(x, 0));
  }
}

TEST_CASE("lattice JSON is column-major with exact strings") {
  json j = json::parse(R"({"basis": [["1/3", 0], [1, "2.5"]]})");
  LatticeBasis L = parse_lattice(j);
  CHECK(L.B()(0, 0) == doctest::Approx(1.0 / 3));
  CHECK(L.B()(1, 0) == 0.0);
  CHECK(L.B()(0, 1) == 1.0);
  CHECK(L.B()(1, 1) == 2.5);
  LatticeBasis back = parse_lattice(lattice_to_json(L));
  CHECK(back.B() == L.B());
  CHECK_THROWS_AS(parse_lattice(json::parse(R"({"basis": [[1, 2], [2, 4]]})")), ValidationError);
  CHECK_THROWS_AS(parse_lattice(json::parse(R"({"basis": [[1, 2, 3]]})")), ValidationError);
}

TEST_CASE("covering lattices round trip losslessly") {
  CoveringLattice c = thin_lattice_symmetric(th::square(), {}, 4.0);
  json j = covering_to_json(c);
  CHECK(j["schema"] == kSchema);
  CoveringLattice r = covering_from_json(json::parse(j.dump()));
  CHECK(r.basis.B() == c.basis.B());
  CHECK(r.mu_bracket == c.mu_bracket);
  CHECK(r.lambda1_bracket == c.lambda1_bracket);
  CHECK(r.thinness == c.thinness);
  CHECK(r.se_node_counts == c.se_node_counts);
  CHECK(r.sparsifier->a == c.sparsifier->a);
  CHECK(r.index_trace.size() == c.index_trace.size());
  CHECK(covering_to_json(r).dump() == j.dump());

  CoveringLattice bare(LatticeBasis(Mat::Identity(2, 2)));
  json jb = covering_to_json(bare);
  CoveringLattice rb = covering_from_json(jb);
  CHECK(std::isnan(rb.thinness));
  CHECK_FALSE(rb.sparsifier);

  jb["schema"] = "thinlat/0";
  CHECK_THROWS_AS(covering_from_json(jb), ValidationError);
}

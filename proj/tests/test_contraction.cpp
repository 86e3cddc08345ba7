#include <catch2/catch_amalgamated.hpp>

#include "support/testutil.hpp"

using namespace cubical;
using cubical::testutil::Fan;

namespace {

Contraction make_contraction(const Fan& f, TableMode mode = TableMode::Paths) {
  return Contraction(f.cx, generate(f.cx, 4, mode));
}

}  // namespace

TEST_CASE("sigma at vertices is the strategy path") {
  Fan f;
  auto c = make_contraction(f);
  CHECK(reduced_zigzag(f.cx, c.sigma(vertex_cell(f.v("x")))) ==
        Zigzag::of_path(f.path("x", {"f1", "g1"})));
  CHECK(c.sigma(vertex_cell(f.v("z"))) == mk_eps(1, vertex_cell(f.v("z"))));
}

TEST_CASE("sigma on the least edge is the displayed thin composite") {
  Fan f;
  auto c = make_contraction(f);
  CellPtr eta = edge_cell(f.cx.rs, f.e("f1"));
  CellPtr s = c.sigma(eta);
  CHECK(s == mk_comp(1, mk_conn(1, -1, eta),
                     mk_eps(2, path_cell(f.cx.rs, f.cx.sigma(f.v("y1"))))));
  CHECK(is_thin(s));
  CHECK(square_equal(f.cx, boundary(f.cx, s), c.boundary_square(eta)) == Verdict::Equal);
}

TEST_CASE("sigma of a degenerate cell shifts the degeneracy") {
  Fan f;
  auto c = make_contraction(f);
  CellPtr e = mk_eps(1, vertex_cell(f.v("x")));
  CHECK(c.sigma(e) == mk_eps(2, c.sigma(vertex_cell(f.v("x")))));
}

TEST_CASE("boundary squares of edges and sigma images") {
  Fan f;
  auto c = make_contraction(f);
  CellPtr f2 = edge_cell(f.cx.rs, f.e("f2"));
  Square bs = c.boundary_square(f2);
  CHECK(bs.face(1, -1) == f2);
  CHECK(reduced_zigzag(f.cx, bs.face(1, +1)).empty());
  CHECK(reduced_zigzag(f.cx, bs.face(2, -1)) == Zigzag::of_path(f.path("x", {"f1", "g1"})));
  CHECK(reduced_zigzag(f.cx, bs.face(2, +1)) == Zigzag::of_path(f.path("y2", {"g2"})));

  // f = sigma_g: the boundary square is that of the thin collapse.
  CellPtr sf = c.sigma(f2);
  Square bs2 = c.boundary_square(sf);
  CHECK(square_equal(f.cx, bs2, boundary(f.cx, mk_conn(1, -1, sf))) == Verdict::Equal);

  // a degenerate 1-cell at the normal form has an all-degenerate square
  CellPtr idz = mk_eps(1, vertex_cell(f.v("z")));
  Square bs3 = c.boundary_square(idz);
  for (int i = 1; i <= 2; ++i)
    for (int sg : {-1, +1}) CHECK(reduced_zigzag(f.cx, bs3.face(i, sg)).empty());

  auto p0 = c.boundary_square0(vertex_cell(f.v("x")));
  CHECK(p0.second == vertex_cell(f.v("z")));
}

TEST_CASE("contraction laws hold on sampled cells") {
  Fan f;
  auto c = make_contraction(f);
  std::mt19937_64 rng(808);
  testutil::CellSampler sampler(c, rng);
  for (int trial = 0; trial < 60; ++trial) {
    int d = static_cast<int>(rng() % 3);
    CellPtr u = sampler.sample(d);

    // boundary(sigma f) = f^del
    CellPtr su = c.sigma(u);
    if (d >= 1)
      REQUIRE(square_equal(f.cx, boundary(f.cx, su), c.boundary_square(u)) != Verdict::Unequal);

    // sigma_{eps_i f} = eps_{i+1} sigma_f, syntactic.
    for (int i = 1; i <= d + 1; ++i) CHECK(c.sigma(mk_eps(i, u)) == mk_eps(i + 1, su));

    // sigma_{Gamma_i f} = Gamma_{i+1} sigma_f, syntactic.
    for (int i = 1; i + 1 <= d; ++i)
      CHECK(c.sigma(mk_conn(i, -1, u)) == mk_conn(i + 1, -1, su));

    // sigma_{R_i f} = R_{i+1} sigma_f at boundary level.
    for (int i = 1; i <= d; ++i)
      CHECK(square_equal(f.cx, boundary(f.cx, c.sigma(mk_inv(i, u))),
                         boundary(f.cx, mk_inv(i + 1, su))) != Verdict::Unequal);

    // sigma_{f o_i g} = sigma_f o_{i+1} sigma_g, syntactic by construction.
    for (int i = 1; i <= d; ++i) {
      CellPtr g = mk_eps(i, face(f.cx, u, i, +1));
      CHECK(c.sigma(mk_comp(i, u, g)) == mk_comp(i + 1, su, c.sigma(g)));
    }

    // sigma_{sigma_f} = Gamma_1^- sigma_f, thin and exact.
    CellPtr ssu = c.sigma(su);
    CHECK(ssu == mk_conn(1, -1, su));
  }
}

TEST_CASE("sigma is undefined on formal cells") {
  Fan f;
  auto c = make_contraction(f);
  Square s = boundary(f.cx, gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})}));
  CHECK_THROWS_AS(c.sigma(formal_cell(s, "nope")), IllTyped);
}

TEST_CASE("sigma signals missing generators instead of fabricating them") {
  Fan f;
  Contraction local2(f.cx, generate(f.cx, 2, TableMode::Local));
  // sigma of a 2-generator needs a 3-generator, which dimension-2 tables lack.
  CellPtr a23 = gen_cell(f.cx, {f.path("x", {"f2"}), f.path("x", {"f3"})});
  CHECK_THROWS_AS(local2.sigma(a23), MissingGenerator);
}

TEST_CASE("fill_square fills the running example square") {
  Fan f;
  auto c = make_contraction(f);
  Square s = Square::make(1);
  s.face(1, -1) = path_cell(f.cx.rs, f.path("x", {"f2"}));
  s.face(2, -1) = path_cell(f.cx.rs, f.path("x", {"f3"}));
  s.face(1, +1) = path_cell(f.cx.rs, f.path("y3", {"g3"}));
  s.face(2, +1) = path_cell(f.cx.rs, f.path("y2", {"g2"}));
  auto cert = c.fill_square(s);
  CHECK(cert.verified);
  CHECK(square_equal(f.cx, boundary(f.cx, cert.b), s) == Verdict::Equal);

  // the paper's alternative filler fills the transposed square
  CellPtr a13 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f3"})});
  CellPtr a12 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})});
  CellPtr alt = mk_comp(
      1, mk_comp(2, mk_conn(1, +1, edge_cell(f.cx.rs, f.e("f1"))), a13),
      mk_comp(2, mk_transp(1, a12), mk_conn(1, -1, edge_cell(f.cx.rs, f.e("g1")))));
  CHECK(square_equal(f.cx, boundary(f.cx, mk_transp(1, alt)), s) == Verdict::Equal);
  CHECK(boundary_equal(f.cx, cert.b, mk_transp(1, alt)) == Verdict::Equal);
}

TEST_CASE("fill_square on boundaries of existing cells") {
  Fan f;
  auto c = make_contraction(f);
  std::mt19937_64 rng(9090);
  testutil::CellSampler sampler(c, rng);
  int done = 0;
  for (int trial = 0; trial < 40; ++trial) {
    int d = 2 + static_cast<int>(rng() % 3);
    CellPtr u = sampler.sample(d);
    Square s = boundary(f.cx, u);
    auto cert = c.fill_square(s);
    REQUIRE(cert.verified);
    REQUIRE(square_equal(f.cx, boundary(f.cx, cert.b), s) != Verdict::Unequal);
    ++done;
  }
  CHECK(done == 40);
}

TEST_CASE("fill_square fills 0-squares with connecting zigzags") {
  Fan f;
  auto c = make_contraction(f);
  Square s = Square::make(0);
  s.face(1, -1) = vertex_cell(f.v("y1"));
  s.face(1, +1) = vertex_cell(f.v("y2"));
  auto cert = c.fill_square(s);
  CHECK(cert.verified);
  CHECK(face(f.cx, cert.b, 1, -1) == vertex_cell(f.v("y1")));
  CHECK(face(f.cx, cert.b, 1, +1) == vertex_cell(f.v("y2")));
}

TEST_CASE("fill_square respects the dimension bound and validity") {
  Fan f;
  Contraction c(f.cx, generate(f.cx, 4, TableMode::Paths), 2);
  CellPtr a12 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})});
  Square s = boundary(f.cx, c.sigma(a12));
  CHECK_THROWS(c.fill_square(s));

  Square bad = Square::make(1);
  bad.face(1, -1) = path_cell(f.cx.rs, f.path("x", {"f2"}));
  bad.face(2, -1) = path_cell(f.cx.rs, f.path("x", {"f3"}));
  bad.face(1, +1) = path_cell(f.cx.rs, f.path("y3", {"g3"}));
  bad.face(2, +1) = path_cell(f.cx.rs, f.path("y1", {"g1"}));
  CHECK_THROWS_AS(c.fill_square(bad), InvalidSquare);
}

TEST_CASE("resection composes with the reversed strategy path") {
  Fan f;
  auto c = make_contraction(f);

  // identity re-sectioning: tau_x reduces to sigma_x
  std::map<VertexId, VertexId> same;
  for (VertexId v = 0; v < f.cx.rs.vertex_count(); ++v) same[v] = f.cx.normal_form(v);
  auto r = c.resection(same);
  CHECK(reduced_zigzag(f.cx, r.sigma(vertex_cell(f.v("x")))) ==
        Zigzag::of_path(f.path("x", {"f1", "g1"})));

  // re-section to y2: tau_x is sigma_x followed by the reversed sigma_{y2}
  std::map<VertexId, VertexId> to_y2 = same;
  for (VertexId v = 0; v < f.cx.rs.vertex_count(); ++v) to_y2[v] = f.v("y2");
  auto r2 = c.resection(to_y2);
  Zigzag tx = reduced_zigzag(f.cx, r2.sigma(vertex_cell(f.v("x"))));
  Zigzag expect{f.v("x"),
                {{f.e("f1"), true}, {f.e("g1"), true}, {f.e("g2"), false}}};
  CHECK(tx == expect);

  // boundary of tau_f matches the re-sectioned square
  CellPtr f2 = edge_cell(f.cx.rs, f.e("f2"));
  CHECK(square_equal(f.cx, boundary(f.cx, r2.sigma(f2)), r2.boundary_square(f2)) !=
        Verdict::Unequal);
  CHECK(reduced_zigzag(f.cx, r2.boundary_square(f2).face(1, +1)).empty());

  // tau is unital on the new representatives at the 1-dimensional tier
  CHECK(reduced_zigzag(f.cx, r2.sigma(vertex_cell(f.v("y2")))).empty());

  // invalid sections are rejected
  std::map<VertexId, VertexId> partial;
  CHECK_THROWS_AS(c.resection(partial), InvalidSection);
}

TEST_CASE("acyclicity data regenerates the contraction on generators") {
  // Given fill_square, the generator images of sigma are recoverable: filling
  // f^del gives a cell with the same boundary as sigma_f.
  Fan f;
  auto c = make_contraction(f);
  for (EdgeId e = 0; e < f.cx.rs.edge_count(); ++e) {
    CellPtr ec = edge_cell(f.cx.rs, e);
    auto cert = c.fill_square(c.boundary_square(ec));
    REQUIRE(cert.verified);
    CHECK(square_equal(f.cx, boundary(f.cx, cert.b), boundary(f.cx, c.sigma(ec))) !=
          Verdict::Unequal);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "support/testutil.hpp"

using namespace cubical;
using cubical::testutil::Fan;

TEST_CASE("dimension of cell constructors") {
  Fan f;
  CHECK(dim(vertex_cell(f.v("x"))) == 0);
  CHECK(dim(mk_eps(1, edge_cell(f.cx.rs, f.e("f1")))) == 2);
  CHECK(dim(gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"}), f.path("x", {"f3"})})) == 3);
}

TEST_CASE("gen_cell validates its legs") {
  Fan f;
  CHECK_THROWS_AS(gen_cell(f.cx, {f.path("x", {"f2"}), f.path("x", {"f1"})}), IllTyped);
  CHECK_THROWS_AS(gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f1"})}), IllTyped);
  CHECK_THROWS_AS(gen_cell(f.cx, {f.path("x", {"f1"}), f.path("y1", {"g1"})}),
                  DifferentSources);
  CHECK_THROWS_AS(gen_cell(f.cx, {f.path("x", {}), f.path("x", {"f1"})}), IllTyped);
}

TEST_CASE("face golden cases") {
  Fan f;
  CellPtr g1 = edge_cell(f.cx.rs, f.e("g1"));
  CHECK(face(f.cx, mk_eps(1, g1), 1, -1) == g1);

  // the connection's mixed face is the identity 1-cell at the target
  CellPtr f1 = edge_cell(f.cx.rs, f.e("f1"));
  CellPtr corner = face(f.cx, mk_conn(1, -1, f1), 2, +1);
  CHECK(corner == mk_eps(1, vertex_cell(f.v("y1"))));

  // generator faces follow the normalising confluence shape
  CellPtr a12 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})});
  CHECK(face(f.cx, a12, 1, -1) == edge_cell(f.cx.rs, f.e("f2")));
  CHECK(face(f.cx, a12, 2, -1) == f1);
  CHECK(reduced_zigzag(f.cx, face(f.cx, a12, 2, +1)) ==
        Zigzag::of_path(f.path("y2", {"g2"})));
  CHECK(reduced_zigzag(f.cx, face(f.cx, a12, 1, +1)) ==
        Zigzag::of_path(f.path("y1", {"g1"})));

  CHECK_THROWS_AS(face(f.cx, a12, 3, -1), IndexOutOfRange);
}

TEST_CASE("boundary squares") {
  Fan f;
  Square s0 = boundary(f.cx, edge_cell(f.cx.rs, f.e("f1")));
  CHECK(s0.k == 0);
  CHECK(s0.face(1, -1) == vertex_cell(f.v("x")));
  CHECK(s0.face(1, +1) == vertex_cell(f.v("y1")));

  CellPtr a12 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})});
  Square s1 = boundary(f.cx, a12);
  CHECK(validate_square(f.cx, s1).ok);

  CellPtr fm = formal_cell(s1, "probe");
  Square back = boundary(f.cx, fm);
  CHECK(square_equal(f.cx, back, s1) == Verdict::Equal);
}

TEST_CASE("compose typechecks the shared face") {
  Fan f;
  CellPtr f1 = edge_cell(f.cx.rs, f.e("f1"));
  CellPtr g1 = edge_cell(f.cx.rs, f.e("g1"));
  CellPtr p = compose(f.cx, 1, f1, g1);
  CHECK(reduced_zigzag(f.cx, p) == Zigzag::of_path(f.path("x", {"f1", "g1"})));

  CHECK_THROWS_AS(compose(f.cx, 1, f1, edge_cell(f.cx.rs, f.e("g2"))), NotComposable);

  // the diagonal filler composite typechecks through the connection tables
  CellPtr d = compose(f.cx, 1, mk_conn(1, -1, f1),
                      mk_conn(1, +1, path_cell(f.cx.rs, f.cx.sigma(f.v("y1")))));
  CHECK(d->dim == 2);
}

TEST_CASE("inversion and transposition faces") {
  Fan f;
  CellPtr f1 = edge_cell(f.cx.rs, f.e("f1"));
  CHECK(face(f.cx, mk_inv(1, f1), 1, -1) == vertex_cell(f.v("y1")));

  CellPtr cancel = mk_comp(1, mk_inv(1, f1), f1);
  CHECK(reduced_zigzag(f.cx, cancel).empty());

  CellPtr a12 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})});
  CHECK(face(f.cx, mk_transp(1, a12), 1, -1) == f1);
  CHECK_THROWS_AS(mk_transp(1, f1), IndexOutOfRange);
}

TEST_CASE("is_thin") {
  Fan f;
  CellPtr f1 = edge_cell(f.cx.rs, f.e("f1"));
  CHECK(is_thin(mk_eps(1, f1)));
  CHECK_FALSE(is_thin(gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})})));
  CellPtr d = mk_comp(1, mk_conn(1, -1, f1),
                      mk_conn(1, +1, path_cell(f.cx.rs, f.cx.sigma(f.v("y1")))));
  CHECK(is_thin(d));
  CHECK(is_thin(mk_inv(2, d)));
  CHECK(is_thin(mk_transp(1, d)));
  CHECK_FALSE(is_thin(f1));
}

TEST_CASE("equality tiers") {
  Fan f;
  CellPtr f1 = edge_cell(f.cx.rs, f.e("f1"));
  CellPtr g1 = edge_cell(f.cx.rs, f.e("g1"));
  CellPtr f2 = edge_cell(f.cx.rs, f.e("f2"));
  CellPtr g2 = edge_cell(f.cx.rs, f.e("g2"));

  // two spellings of the same path
  CellPtr left = mk_comp(1, mk_comp(1, f1, g1), mk_eps(1, vertex_cell(f.v("z"))));
  CellPtr right = mk_comp(1, f1, g1);
  CHECK(equal(f.cx, left, right) == Verdict::Equal);

  // reassociated thin 2-cells with the same boundary are equal
  CellPtr t1 = mk_comp(2, mk_eps(2, f1), mk_eps(2, f1));
  CellPtr t2 = mk_eps(2, f1);
  CHECK(equal(f.cx, t1, t2) == Verdict::Equal);

  // generators with different legs have different 1-skeletons
  CellPtr a12 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})});
  CellPtr a13 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f3"})});
  CHECK(equal(f.cx, a12, a13) == Verdict::Unequal);

  CHECK_THROWS_AS(equal(f.cx, f1, t2), DimensionMismatch);

  // reflexive, symmetric
  CHECK(equal(f.cx, a12, a12) == Verdict::Equal);
  CellPtr comp1 = mk_comp(1, f2, g2);
  CellPtr comp2 = mk_comp(1, f2, mk_comp(1, g2, mk_eps(1, vertex_cell(f.v("z")))));
  CHECK(equal(f.cx, comp1, comp2) == equal(f.cx, comp2, comp1));
}

TEST_CASE("one_skeleton of the local generator") {
  Fan f;
  CellPtr a12 = gen_cell(f.cx, {f.path("x", {"f1"}), f.path("x", {"f2"})});
  auto sk = one_skeleton(f.cx, a12);
  REQUIRE(sk.size() == 4);
  CHECK(sk.at({1, {-1}}) == Zigzag::of_path(f.path("x", {"f2"})));
  CHECK(sk.at({1, {+1}}) == Zigzag::of_path(f.path("y2", {"g2"})));
  CHECK(sk.at({2, {-1}}) == Zigzag::of_path(f.path("x", {"f1"})));
  CHECK(sk.at({2, {+1}}) == Zigzag::of_path(f.path("y1", {"g1"})));

  auto ske = one_skeleton(f.cx, mk_eps(1, edge_cell(f.cx.rs, f.e("f1"))));
  CHECK(ske.at({2, {-1}}) == Zigzag::of_path(f.path("x", {"f1"})));
  CHECK(ske.at({2, {+1}}) == Zigzag::of_path(f.path("x", {"f1"})));
  CHECK(ske.at({1, {-1}}).empty());
  CHECK(ske.at({1, {+1}}).empty());
}

TEST_CASE("equal cells have identical one_skeletons") {
  Fan f;
  auto table = generate(f.cx, 3, TableMode::Local);
  Contraction c(f.cx, table);
  std::mt19937_64 rng(101);
  testutil::CellSampler sampler(c, rng);
  for (int trial = 0; trial < 100; ++trial) {
    int d = 2 + static_cast<int>(rng() % 2);
    CellPtr a = sampler.sample(d);
    CellPtr b = sampler.sample(d);
    if (equal(f.cx, a, b) == Verdict::Equal) CHECK(one_skeleton(f.cx, a) == one_skeleton(f.cx, b));
    CHECK(one_skeleton(f.cx, a) == one_skeleton(f.cx, a));
  }
}

TEST_CASE("validate_square accepts boundaries and locates mutations") {
  Fan f;
  Square s = Square::make(1);
  s.face(1, -1) = path_cell(f.cx.rs, f.path("x", {"f2"}));
  s.face(2, -1) = path_cell(f.cx.rs, f.path("x", {"f3"}));
  s.face(1, +1) = path_cell(f.cx.rs, f.path("y3", {"g3"}));
  s.face(2, +1) = path_cell(f.cx.rs, f.path("y2", {"g2"}));
  CHECK(validate_square(f.cx, s).ok);

  Square bad = s;
  bad.face(2, +1) = path_cell(f.cx.rs, f.path("y1", {"g1"}));
  auto rep = validate_square(f.cx, bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.j == 2);
}

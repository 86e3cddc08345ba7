#pragma once

#include <map>
#include <string>
#include <vector>

#include "cubical/contraction.hpp"

namespace cubical {

/// The normalising local confluence filler of a pair of paths out of a
/// common source: top g, left f, bottom sigma at target(f), right sigma at
/// target(g). Ordered pairs give the table generator, reversed pairs its
/// transpose, the diagonal a connection pasting, empty legs degenerate
/// fillers.
inline CellPtr local_filler(const Contraction& c, const Path& f, const Path& g) {
  const Complex& cx = c.complex();
  if (f.start != g.start)
    throw DifferentSources("local_filler: legs start at " + cx.rs.vertex_name(f.start) +
                           " and " + cx.rs.vertex_name(g.start));
  f.validate(cx.rs);
  g.validate(cx.rs);
  VertexId x = f.start;
  if (f.empty() && g.empty()) return mk_conn(1, +1, path_cell(cx.rs, cx.sigma(x)));
  if (f.empty()) {
    if (g == cx.sigma(x)) return mk_eps(1, path_cell(cx.rs, g));
    return mk_comp(2, mk_conn(1, +1, path_cell(cx.rs, cx.sigma(x))),
                   c.sigma(path_cell(cx.rs, g)));
  }
  if (g.empty()) return mk_transp(1, local_filler(c, g, f));
  int cmp = path_compare(cx.rs, f, g);
  if (cmp == 0) {
    VertexId y = f.end(cx.rs);
    return mk_comp(1, mk_conn(1, -1, path_cell(cx.rs, f)),
                   mk_conn(1, +1, path_cell(cx.rs, cx.sigma(y))));
  }
  if (cmp < 0) return gen_cell(cx, {f, g});
  return mk_transp(1, gen_cell(cx, {g, f}));
}

namespace detail {

inline Path must_path(const Complex& cx, const CellPtr& c1, const char* what) {
  auto p = path_of_cell(cx, c1);
  if (!p) throw IllTyped(std::string(what) + ": face is not a forward path");
  return *p;
}

}  // namespace detail

/// Extends the local fillers to arbitrary branchings of paths by the
/// Noetherian pasting: a local filler on the first steps, then recursive
/// fillers glued to its positive faces.
inline CellPtr newman_extend(const Contraction& c, const Branching& b) {
  if (b.legs.size() != 2) throw Error("newman_extend: expects a 2-branching");
  const Complex& cx = c.complex();
  const Path& f = b.legs[0];
  const Path& g = b.legs[1];
  if (f.start != g.start) throw DifferentSources("newman_extend: sources differ");

  static thread_local std::map<std::string, CellPtr> memo;
  std::string key = encode_legs({f, g});
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  CellPtr result;
  if (f.empty() || g.empty() || f == g || (f.length() == 1 && g.length() == 1)) {
    result = local_filler(c, f, g);
  } else {
    Path ef{f.start, {f.steps.front()}};
    Path eg{g.start, {g.steps.front()}};
    Path frest{cx.rs.target(f.steps.front()), {f.steps.begin() + 1, f.steps.end()}};
    Path grest{cx.rs.target(g.steps.front()), {g.steps.begin() + 1, g.steps.end()}};
    CellPtr sq1 = local_filler(c, ef, eg);
    Path right1 = detail::must_path(cx, face(cx, sq1, 2, +1), "newman_extend");
    CellPtr second = newman_extend(c, Branching{right1.start, {right1, grest}});
    CellPtr row1 = compose(cx, 2, sq1, second);
    Path bottom1 = detail::must_path(cx, face(cx, row1, 1, +1), "newman_extend");
    CellPtr third = newman_extend(c, Branching{frest.start, {frest, bottom1}});
    result = compose(cx, 1, row1, third);
  }
  memo[key] = result;
  return result;
}

/// The normalising Church-Rosser filler of a zigzag: top the zigzag, sides
/// the strategy paths of its endpoints, bottom degenerate at the normal
/// form. Forward steps contract with sigma, backward steps paste a
/// confluence filler against the strategy path.
inline CellPtr church_rosser(const Contraction& c, const Zigzag& z_in) {
  const Complex& cx = c.complex();
  Zigzag z = reduce_zigzag(cx.rs, z_in);
  if (z.empty()) return mk_eps(2, path_cell(cx.rs, cx.sigma(z.start)));
  ZStep head = z.steps.front();
  Zigzag rest{z.step_tgt(cx.rs, head), {z.steps.begin() + 1, z.steps.end()}};
  if (head.forward) {
    CellPtr sq = c.sigma(edge_cell(cx.rs, head.edge));
    return compose(cx, 2, sq, church_rosser(c, rest));
  }
  // Backward head: the zigzag runs against edge e from x' to x.
  EdgeId e = head.edge;
  VertexId x = cx.rs.target(e);
  VertexId xp = cx.rs.source(e);
  CellPtr brest = church_rosser(c, rest);
  Path gpath = detail::must_path(cx, face(cx, brest, 2, -1), "church_rosser");
  CellPtr ecell = edge_cell(cx.rs, e);
  CellPtr row1 = compose(cx, 2, mk_eps(1, mk_inv(1, ecell)),
                         compose(cx, 2, mk_conn(1, +1, path_cell(cx.rs, gpath)), brest));
  CellPtr nf = newman_extend(c, Branching{xp, {Path{xp, {e}}, gpath}});
  CellPtr row2 = compose(cx, 2, mk_inv(2, mk_conn(1, -1, ecell)), nf);
  CellPtr row3 = mk_conn(1, -1, face(cx, nf, 1, +1));
  (void)x;
  return compose(cx, 1, row1, compose(cx, 1, row2, row3));
}

/// The residual f|g: the right face of the confluence filler of (f, g).
/// With normalising fillers this is the strategy path at target(g).
inline Path residual(const Contraction& c, const Path& f, const Path& g) {
  CellPtr filler = local_filler(c, f, g);
  return detail::must_path(c.complex(), face(c.complex(), filler, 2, +1), "residual");
}

/// Fills a 3-branching: the table generator for local branchings with
/// distinct legs (transposed into input order), the fold/contract filler for
/// degenerate ones, and the B/C/D/E pasting otherwise.
inline CellPtr fill_3_branching(const Contraction& c, const Branching& b) {
  if (b.legs.size() != 3) throw Error("fill_3_branching: expects a 3-branching");
  const Complex& cx = c.complex();
  for (const auto& p : b.legs) {
    if (p.empty()) throw IllTyped("fill_3_branching: legs must be nonempty");
    if (p.start != b.source) throw DifferentSources("fill_3_branching: sources differ");
  }

  static thread_local std::map<std::string, CellPtr> memo;
  std::string key = encode_legs(b.legs);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  bool local = b.is_local();
  bool distinct = b.legs[0] != b.legs[1] && b.legs[1] != b.legs[2] && b.legs[0] != b.legs[2];
  CellPtr result;

  if (local && distinct) {
    // Sort the legs, take the generator, transpose back into input order.
    std::vector<Path> sorted = b.legs;
    std::sort(sorted.begin(), sorted.end(),
              [&](const Path& p, const Path& q) { return path_less(cx.rs, p, q); });
    result = c.require_generator(sorted);
    std::vector<Path> cur = sorted;
    // Bubble toward the requested order; each adjacent swap is a transposition.
    while (cur != b.legs) {
      for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
        std::size_t want0 =
            std::find(b.legs.begin(), b.legs.end(), cur[i]) - b.legs.begin();
        std::size_t want1 =
            std::find(b.legs.begin(), b.legs.end(), cur[i + 1]) - b.legs.begin();
        if (want0 > want1) {
          std::swap(cur[i], cur[i + 1]);
          result = mk_transp(static_cast<int>(i) + 1, result);
          break;
        }
      }
    }
  } else if (!distinct || !local) {
    bool decomposable = distinct;
    if (decomposable) {
      // B/C/D/E pasting on the leading edges.
      auto first_edge = [&](const Path& p) { return Path{p.start, {p.steps.front()}}; };
      auto rest_of = [&](const Path& p) {
        return Path{cx.rs.target(p.steps.front()), {p.steps.begin() + 1, p.steps.end()}};
      };
      Path e1 = first_edge(b.legs[0]), e2 = first_edge(b.legs[1]), e3 = first_edge(b.legs[2]);
      Path r1 = rest_of(b.legs[0]), r2 = rest_of(b.legs[1]), r3 = rest_of(b.legs[2]);
      CellPtr b3 = fill_3_branching(c, Branching{b.source, {e1, e2, e3}});
      auto facep = [&](const CellPtr& w, int i, int sg, int j, int sg2) {
        return detail::must_path(cx, face(cx, face(cx, w, i, sg), j, sg2), "fill_3_branching");
      };
      Path u = facep(b3, 3, +1, 2, -1);
      Path v = facep(b3, 3, +1, 1, -1);
      CellPtr c3 = fill_3_branching(c, Branching{u.start, {u, v, r3}});
      CellPtr x = compose(cx, 3, b3, c3);
      Path a = facep(b3, 2, +1, 2, -1);
      Path cc = facep(x, 2, +1, 1, -1);
      CellPtr d3 = fill_3_branching(c, Branching{a.start, {a, r2, cc}});
      CellPtr y = compose(cx, 2, x, d3);
      Path p2 = facep(y, 1, +1, 2, -1);
      Path p3 = facep(y, 1, +1, 1, -1);
      CellPtr e3c = fill_3_branching(c, Branching{r1.start, {r1, p2, p3}});
      result = compose(cx, 1, y, e3c);
    } else {
      // Degenerate legs: assemble the normalising boundary and fill it.
      Square s = Square::make(2);
      auto nf2 = [&](const Path& p, const Path& q) {
        return newman_extend(c, Branching{p.start, {p, q}});
      };
      s.face(1, -1) = nf2(b.legs[1], b.legs[2]);
      s.face(2, -1) = nf2(b.legs[0], b.legs[2]);
      s.face(3, -1) = nf2(b.legs[0], b.legs[1]);
      for (int i = 1; i <= 3; ++i) {
        Path sig = cx.sigma(b.legs[static_cast<std::size_t>(i - 1)].end(cx.rs));
        s.face(i, +1) = local_filler(c, sig, sig);
      }
      bool all_thin = true;
      for (int i = 1; i <= 3; ++i)
        for (int sg : {-1, +1}) all_thin = all_thin && is_thin(s.face(i, sg));
      result = all_thin ? thin_fill(cx, s) : c.fill_square(s).b;
    }
  }
  memo[key] = result;
  return result;
}

/// One instantiation of the cube law on a 3-branching.
struct CubeLawInstance {
  int i, j, k;              // 1-based leg indices
  Path lhs, rhs;            // (f_i|f_j)|(f_k|f_j) and (f_i|f_k)|(f_j|f_k)
  bool holds = false;
  bool face_route_checked = false;
  bool face_route_holds = false;
};

struct CubeLawReport {
  Branching branching;
  std::map<std::pair<int, int>, Path> residuals;  // (i,j) -> f_i|f_j
  std::vector<CubeLawInstance> instances;
  bool all_hold = true;
};

/// Checks every index instantiation of the cube law on a 3-branching, by
/// residual composition and, where a filler is available, by iterated faces
/// of the 3-confluence filler.
inline CubeLawReport check_cube_law(const Contraction& c, const Branching& b) {
  if (b.legs.size() != 3) throw Error("check_cube_law: expects a 3-branching");
  const Complex& cx = c.complex();
  CubeLawReport rep;
  rep.branching = b;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      rep.residuals[{i, j}] =
          residual(c, b.legs[static_cast<std::size_t>(i - 1)],
                   b.legs[static_cast<std::size_t>(j - 1)]);
    }
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) {
        if (i == j || j == k || i == k) continue;
        CubeLawInstance inst;
        inst.i = i;
        inst.j = j;
        inst.k = k;
        inst.lhs = residual(c, rep.residuals[{i, j}], rep.residuals[{k, j}]);
        inst.rhs = residual(c, rep.residuals[{i, k}], rep.residuals[{j, k}]);
        inst.holds = inst.lhs == inst.rhs;
        try {
          CellPtr w = fill_3_branching(
              c, Branching{b.source,
                           {b.legs[static_cast<std::size_t>(i - 1)],
                            b.legs[static_cast<std::size_t>(j - 1)],
                            b.legs[static_cast<std::size_t>(k - 1)]}});
          Zigzag lhs_face =
              reduce_zigzag(cx.rs, zigzag_of_cell(cx, face(cx, face(cx, w, 2, +1), 2, +1)));
          Zigzag rhs_face =
              reduce_zigzag(cx.rs, zigzag_of_cell(cx, face(cx, face(cx, w, 3, +1), 2, +1)));
          inst.face_route_checked = true;
          inst.face_route_holds =
              lhs_face == rhs_face && lhs_face == Zigzag::of_path(inst.lhs);
        } catch (const MissingGenerator&) {
          inst.face_route_checked = false;
        }
        if (!inst.holds || (inst.face_route_checked && !inst.face_route_holds))
          rep.all_hold = false;
        rep.instances.push_back(inst);
      }
  return rep;
}

/// Fills a 1-square of zigzags with the 3x3 pasting of Church-Rosser fillers
/// and connection corners.
inline CellPtr squier_witness(const Contraction& c, const Square& s) {
  if (s.k != 1) throw DimensionMismatch("squier_witness: expects a 1-square");
  const Complex& cx = c.complex();
  auto rep = validate_square(cx, s);
  if (!rep.ok) throw InvalidSquare("squier_witness: " + rep.message);
  Zigzag top = reduced_zigzag(cx, s.face(1, -1));
  Zigzag bot = reduced_zigzag(cx, s.face(1, +1));
  Zigzag left = reduced_zigzag(cx, s.face(2, -1));
  Zigzag right = reduced_zigzag(cx, s.face(2, +1));
  VertexId p = top.start;
  VertexId q = top.end(cx.rs);
  VertexId r = left.end(cx.rs);
  VertexId t = bot.end(cx.rs);
  auto sig = [&](VertexId v) { return path_cell(cx.rs, cx.sigma(v)); };
  CellPtr b_top = church_rosser(c, top);
  CellPtr b_bot = church_rosser(c, bot);
  CellPtr b_left = church_rosser(c, left);
  CellPtr b_right = church_rosser(c, right);
  CellPtr nfc = mk_eps(1, mk_eps(1, vertex_cell(cx.normal_form(p))));
  CellPtr row1 =
      compose(cx, 2, mk_conn(1, +1, sig(p)), compose(cx, 2, b_top, mk_inv(2, mk_conn(1, +1, sig(q)))));
  CellPtr row2 = compose(cx, 2, mk_transp(1, b_left),
                         compose(cx, 2, nfc, mk_inv(2, mk_transp(1, b_right))));
  CellPtr row3 = compose(
      cx, 2, mk_inv(1, mk_conn(1, +1, sig(r))),
      compose(cx, 2, mk_inv(1, b_bot), mk_inv(1, mk_inv(2, mk_conn(1, +1, sig(t))))));
  return compose(cx, 1, row1, compose(cx, 1, row2, row3));
}

}  // namespace cubical

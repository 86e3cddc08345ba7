#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "cubical/cell.hpp"

namespace cubical {

enum class Verdict : std::uint8_t { Equal, Unequal, Unknown };

inline Verdict meet(Verdict x, Verdict y) {
  if (x == Verdict::Unequal || y == Verdict::Unequal) return Verdict::Unequal;
  if (x == Verdict::Unknown || y == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Equal;
}

/// Key of a 1-face of an m-cell: the free direction plus the sign chosen for
/// every other direction, in increasing direction order.
struct SkeletonKey {
  int free_dir;
  std::vector<int> signs;
  bool operator<(const SkeletonKey& o) const {
    return std::tie(free_dir, signs) < std::tie(o.free_dir, o.signs);
  }
  bool operator==(const SkeletonKey& o) const {
    return free_dir == o.free_dir && signs == o.signs;
  }
};

/// All 1-dimensional faces of a cell as reduced zigzags, keyed canonically.
/// Removing directions from the highest down keeps the face index equal to
/// the direction label, which picks one representative per equivalence class
/// of face words under the cubical relations.
inline std::map<SkeletonKey, Zigzag> one_skeleton(const Complex& cx, const CellPtr& c) {
  if (c->dim < 1) throw DimensionMismatch("one_skeleton: dimension must be >= 1");
  int m = c->dim;
  std::map<SkeletonKey, Zigzag> out;
  for (int d = 1; d <= m; ++d) {
    int others = m - 1;
    for (int mask = 0; mask < (1 << others); ++mask) {
      std::vector<int> signs;
      signs.reserve(static_cast<std::size_t>(others));
      int bit = 0;
      for (int j = 1; j <= m; ++j) {
        if (j == d) continue;
        signs.push_back((mask >> bit) & 1 ? +1 : -1);
        ++bit;
      }
      CellPtr cur = c;
      bit = others - 1;
      for (int j = m; j >= 1; --j) {
        if (j == d) continue;
        cur = face(cx, cur, j, signs[static_cast<std::size_t>(bit)]);
        --bit;
      }
      out[SkeletonKey{d, signs}] = reduce_zigzag(cx.rs, zigzag_of_cell(cx, cur));
    }
  }
  return out;
}

inline Verdict equal(const Complex& cx, const CellPtr& a, const CellPtr& b);

namespace detail {

/// True for towers of degeneracies over a single vertex; such cells are
/// units for every composition they take part in.
inline bool is_point_tower(const CellPtr& c) {
  if (c->op == Op::Vertex) return true;
  return c->op == Op::Eps && is_point_tower(c->a);
}

inline CellPtr normalize_cell(const Complex& cx, const CellPtr& c);

/// Splits the o_i spine of a right-associated composite.
inline void spine(const CellPtr& c, int i, std::vector<CellPtr>& out) {
  if (c->op == Op::Comp && c->index == i) {
    spine(c->a, i, out);
    spine(c->b, i, out);
  } else {
    out.push_back(c);
  }
}

inline CellPtr respine(int i, const std::vector<CellPtr>& parts) {
  CellPtr acc = parts.back();
  for (std::size_t n = parts.size() - 1; n-- > 0;) acc = mk_comp(i, parts[n], acc);
  return acc;
}

/// Cells equal to a tower of degeneracies over a single vertex.
inline bool is_point_degenerate(const Complex& cx, const CellPtr& c) {
  return is_point_tower(normalize_cell(cx, c));
}

/// Recognizes the unfold-of-fold telescope
///   (eps_i a o_{i+1} Gamma_i^+ b) o_i (Gamma_i^+ p o_{i+1} X o_{i+1}
///   Gamma_i^- q) o_i (Gamma_i^- r o_{i+1} eps_i s)
/// and collapses it to X; equal to X by interchange, the transport laws
/// Gamma+ o Gamma- = eps, and the unit laws, provided the wrapper arguments
/// are the corresponding faces of X. Wrapper factors over degenerate faces
/// may already have been dropped by the unit rules: a missing factor is
/// accepted when the face of X it would carry is degenerate over a point.
/// `used` reports how many spine factors (1 to 3) the match consumed.
inline CellPtr collapse_unfold(const Complex& cx, int i, const std::vector<CellPtr>& parts,
                               std::size_t at, std::size_t& used) {
  auto eq = [&](const CellPtr& u, const CellPtr& v) { return equal(cx, u, v) == Verdict::Equal; };
  auto is_conn = [&](const CellPtr& c, int sign) {
    return c->op == Op::Conn && c->index == i && c->sign == sign;
  };
  auto is_epsi = [&](const CellPtr& c) { return c->op == Op::Eps && c->index == i; };

  // Parse the middle row: [Gamma_i^+ p]? X... [Gamma_i^- q]?
  auto try_middle = [&](const CellPtr& mid, CellPtr& x, CellPtr& p, CellPtr& q) {
    std::vector<CellPtr> m;
    spine(mid, i + 1, m);
    std::size_t lo = 0, hi = m.size();
    p = q = nullptr;
    if (lo < hi && is_conn(m[lo], +1)) p = m[lo++]->a;
    if (lo < hi && is_conn(m[hi - 1], -1)) q = m[hi - 1]->a;
    if (q) --hi;
    if (lo >= hi) return false;
    if (!p && !q) return false;  // plain composite, nothing to unwrap
    x = respine(i + 1, {m.begin() + static_cast<long>(lo), m.begin() + static_cast<long>(hi)});
    return i + 1 <= x->dim;
  };

  // Parse a boundary row: eps_i a o_{i+1} Gamma_i^{sign} b, either factor
  // optional. Returns false if the candidate cannot be such a row at all.
  auto try_edge_row = [&](const CellPtr& row, int sign, bool eps_first, CellPtr& a, CellPtr& b) {
    std::vector<CellPtr> r;
    spine(row, i + 1, r);
    a = b = nullptr;
    if (r.size() == 2) {
      const CellPtr& e = eps_first ? r[0] : r[1];
      const CellPtr& g = eps_first ? r[1] : r[0];
      if (!is_epsi(e) || !is_conn(g, sign)) return false;
      a = e->a;
      b = g->a;
      return true;
    }
    if (r.size() == 1) {
      if (is_conn(r[0], sign)) {
        b = r[0]->a;
        return true;
      }
      return false;
    }
    return false;
  };

  for (std::size_t span = std::min<std::size_t>(3, parts.size() - at); span >= 2; --span) {
    CellPtr x, p, q, a, b, r, s;
    bool have_top = false, have_bot = false;
    std::size_t mid_at = at;
    if (span == 3) {
      have_top = have_bot = true;
      mid_at = at + 1;
    } else if (span == 2) {
      // Either [top, mid] or [mid, bot]; try both.
      if (try_edge_row(parts[at], +1, true, a, b) && try_middle(parts[at + 1], x, p, q)) {
        have_top = true;
        mid_at = at + 1;
      } else if (try_middle(parts[at], x, p, q) &&
                 try_edge_row(parts[at + 1], -1, false, s, r)) {
        have_bot = true;
        mid_at = at;
      } else {
        continue;
      }
    }
    if (span == 3) {
      if (!try_edge_row(parts[at], +1, true, a, b)) continue;
      if (!try_edge_row(parts[at + 2], -1, false, s, r)) continue;
    }
    if (!x && !try_middle(parts[mid_at], x, p, q)) continue;

    // Side conditions: present wrappers carry the faces of X, absent ones
    // are only legitimate over point-degenerate faces.
    CellPtr x_im = face(cx, x, i, -1);
    CellPtr x_ip = face(cx, x, i, +1);
    CellPtr x_jm = face(cx, x, i + 1, -1);
    CellPtr x_jp = face(cx, x, i + 1, +1);
    auto cond = [&](const CellPtr& got, const CellPtr& want) {
      return got ? eq(got, want) : is_point_degenerate(cx, want);
    };
    if (!have_top && !(is_point_degenerate(cx, x_im) && is_point_degenerate(cx, x_jp))) continue;
    if (!have_bot && !(is_point_degenerate(cx, x_ip) && is_point_degenerate(cx, x_jm))) continue;
    if (have_top && !(cond(a, x_im) && cond(b, x_jp))) continue;
    if (have_bot && !(cond(r, x_jm) && cond(s, x_ip))) continue;
    if (!cond(p, x_jm) || !cond(q, x_jp)) continue;
    used = span;
    return x;
  }
  return nullptr;
}

inline CellPtr normalize_step(const Complex& cx, const CellPtr& c) {
  switch (c->op) {
    case Op::Vertex:
    case Op::Edge:
    case Op::Gen:
    case Op::Formal:
      return c;
    case Op::Eps:
      return c;
    case Op::Conn: {
      const CellPtr& sub = c->a;
      if (sub->op == Op::Eps) {
        int i = c->index, j = sub->index;
        if (i == j) return mk_eps(i, mk_eps(i, sub->a));
        if (i < j) return mk_eps(j + 1, mk_conn(i, c->sign, sub->a));
        return mk_eps(j, mk_conn(i - 1, c->sign, sub->a));
      }
      return c;
    }
    case Op::Inv: {
      const CellPtr& sub = c->a;
      if (sub->op == Op::Inv && sub->index == c->index) return sub->a;
      if (sub->op == Op::Eps && sub->index == c->index) return sub;
      return c;
    }
    case Op::Transp: {
      const CellPtr& sub = c->a;
      int i = c->index;
      if (sub->op == Op::Transp && sub->index == i) return sub->a;
      if (sub->op == Op::Eps) {
        if (sub->index == i) return mk_eps(i + 1, sub->a);
        if (sub->index == i + 1) return mk_eps(i, sub->a);
      }
      if (sub->op == Op::Conn && sub->index == i) return sub;
      return c;
    }
    case Op::Comp: {
      int i = c->index;
      CellPtr x = c->a;
      CellPtr y = c->b;
      // Units: literal eps_i and fully degenerate towers over a point.
      if (x->op == Op::Eps && x->index == i) return y;
      if (y->op == Op::Eps && y->index == i) return x;
      if (is_point_tower(x)) return y;
      if (is_point_tower(y)) return x;
      // Right association.
      if (x->op == Op::Comp && x->index == i)
        return mk_comp(i, x->a, mk_comp(i, x->b, y));
      // Fusion of matching degeneracies and connections through o_i.
      if (x->op == Op::Eps && y->op == Op::Eps && x->index == y->index) {
        int j = x->index;
        if (j < i) return mk_eps(j, mk_comp(i - 1, x->a, y->a));
        if (j > i) return mk_eps(j, mk_comp(i, x->a, y->a));
      }
      if (x->op == Op::Conn && y->op == Op::Conn && x->index == y->index &&
          x->sign == y->sign) {
        int j = x->index;
        if (j <= i - 2) return mk_conn(j, x->sign, mk_comp(i - 1, x->a, y->a));
        if (j >= i + 1) return mk_conn(j, x->sign, mk_comp(i, x->a, y->a));
      }
      // Transport: Gamma+ a o Gamma- a collapses to a degeneracy.
      if (x->op == Op::Conn && y->op == Op::Conn && x->index == y->index && x->sign == +1 &&
          y->sign == -1 && equal(cx, x->a, y->a) == Verdict::Equal) {
        int j = x->index;
        if (j == i) return mk_eps(i + 1, x->a);
        if (j == i - 1) return mk_eps(i - 1, x->a);
      }
      // Unfold-of-fold telescopes along the o_i spine.
      std::vector<CellPtr> parts;
      spine(c, i, parts);
      if (parts.size() >= 2) {
        for (std::size_t n = 0; n + 1 < parts.size(); ++n) {
          std::size_t used = 0;
          if (CellPtr hit = collapse_unfold(cx, i, parts, n, used)) {
            std::vector<CellPtr> next(parts.begin(), parts.begin() + static_cast<long>(n));
            next.push_back(hit);
            next.insert(next.end(), parts.begin() + static_cast<long>(n + used), parts.end());
            if (next.size() == 1) return next.front();
            return respine(i, next);
          }
        }
      }
      return c;
    }
  }
  return c;
}

inline CellPtr normalize_cell(const Complex& cx, const CellPtr& c) {
  static thread_local std::map<std::pair<std::uint64_t, const Cell*>, CellPtr> memo;
  auto key = std::make_pair(cx.id, c.get());
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  CellPtr cur = c;
  // Normalize children first, then apply root rules to a fixed point.
  switch (cur->op) {
    case Op::Eps:
      cur = mk_eps(cur->index, normalize_cell(cx, cur->a));
      break;
    case Op::Conn:
      cur = mk_conn(cur->index, cur->sign, normalize_cell(cx, cur->a));
      break;
    case Op::Inv:
      cur = mk_inv(cur->index, normalize_cell(cx, cur->a));
      break;
    case Op::Transp:
      cur = mk_transp(cur->index, normalize_cell(cx, cur->a));
      break;
    case Op::Comp:
      cur = mk_comp(cur->index, normalize_cell(cx, cur->a), normalize_cell(cx, cur->b));
      break;
    default:
      break;
  }
  for (int fuel = 0; fuel < 10000; ++fuel) {
    CellPtr next = normalize_step(cx, cur);
    if (next == cur) break;
    // A rewrite may expose new redexes below the root.
    switch (next->op) {
      case Op::Eps:
        next = mk_eps(next->index, normalize_cell(cx, next->a));
        break;
      case Op::Conn:
        next = mk_conn(next->index, next->sign, normalize_cell(cx, next->a));
        break;
      case Op::Inv:
        next = mk_inv(next->index, normalize_cell(cx, next->a));
        break;
      case Op::Transp:
        next = mk_transp(next->index, normalize_cell(cx, next->a));
        break;
      case Op::Comp:
        next = mk_comp(next->index, normalize_cell(cx, next->a), normalize_cell(cx, next->b));
        break;
      default:
        break;
    }
    cur = next;
  }
  memo[key] = cur;
  return cur;
}

}  // namespace detail

/// Tiered equality check.
///   dim 0: vertex identity.  dim 1: reduced zigzags.
///   both thin: boundaries compared componentwise.
///   otherwise: structural normal forms, then 1-skeleton separation,
///   else Unknown (the congruence is not decided in higher dimensions).
inline Verdict equal(const Complex& cx, const CellPtr& a, const CellPtr& b) {
  if (a->dim != b->dim) throw DimensionMismatch("equal: dimensions differ");
  if (a == b) return Verdict::Equal;
  if (a->dim == 0) return a->vertex == b->vertex ? Verdict::Equal : Verdict::Unequal;
  if (a->dim == 1)
    return reduced_zigzag(cx, a) == reduced_zigzag(cx, b) ? Verdict::Equal : Verdict::Unequal;
  if (is_thin(a) && is_thin(b)) {
    Verdict v = Verdict::Equal;
    for (int i = 1; i <= a->dim; ++i)
      for (int sg : {-1, +1}) v = meet(v, equal(cx, face(cx, a, i, sg), face(cx, b, i, sg)));
    if (v != Verdict::Unknown) return v;
  }
  if (detail::normalize_cell(cx, a) == detail::normalize_cell(cx, b)) return Verdict::Equal;
  if (one_skeleton(cx, a) != one_skeleton(cx, b)) return Verdict::Unequal;
  return Verdict::Unknown;
}

/// Checked composition: rejects pairs whose shared faces are provably
/// distinct; undecided faces are accepted.
inline CellPtr compose(const Complex& cx, int i, const CellPtr& a, const CellPtr& b) {
  if (a->dim != b->dim) throw DimensionMismatch("compose: dimensions differ");
  if (i < 1 || i > a->dim) throw IndexOutOfRange("compose: index out of range");
  CellPtr fa = face(cx, a, i, +1);
  CellPtr fb = face(cx, b, i, -1);
  if (equal(cx, fa, fb) == Verdict::Unequal)
    throw NotComposable("compose: face mismatch in direction " + std::to_string(i) + ": " +
                        show(cx, fa) + " vs " + show(cx, fb));
  return mk_comp(i, a, b);
}

struct SquareReport {
  bool ok = true;
  int i = 0, j = 0, alpha = 0, beta = 0;  // first failing equation when !ok
  std::string message;
};

/// Checks the square equations with tiered equality; Unknown passes, a
/// provable mismatch fails with the offending (i, j, alpha, beta).
inline SquareReport validate_square(const Complex& cx, const Square& s) {
  SquareReport rep;
  for (int i = 1; i <= s.k + 1; ++i)
    for (int sg : {-1, +1})
      if (!s.face(i, sg) || s.face(i, sg)->dim != s.k) {
        rep.ok = false;
        rep.message = "face (" + std::to_string(i) + (sg > 0 ? "+" : "-") +
                      ") missing or of wrong dimension";
        return rep;
      }
  for (int i = 1; i <= s.k + 1; ++i)
    for (int j = i + 1; j <= s.k + 1; ++j)
      for (int alpha : {-1, +1})
        for (int beta : {-1, +1}) {
          CellPtr lhs = face(cx, s.face(j, beta), i, alpha);
          CellPtr rhs = face(cx, s.face(i, alpha), j - 1, beta);
          if (equal(cx, lhs, rhs) == Verdict::Unequal) {
            rep.ok = false;
            rep.i = i;
            rep.j = j;
            rep.alpha = alpha;
            rep.beta = beta;
            rep.message = "square equation fails at (i=" + std::to_string(i) +
                          ", j=" + std::to_string(j) + ", alpha=" + (alpha > 0 ? "+" : "-") +
                          ", beta=" + std::string(beta > 0 ? "+" : "-") + "): " + show(cx, lhs) +
                          " vs " + show(cx, rhs);
            return rep;
          }
        }
  return rep;
}

/// Componentwise square comparison under tiered equality.
inline Verdict square_equal(const Complex& cx, const Square& a, const Square& b) {
  if (a.k != b.k) throw DimensionMismatch("square_equal: dimensions differ");
  Verdict v = Verdict::Equal;
  for (int i = 1; i <= a.k + 1; ++i)
    for (int sg : {-1, +1}) v = meet(v, equal(cx, a.face(i, sg), b.face(i, sg)));
  return v;
}

inline Verdict boundary_equal(const Complex& cx, const CellPtr& a, const CellPtr& b) {
  if (a->dim != b->dim) throw DimensionMismatch("boundary_equal: dimensions differ");
  return square_equal(cx, boundary(cx, a), boundary(cx, b));
}

}  // namespace cubical

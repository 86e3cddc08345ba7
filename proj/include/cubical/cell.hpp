#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubical/ars.hpp"
#include "cubical/errors.hpp"

namespace cubical {

struct Cell;
using CellPtr = std::shared_ptr<const Cell>;

/// Node kinds of the cell expression language.
enum class Op : std::uint8_t {
  Vertex,  // 0-generator
  Edge,    // 1-generator
  Gen,     // k-generator A_k<f1,...,fk>, k >= 2
  Formal,  // formal cell with prescribed boundary square
  Eps,     // degeneracy eps_i
  Conn,    // connection Gamma_i^sign
  Comp,    // composition a o_i b
  Inv,     // inversion R_i
  Transp,  // transposition T_i
};

/// A k-square: one k-cell per direction 1..k+1 and sign.
/// Index signs with -1 / +1.
struct Square {
  int k = 0;
  std::vector<std::array<CellPtr, 2>> faces;  // faces[i-1][0] = minus, [1] = plus

  const CellPtr& face(int i, int sign) const {
    if (i < 1 || i > k + 1) throw IndexOutOfRange("square face index out of range");
    return faces[static_cast<std::size_t>(i - 1)][sign > 0 ? 1 : 0];
  }
  CellPtr& face(int i, int sign) {
    if (i < 1 || i > k + 1) throw IndexOutOfRange("square face index out of range");
    return faces[static_cast<std::size_t>(i - 1)][sign > 0 ? 1 : 0];
  }

  static Square make(int k) {
    Square s;
    s.k = k;
    s.faces.resize(static_cast<std::size_t>(k) + 1);
    return s;
  }
};

using SquarePtr = std::shared_ptr<const Square>;

/// An immutable, hash-consed cell expression. Structural equality of
/// interned cells is pointer equality.
struct Cell {
  Op op;
  int dim = 0;
  int index = 0;  // direction for Eps/Conn/Comp/Inv/Transp
  int sign = 0;   // -1/+1 for Conn
  CellPtr a, b;   // children (a only, or a and b for Comp)
  VertexId vertex = 0;
  EdgeId edge = 0;
  std::vector<Path> legs;  // Gen
  SquarePtr square;        // Formal
  std::string label;       // Formal
  std::size_t hash = 0;
};

namespace detail {

inline void hash_mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
}

inline std::size_t cell_hash(const Cell& c) {
  std::size_t h = static_cast<std::size_t>(c.op);
  hash_mix(h, static_cast<std::size_t>(c.dim));
  hash_mix(h, static_cast<std::size_t>(c.index));
  hash_mix(h, static_cast<std::size_t>(c.sign + 2));
  hash_mix(h, std::hash<const Cell*>()(c.a.get()));
  hash_mix(h, std::hash<const Cell*>()(c.b.get()));
  hash_mix(h, c.vertex);
  hash_mix(h, c.edge);
  for (const auto& p : c.legs) {
    hash_mix(h, p.start);
    for (EdgeId e : p.steps) hash_mix(h, e + 1);
    hash_mix(h, 0xabcd);
  }
  if (c.square) {
    hash_mix(h, static_cast<std::size_t>(c.square->k));
    for (const auto& f : c.square->faces) {
      hash_mix(h, std::hash<const Cell*>()(f[0].get()));
      hash_mix(h, std::hash<const Cell*>()(f[1].get()));
    }
  }
  hash_mix(h, std::hash<std::string>()(c.label));
  return h;
}

inline bool square_content_eq(const SquarePtr& x, const SquarePtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->k != y->k) return false;
  for (std::size_t i = 0; i < x->faces.size(); ++i)
    if (x->faces[i][0] != y->faces[i][0] || x->faces[i][1] != y->faces[i][1]) return false;
  return true;
}

inline bool cell_content_eq(const Cell& x, const Cell& y) {
  return x.op == y.op && x.dim == y.dim && x.index == y.index && x.sign == y.sign &&
         x.a == y.a && x.b == y.b && x.vertex == y.vertex && x.edge == y.edge &&
         x.legs == y.legs && square_content_eq(x.square, y.square) && x.label == y.label;
}

inline CellPtr intern(Cell&& c) {
  c.hash = cell_hash(c);
  static std::mutex mu;
  static std::unordered_map<std::size_t, std::vector<CellPtr>> table;
  std::lock_guard<std::mutex> lock(mu);
  auto& bucket = table[c.hash];
  for (const auto& p : bucket)
    if (cell_content_eq(*p, c)) return p;
  auto p = std::make_shared<Cell>(std::move(c));
  bucket.push_back(p);
  return p;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors. `mk_*` builders check index ranges but not composability;
// `compose` (equality.hpp) adds the boundary check.
// ---------------------------------------------------------------------------

inline CellPtr vertex_cell(VertexId v) {
  Cell c;
  c.op = Op::Vertex;
  c.dim = 0;
  c.vertex = v;
  return detail::intern(std::move(c));
}

inline CellPtr edge_cell(const RewritingSystem& rs, EdgeId e) {
  if (e >= rs.edge_count()) throw Error("edge_cell: unknown edge");
  Cell c;
  c.op = Op::Edge;
  c.dim = 1;
  c.edge = e;
  return detail::intern(std::move(c));
}

inline CellPtr mk_eps(int i, const CellPtr& sub) {
  if (i < 1 || i > sub->dim + 1) throw IndexOutOfRange("eps: index out of range");
  Cell c;
  c.op = Op::Eps;
  c.dim = sub->dim + 1;
  c.index = i;
  c.a = sub;
  return detail::intern(std::move(c));
}

inline CellPtr mk_conn(int i, int sign, const CellPtr& sub) {
  if (sub->dim < 1) throw IndexOutOfRange("conn: argument must have dimension >= 1");
  if (i < 1 || i > sub->dim) throw IndexOutOfRange("conn: index out of range");
  if (sign != -1 && sign != 1) throw Error("conn: sign must be -1 or +1");
  Cell c;
  c.op = Op::Conn;
  c.dim = sub->dim + 1;
  c.index = i;
  c.sign = sign;
  c.a = sub;
  return detail::intern(std::move(c));
}

inline CellPtr mk_comp(int i, const CellPtr& x, const CellPtr& y) {
  if (x->dim != y->dim) throw DimensionMismatch("comp: dimensions differ");
  if (i < 1 || i > x->dim) throw IndexOutOfRange("comp: index out of range");
  Cell c;
  c.op = Op::Comp;
  c.dim = x->dim;
  c.index = i;
  c.a = x;
  c.b = y;
  return detail::intern(std::move(c));
}

inline CellPtr mk_inv(int i, const CellPtr& sub) {
  if (i < 1 || i > sub->dim) throw IndexOutOfRange("inv: index out of range");
  Cell c;
  c.op = Op::Inv;
  c.dim = sub->dim;
  c.index = i;
  c.a = sub;
  return detail::intern(std::move(c));
}

inline CellPtr mk_transp(int i, const CellPtr& sub) {
  if (i < 1 || i > sub->dim - 1) throw IndexOutOfRange("transp: index out of range");
  Cell c;
  c.op = Op::Transp;
  c.dim = sub->dim;
  c.index = i;
  c.a = sub;
  return detail::intern(std::move(c));
}

inline CellPtr formal_cell(const Square& s, const std::string& label) {
  Cell c;
  c.op = Op::Formal;
  c.dim = s.k + 1;
  c.square = std::make_shared<Square>(s);
  c.label = label;
  return detail::intern(std::move(c));
}

/// A path as a 1-cell: the empty path is the degenerate 1-cell.
inline CellPtr path_cell(const RewritingSystem& rs, const Path& p) {
  p.validate(rs);
  if (p.steps.empty()) return mk_eps(1, vertex_cell(p.start));
  CellPtr acc = edge_cell(rs, p.steps.back());
  for (std::size_t i = p.steps.size() - 1; i-- > 0;)
    acc = mk_comp(1, edge_cell(rs, p.steps[i]), acc);
  return acc;
}

inline CellPtr zigzag_cell(const RewritingSystem& rs, const Zigzag& z) {
  z.validate(rs);
  if (z.steps.empty()) return mk_eps(1, vertex_cell(z.start));
  auto step_cell = [&](const ZStep& s) {
    CellPtr e = edge_cell(rs, s.edge);
    return s.forward ? e : mk_inv(1, e);
  };
  CellPtr acc = step_cell(z.steps.back());
  for (std::size_t i = z.steps.size() - 1; i-- > 0;) acc = mk_comp(1, step_cell(z.steps[i]), acc);
  return acc;
}

/// The k-generator A_k<f1,...,fk>. Legs must be nonempty, share their source
/// and strictly increase in the path order.
inline CellPtr gen_cell(const Complex& cx, std::vector<Path> legs) {
  if (legs.size() < 2) throw IllTyped("gen: needs at least two legs");
  for (const auto& p : legs) {
    p.validate(cx.rs);
    if (p.empty()) throw IllTyped("gen: legs must be nonempty");
  }
  for (std::size_t i = 0; i + 1 < legs.size(); ++i) {
    if (legs[i].start != legs[i + 1].start)
      throw DifferentSources("gen: legs must share their source");
    if (path_compare(cx.rs, legs[i], legs[i + 1]) >= 0)
      throw IllTyped("gen: legs must be strictly increasing");
  }
  Cell c;
  c.op = Op::Gen;
  c.dim = static_cast<int>(legs.size());
  c.legs = std::move(legs);
  return detail::intern(std::move(c));
}

// ---------------------------------------------------------------------------
// Dimension and faces
// ---------------------------------------------------------------------------

inline int dim(const CellPtr& c) { return c->dim; }

/// Face computation. Implements the boundary rules for degeneracies,
/// connections, compositions, inversions and transpositions, the generator
/// faces of the resolution, and formal cells reading faces off their square.
inline CellPtr face(const Complex& cx, const CellPtr& c, int i, int sign) {
  if (c->dim < 1) throw IndexOutOfRange("face: cell has dimension 0");
  if (i < 1 || i > c->dim) throw IndexOutOfRange("face: index out of range");
  if (sign != -1 && sign != 1) throw Error("face: sign must be -1 or +1");
  switch (c->op) {
    case Op::Vertex:
      throw IndexOutOfRange("face: vertex");
    case Op::Edge:
      return vertex_cell(sign < 0 ? cx.rs.source(c->edge) : cx.rs.target(c->edge));
    case Op::Gen: {
      int k = c->dim;
      if (sign < 0) {
        std::vector<Path> rest = c->legs;
        rest.erase(rest.begin() + (i - 1));
        if (rest.size() == 1) return path_cell(cx.rs, rest.front());
        Cell g;
        g.op = Op::Gen;
        g.dim = k - 1;
        g.legs = std::move(rest);
        return detail::intern(std::move(g));
      }
      VertexId t = c->legs[static_cast<std::size_t>(i - 1)].end(cx.rs);
      CellPtr f = path_cell(cx.rs, cx.sigma(t));
      for (int j = 1; j <= k - 2; ++j) f = mk_conn(j, -1, f);
      return f;
    }
    case Op::Formal:
      return c->square->face(i, sign);
    case Op::Eps: {
      int j = c->index;
      if (i < j) return mk_eps(j - 1, face(cx, c->a, i, sign));
      if (i == j) return c->a;
      return mk_eps(j, face(cx, c->a, i - 1, sign));
    }
    case Op::Conn: {
      int j = c->index;
      if (i < j) return mk_conn(j - 1, c->sign, face(cx, c->a, i, sign));
      if (i == j || i == j + 1) {
        if (sign == c->sign) return c->a;
        return mk_eps(j, face(cx, c->a, j, sign));
      }
      return mk_conn(j, c->sign, face(cx, c->a, i - 1, sign));
    }
    case Op::Comp: {
      int j = c->index;
      if (i < j) return mk_comp(j - 1, face(cx, c->a, i, sign), face(cx, c->b, i, sign));
      if (i == j) return sign < 0 ? face(cx, c->a, i, -1) : face(cx, c->b, i, +1);
      return mk_comp(j, face(cx, c->a, i, sign), face(cx, c->b, i, sign));
    }
    case Op::Inv: {
      int j = c->index;
      if (i < j) return mk_inv(j - 1, face(cx, c->a, i, sign));
      if (i == j) return face(cx, c->a, i, -sign);
      return mk_inv(j, face(cx, c->a, i, sign));
    }
    case Op::Transp: {
      int j = c->index;
      if (i < j) return mk_transp(j - 1, face(cx, c->a, i, sign));
      if (i == j) return face(cx, c->a, i + 1, sign);
      if (i == j + 1) return face(cx, c->a, i - 1, sign);
      return mk_transp(j, face(cx, c->a, i, sign));
    }
  }
  throw Error("face: unreachable");
}

/// The boundary square of a cell of dimension >= 1.
inline Square boundary(const Complex& cx, const CellPtr& c) {
  if (c->dim < 1) throw IndexOutOfRange("boundary: cell has dimension 0");
  Square s = Square::make(c->dim - 1);
  for (int i = 1; i <= c->dim; ++i) {
    s.face(i, -1) = face(cx, c, i, -1);
    s.face(i, +1) = face(cx, c, i, +1);
  }
  return s;
}

/// True iff every maximal-dimension contribution comes from a degeneracy or
/// connection; closed under composition, inversion and transposition.
inline bool is_thin(const CellPtr& c) {
  switch (c->op) {
    case Op::Eps:
    case Op::Conn:
      return true;
    case Op::Comp:
      return is_thin(c->a) && is_thin(c->b);
    case Op::Inv:
    case Op::Transp:
      return is_thin(c->a);
    default:
      return false;
  }
}

/// Converts a 1-dimensional cell to the zigzag it denotes.
inline Zigzag zigzag_of_cell(const Complex& cx, const CellPtr& c) {
  if (c->dim != 1) throw DimensionMismatch("zigzag_of_cell: cell must have dimension 1");
  switch (c->op) {
    case Op::Edge:
      return Zigzag{cx.rs.source(c->edge), {{c->edge, true}}};
    case Op::Eps:
      return Zigzag{c->a->vertex, {}};
    case Op::Comp: {
      Zigzag za = zigzag_of_cell(cx, c->a);
      Zigzag zb = zigzag_of_cell(cx, c->b);
      if (za.end(cx.rs) != zb.start)
        throw NotComposable("zigzag_of_cell: endpoints do not meet");
      for (const auto& s : zb.steps) za.steps.push_back(s);
      return za;
    }
    case Op::Inv: {
      Zigzag z = zigzag_of_cell(cx, c->a);
      Zigzag r{z.end(cx.rs), {}};
      for (auto it = z.steps.rbegin(); it != z.steps.rend(); ++it)
        r.steps.push_back({it->edge, !it->forward});
      return r;
    }
    case Op::Formal:
      throw IllTyped("zigzag_of_cell: formal 1-cell has no zigzag value");
    default:
      throw IllTyped("zigzag_of_cell: unexpected node at dimension 1");
  }
}

/// Reduced zigzag of a 1-cell.
inline Zigzag reduced_zigzag(const Complex& cx, const CellPtr& c) {
  return reduce_zigzag(cx.rs, zigzag_of_cell(cx, c));
}

/// A 1-cell is a forward path when its reduced zigzag has no backward step.
inline std::optional<Path> path_of_cell(const Complex& cx, const CellPtr& c) {
  Zigzag z = reduced_zigzag(cx, c);
  Path p{z.start, {}};
  for (const auto& s : z.steps) {
    if (!s.forward) return std::nullopt;
    p.steps.push_back(s.edge);
  }
  return p;
}

/// Debug rendering, s-expression style.
inline std::string show(const Complex& cx, const CellPtr& c) {
  switch (c->op) {
    case Op::Vertex:
      return cx.rs.vertex_name(c->vertex);
    case Op::Edge:
      return cx.rs.edge_name(c->edge);
    case Op::Gen: {
      std::string s = "A" + std::to_string(c->dim) + "<";
      for (std::size_t i = 0; i < c->legs.size(); ++i) {
        if (i) s += ",";
        s += c->legs[i].show(cx.rs);
      }
      return s + ">";
    }
    case Op::Formal:
      return "[formal " + c->label + "]";
    case Op::Eps:
      return "eps" + std::to_string(c->index) + "(" + show(cx, c->a) + ")";
    case Op::Conn:
      return std::string("gamma") + std::to_string(c->index) + (c->sign > 0 ? "+" : "-") + "(" +
             show(cx, c->a) + ")";
    case Op::Comp:
      return "(" + show(cx, c->a) + " o" + std::to_string(c->index) + " " + show(cx, c->b) + ")";
    case Op::Inv:
      return "R" + std::to_string(c->index) + "(" + show(cx, c->a) + ")";
    case Op::Transp:
      return "T" + std::to_string(c->index) + "(" + show(cx, c->a) + ")";
  }
  return "?";
}

}  // namespace cubical

#pragma once

#include <memory>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "cubical/polygraph.hpp"

namespace cubical {

/// Certificate data produced by fill_square: the folded square, its two
/// direction-1 faces, the contraction filler A and the unfolded filler B.
struct FillCertificate {
  Square square;
  Square folded;
  CellPtr g_minus;
  CellPtr g_plus;
  CellPtr a;
  CellPtr b;
  bool verified = false;
};

/// The contraction sigma generated by the normalisation strategy: a total
/// dimension-raising map on cells over the generated polygraph, with the
/// generator images fixed by the sigma-extension formulas. Re-sectioned
/// contractions compose the base sigma with the reversed strategy path of
/// the new representative.
class Contraction {
 public:
  Contraction(const Complex& cx, GeneratorTable table, int max_fill_dim = 4)
      : cx_(cx), table_(std::move(table)), max_fill_dim_(max_fill_dim) {}

  const Complex& complex() const { return cx_; }
  const GeneratorTable& table() const { return table_; }
  int max_fill_dim() const { return max_fill_dim_; }

  /// sigma_f. Memoised; recognises previously produced sigma-images so that
  /// sigma of sigma_f is the thin cell Gamma_1^- sigma_f.
  CellPtr sigma(const CellPtr& f) const {
    {
      std::lock_guard<std::mutex> lock(*mu_);
      if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
      if (images_.count(f.get())) {
        CellPtr r = mk_conn(1, -1, f);
        memo_[f.get()] = r;
        return r;
      }
    }
    CellPtr r = resected_ ? mk_comp(1, sigma_base(f), resection_tail(f)) : sigma_base(f);
    std::lock_guard<std::mutex> lock(*mu_);
    memo_[f.get()] = r;
    images_.insert(r.get());
    return r;
  }

  /// The square f^del: direction 1 runs from f to the degenerate cell on the
  /// section's representative, the other directions are sigma of the faces.
  Square boundary_square(const CellPtr& f) const {
    if (f->dim < 1) throw DimensionMismatch("boundary_square: use boundary_square0 at dim 0");
    int k = f->dim;
    Square s = Square::make(k);
    s.face(1, -1) = f;
    CellPtr corner = f;
    for (int i = 0; i < k; ++i) corner = face(cx_, corner, 1, -1);
    CellPtr rep = vertex_cell(representative(corner->vertex));
    CellPtr tower = rep;
    for (int i = 1; i <= k; ++i) tower = mk_eps(i, tower);
    s.face(1, +1) = tower;
    for (int i = 2; i <= k + 1; ++i) {
      s.face(i, -1) = sigma(face(cx_, f, i - 1, -1));
      s.face(i, +1) = sigma(face(cx_, f, i - 1, +1));
    }
    return s;
  }

  /// The 0-square (x, rep(x)).
  std::pair<CellPtr, CellPtr> boundary_square0(const CellPtr& v) const {
    if (v->dim != 0) throw DimensionMismatch("boundary_square0: expects a 0-cell");
    return {v, vertex_cell(representative(v->vertex))};
  }

  /// Fills a valid square: fold, contract the two direction-1 faces, unfold.
  FillCertificate fill_square(const Square& s) const {
    int m = s.k + 1;
    if (m > max_fill_dim_)
      throw Error("fill_square: dimension " + std::to_string(m) + " exceeds bound " +
                  std::to_string(max_fill_dim_));
    auto rep = validate_square(cx_, s);
    if (!rep.ok) throw InvalidSquare("fill_square: " + rep.message);
    FillCertificate cert;
    cert.square = s;
    if (m == 1) {
      cert.folded = s;
      cert.g_minus = s.face(1, -1);
      cert.g_plus = s.face(1, +1);
      cert.a = mk_comp(1, sigma(cert.g_minus), mk_inv(1, sigma(cert.g_plus)));
      cert.b = cert.a;
    } else {
      cert.folded = fold_square_Phi(cx_, m, s);
      cert.g_minus = cert.folded.face(1, -1);
      cert.g_plus = cert.folded.face(1, +1);
      cert.a = mk_comp(1, sigma(cert.g_minus), mk_inv(1, sigma(cert.g_plus)));
      cert.b = unfold_Phi(cx_, m, s, cert.a);
    }
    Square back = boundary(cx_, cert.b);
    cert.verified = validate_square(cx_, back).ok && square_equal(cx_, back, s) != Verdict::Unequal;
    return cert;
  }

  /// Re-sections the contraction to new representatives (constant on the
  /// connected components). tau_f = sigma_f o_1 eps-lift(R_1 sigma_{rep}).
  Contraction resection(const std::map<VertexId, VertexId>& reps) const {
    Contraction c(cx_, table_, max_fill_dim_);
    for (VertexId v = 0; v < cx_.rs.vertex_count(); ++v) {
      auto it = reps.find(v);
      if (it == reps.end()) throw InvalidSection("resection: missing representative for vertex " +
                                                 cx_.rs.vertex_name(v));
      if (cx_.normal_form(it->second) != cx_.normal_form(v))
        throw InvalidSection("resection: " + cx_.rs.vertex_name(it->second) +
                             " is not in the component of " + cx_.rs.vertex_name(v));
    }
    c.resected_ = true;
    c.reps_ = reps;
    return c;
  }

  bool is_resected() const { return resected_; }

  VertexId representative(VertexId v) const {
    if (resected_) return reps_.at(v);
    return cx_.normal_form(v);
  }

  /// Looks up a generator key, failing with MissingGenerator otherwise.
  CellPtr require_generator(const std::vector<Path>& legs) const {
    int k = static_cast<int>(legs.size());
    if (!table_.contains(k, legs)) {
      std::string names;
      for (const auto& p : legs) names += " " + p.show(cx_.rs);
      throw MissingGenerator("generator A" + std::to_string(k) + "<" + names +
                             " > is not in the table (mode/bound/max-dim too small)");
    }
    return gen_cell(cx_, legs);
  }

 private:
  CellPtr sigma_base(const CellPtr& f) const {
    switch (f->op) {
      case Op::Vertex:
        return path_cell(cx_.rs, cx_.sigma(f->vertex));
      case Op::Edge: {
        VertexId x = cx_.rs.source(f->edge);
        EdgeId eta = *cx_.eta(x);
        VertexId xp = cx_.rs.target(eta);
        CellPtr sig_xp = path_cell(cx_.rs, cx_.sigma(xp));
        if (f->edge == eta) return mk_comp(1, mk_conn(1, -1, f), mk_eps(2, sig_xp));
        CellPtr gen = require_generator({Path{x, {eta}}, Path{x, {f->edge}}});
        return mk_comp(1, gen, mk_conn(1, -1, sig_xp));
      }
      case Op::Gen: {
        int k = f->dim;
        VertexId x = f->legs.front().start;
        EdgeId eta = *cx_.eta(x);
        VertexId xp = cx_.rs.target(eta);
        CellPtr sig_xp = path_cell(cx_.rs, cx_.sigma(xp));
        Path etap{x, {eta}};
        if (f->legs.front() == etap)
          return mk_comp(1, mk_conn(1, -1, f), mk_eps(2, conn_tower(sig_xp, k - 1)));
        std::vector<Path> legs{etap};
        for (const auto& p : f->legs) legs.push_back(p);
        CellPtr gen = require_generator(legs);
        return mk_comp(1, gen, conn_tower(sig_xp, k));
      }
      case Op::Eps:
        return mk_eps(f->index + 1, sigma(f->a));
      case Op::Conn:
        return mk_conn(f->index + 1, f->sign, sigma(f->a));
      case Op::Comp:
        return mk_comp(f->index + 1, sigma(f->a), sigma(f->b));
      case Op::Inv:
        return mk_inv(f->index + 1, sigma(f->a));
      case Op::Transp:
        return mk_transp(f->index + 1, sigma(f->a));
      case Op::Formal:
        throw IllTyped("sigma: formal cells are not over the generated polygraph");
    }
    throw Error("sigma: unreachable");
  }

  /// eps_{k+1} ... eps_2 (R_1 sigma_{rep(x)}) with x the all-minus corner.
  CellPtr resection_tail(const CellPtr& f) const {
    CellPtr corner = f;
    for (int i = 0; i < f->dim; ++i) corner = face(cx_, corner, 1, -1);
    CellPtr tail = mk_inv(1, path_cell(cx_.rs, cx_.sigma(reps_.at(corner->vertex))));
    for (int i = 2; i <= f->dim + 1; ++i) tail = mk_eps(i, tail);
    return tail;
  }

  const Complex& cx_;
  GeneratorTable table_;
  int max_fill_dim_;
  bool resected_ = false;
  std::map<VertexId, VertexId> reps_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  mutable std::unordered_map<const Cell*, CellPtr> memo_;
  mutable std::unordered_set<const Cell*> images_;
};

/// sigma of a table key, with the table-membership precondition checked.
inline CellPtr sigma_of_generator(const Contraction& c, const CellPtr& gen) {
  if (gen->op != Op::Gen) throw IllTyped("sigma_of_generator: expects a generator cell");
  if (!c.table().contains(gen->dim, gen->legs))
    throw MissingGenerator("sigma_of_generator: key not in table");
  return c.sigma(gen);
}

}  // namespace cubical

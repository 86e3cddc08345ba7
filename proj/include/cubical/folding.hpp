#pragma once

#include <string>

#include "cubical/equality.hpp"

namespace cubical {

// ---------------------------------------------------------------------------
// Folding maps psi_i, Psi_j, Phi_k and their unfoldings. They concentrate a
// square's data in direction 1 and rebuild fillers of the original square.
// ---------------------------------------------------------------------------

inline CellPtr fold_psi(const Complex& cx, int i, const CellPtr& c) {
  if (i < 1 || i > c->dim - 1) throw IndexOutOfRange("fold_psi: index out of range");
  CellPtr top = mk_conn(i, +1, face(cx, c, i + 1, -1));
  CellPtr bot = mk_conn(i, -1, face(cx, c, i + 1, +1));
  return mk_comp(i + 1, top, mk_comp(i + 1, c, bot));
}

inline CellPtr fold_Psi(const Complex& cx, int j, const CellPtr& c) {
  if (j < 1 || j > c->dim) throw IndexOutOfRange("fold_Psi: index out of range");
  CellPtr acc = c;
  for (int i = 1; i <= j - 1; ++i) acc = fold_psi(cx, i, acc);
  return acc;
}

/// Phi_k = Psi_1 Psi_2 ... Psi_k, innermost first.
inline CellPtr fold_Phi(const Complex& cx, int k, const CellPtr& c) {
  if (k < 0 || k > c->dim) throw IndexOutOfRange("fold_Phi: index out of range");
  CellPtr acc = c;
  for (int j = k; j >= 1; --j) acc = fold_Psi(cx, j, acc);
  return acc;
}

/// Square-level folding: fold a formal filler and read off its boundary.
inline Square fold_square_psi(const Complex& cx, int i, const Square& s) {
  return boundary(cx, fold_psi(cx, i, formal_cell(s, "fold")));
}

inline Square fold_square_Psi(const Complex& cx, int j, const Square& s) {
  return boundary(cx, fold_Psi(cx, j, formal_cell(s, "fold")));
}

inline Square fold_square_Phi(const Complex& cx, int k, const Square& s) {
  if (k == 0) return s;
  return boundary(cx, fold_Phi(cx, k, formal_cell(s, "fold")));
}

namespace detail {

inline void require_fold_match(const Complex& cx, const Square& folded, const CellPtr& a,
                               const char* what) {
  if (a->dim != folded.k + 1) throw FoldMismatch(std::string(what) + ": dimension mismatch");
  if (square_equal(cx, boundary(cx, a), folded) == Verdict::Unequal)
    throw FoldMismatch(std::string(what) + ": filler boundary is not the folded square");
}

inline CellPtr unfold_psi_raw(const Complex&, int i, const Square& s, const CellPtr& a) {
  CellPtr row_top = mk_comp(i + 1, mk_eps(i, s.face(i, -1)), mk_conn(i, +1, s.face(i + 1, +1)));
  CellPtr row_bot = mk_comp(i + 1, mk_conn(i, -1, s.face(i + 1, -1)), mk_eps(i, s.face(i, +1)));
  return mk_comp(i, row_top, mk_comp(i, a, row_bot));
}

inline CellPtr unfold_Psi_raw(const Complex& cx, int j, const Square& s, const CellPtr& a) {
  if (j == 1) return a;
  return unfold_Psi_raw(cx, j - 1, s,
                        unfold_psi_raw(cx, j - 1, fold_square_Psi(cx, j - 1, s), a));
}

inline CellPtr unfold_Phi_raw(const Complex& cx, int k, const Square& s, const CellPtr& a) {
  if (k == 0) return a;
  return unfold_Psi_raw(cx, k, s, unfold_Phi_raw(cx, k - 1, fold_square_Psi(cx, k, s), a));
}

}  // namespace detail

/// Unfolding maps; each checks that the filler's boundary is the folded
/// square before rebuilding a filler of `s`.
inline CellPtr unfold_psi(const Complex& cx, int i, const Square& s, const CellPtr& a) {
  if (i < 1 || i > s.k) throw IndexOutOfRange("unfold_psi: index out of range");
  detail::require_fold_match(cx, fold_square_psi(cx, i, s), a, "unfold_psi");
  return detail::unfold_psi_raw(cx, i, s, a);
}

inline CellPtr unfold_Psi(const Complex& cx, int j, const Square& s, const CellPtr& a) {
  if (j < 1 || j > s.k + 1) throw IndexOutOfRange("unfold_Psi: index out of range");
  detail::require_fold_match(cx, fold_square_Psi(cx, j, s), a, "unfold_Psi");
  return detail::unfold_Psi_raw(cx, j, s, a);
}

inline CellPtr unfold_Phi(const Complex& cx, int k, const Square& s, const CellPtr& a) {
  if (k < 0 || k > s.k + 1) throw IndexOutOfRange("unfold_Phi: index out of range");
  detail::require_fold_match(cx, fold_square_Phi(cx, k, s), a, "unfold_Phi");
  return detail::unfold_Phi_raw(cx, k, s, a);
}

/// Fills a square whose folded direction-1 faces agree with a degenerate
/// cell; squares with thin faces always qualify.
inline CellPtr thin_fill(const Complex& cx, const Square& s) {
  int m = s.k + 1;
  Square t = fold_square_Phi(cx, m, s);
  if (equal(cx, t.face(1, -1), t.face(1, +1)) == Verdict::Unequal)
    throw IllTyped("thin_fill: folded square has distinct direction-1 faces");
  CellPtr b = mk_eps(1, t.face(1, -1));
  return detail::unfold_Phi_raw(cx, m, s, b);
}

}  // namespace cubical

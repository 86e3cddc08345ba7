#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cubical/folding.hpp"

namespace cubical {

enum class TableMode { Paths, Local };

inline std::string encode_legs(const std::vector<Path>& legs) {
  std::string s;
  for (const auto& p : legs) {
    s += std::to_string(p.start);
    s += ":";
    for (EdgeId e : p.steps) {
      s += std::to_string(e);
      s += ",";
    }
    s += "|";
  }
  return s;
}

/// The cellular extensions C_k(X): per dimension, the index of generator
/// keys A_k<f1,...,fk> with strictly increasing legs out of a common source.
struct GeneratorTable {
  TableMode mode = TableMode::Paths;
  int max_dim = 2;
  std::size_t path_bound = 0;
  bool truncated = false;
  // dimension -> encoded key -> legs; map keeps deterministic order.
  std::map<int, std::map<std::string, std::vector<Path>>> keys;

  bool contains(int k, const std::vector<Path>& legs) const {
    auto it = keys.find(k);
    if (it == keys.end()) return false;
    return it->second.count(encode_legs(legs)) > 0;
  }

  std::size_t size(int k) const {
    auto it = keys.find(k);
    return it == keys.end() ? 0 : it->second.size();
  }
};

/// Longest path length in the (acyclic) graph; the default enumeration bound.
inline std::size_t longest_path_length(const RewritingSystem& rs) {
  if (!is_noetherian(rs)) throw NotNoetherian("longest_path_length: cyclic system");
  std::vector<int> depth(rs.vertex_count(), -1);
  std::function<int(VertexId)> go = [&](VertexId v) {
    if (depth[v] >= 0) return depth[v];
    int best = 0;
    for (EdgeId e : rs.outgoing(v)) best = std::max(best, 1 + go(rs.target(e)));
    return depth[v] = best;
  };
  int m = 0;
  for (VertexId v = 0; v < rs.vertex_count(); ++v) m = std::max(m, go(v));
  return static_cast<std::size_t>(m);
}

/// Builds the generator table up to `max_dim`. Paths mode indexes tuples of
/// rewriting paths bounded by `path_bound` (0 picks the longest-path bound);
/// local mode indexes single steps only.
inline GeneratorTable generate(const Complex& cx, int max_dim, TableMode mode,
                               std::size_t path_bound = 0) {
  GeneratorTable t;
  t.mode = mode;
  t.max_dim = max_dim;
  if (mode == TableMode::Paths && path_bound == 0) path_bound = longest_path_length(cx.rs);
  t.path_bound = path_bound;
  for (VertexId v = 0; v < cx.rs.vertex_count(); ++v) {
    std::vector<Path> legs;
    if (mode == TableMode::Paths) {
      legs = paths_from(cx.rs, v, path_bound);
    } else {
      for (EdgeId e : cx.rs.outgoing(v)) legs.push_back(Path{v, {e}});
    }
    for (int k = 2; k <= max_dim; ++k) {
      if (legs.size() < static_cast<std::size_t>(k)) continue;
      std::vector<std::size_t> idx(static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      while (true) {
        std::vector<Path> key;
        for (std::size_t i : idx) key.push_back(legs[i]);
        t.keys[k][encode_legs(key)] = key;
        std::size_t i = idx.size();
        while (i > 0) {
          --i;
          if (idx[i] != i + legs.size() - idx.size()) break;
          if (i == 0) { i = idx.size(); break; }
        }
        if (i == idx.size()) break;
        ++idx[i];
        for (std::size_t j = i + 1; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }
  return t;
}

/// Structural substitution of generator cells by their replacements.
inline CellPtr replace_generators(const Complex& cx, const CellPtr& c,
                                  const std::map<std::string, CellPtr>& repl) {
  switch (c->op) {
    case Op::Vertex:
    case Op::Edge:
      return c;
    case Op::Gen: {
      auto it = repl.find(std::to_string(c->dim) + "#" + encode_legs(c->legs));
      if (it != repl.end()) return it->second;
      return c;
    }
    case Op::Formal: {
      Square s = *c->square;
      for (auto& pair : s.faces)
        for (auto& f : pair)
          if (f) f = replace_generators(cx, f, repl);
      return formal_cell(s, c->label);
    }
    case Op::Eps:
      return mk_eps(c->index, replace_generators(cx, c->a, repl));
    case Op::Conn:
      return mk_conn(c->index, c->sign, replace_generators(cx, c->a, repl));
    case Op::Comp:
      return mk_comp(c->index, replace_generators(cx, c->a, repl),
                     replace_generators(cx, c->b, repl));
    case Op::Inv:
      return mk_inv(c->index, replace_generators(cx, c->a, repl));
    case Op::Transp:
      return mk_transp(c->index, replace_generators(cx, c->a, repl));
  }
  return c;
}

/// Gamma_n^- ... Gamma_1^- applied to a cell.
inline CellPtr conn_tower(const CellPtr& c, int n) {
  CellPtr acc = c;
  for (int i = 1; i <= n; ++i) acc = mk_conn(i, -1, acc);
  return acc;
}

/// The replacement 2-cell for a removed key A2<f1,f2> with f1, f2 != eta_x:
/// a pasting over the kept generators A2<eta_x, fi>.
inline CellPtr homotopy_replacement2(const Complex& cx, const Path& f1, const Path& f2) {
  VertexId x = f1.start;
  auto eta = cx.eta(x);
  if (!eta) throw IllTyped("replacement: source vertex is a normal form");
  Path etap{x, {*eta}};
  VertexId xp = cx.rs.target(*eta);
  CellPtr a_eta_f2 = gen_cell(cx, {etap, f2});
  CellPtr a_eta_f1 = gen_cell(cx, {etap, f1});
  CellPtr sigma_xp = path_cell(cx.rs, cx.sigma(xp));
  CellPtr row1 = mk_comp(2, mk_conn(1, +1, path_cell(cx.rs, etap)), a_eta_f2);
  CellPtr row2 = mk_comp(2, mk_transp(1, a_eta_f1), mk_conn(1, -1, sigma_xp));
  return mk_comp(1, row1, row2);
}

struct TruncationResult {
  GeneratorTable table;
  // encoded "k#legs" -> replacement cell over the truncated polygraph
  std::map<std::string, CellPtr> replacements;
  // parallel listing with decoded keys, in deterministic order
  std::vector<std::pair<std::pair<int, std::vector<Path>>, CellPtr>> listing;
};

/// Truncates a local-mode table: keeps only the keys A2<eta_x, f> and maps
/// every removed key to a cell over the truncated polygraph with the same
/// (replaced) boundary. Dimension >= 3 replacements are thin.
inline TruncationResult truncate_table(const Complex& cx, const GeneratorTable& t) {
  if (t.mode != TableMode::Local)
    throw Error("truncate_table: requires a local-mode table");
  TruncationResult out;
  out.table.mode = TableMode::Local;
  out.table.max_dim = 2;
  out.table.truncated = true;
  out.table.path_bound = t.path_bound;

  auto is_eta_first = [&](const std::vector<Path>& legs) {
    auto eta = cx.eta(legs.front().start);
    return eta && legs.front().steps.size() == 1 && legs.front().steps.front() == *eta;
  };

  // Kept dimension-2 keys.
  if (auto it = t.keys.find(2); it != t.keys.end()) {
    for (const auto& [enc, legs] : it->second)
      if (is_eta_first(legs)) out.table.keys[2][enc] = legs;
  }

  // Removed dimension-2 keys first; higher keys substitute through them.
  if (auto it = t.keys.find(2); it != t.keys.end()) {
    for (const auto& [enc, legs] : it->second) {
      if (is_eta_first(legs)) continue;
      CellPtr r = homotopy_replacement2(cx, legs[0], legs[1]);
      out.replacements["2#" + enc] = r;
      out.listing.push_back({{2, legs}, r});
    }
  }

  // Dimension >= 3: fill the substituted boundary square with a thin cell.
  for (int k = 3; k <= t.max_dim; ++k) {
    auto it = t.keys.find(k);
    if (it == t.keys.end()) continue;
    for (const auto& [enc, legs] : it->second) {
      CellPtr key = gen_cell(cx, legs);
      Square s = boundary(cx, key);
      for (auto& pair : s.faces)
        for (auto& f : pair) f = replace_generators(cx, f, out.replacements);
      CellPtr r = thin_fill(cx, s);
      out.replacements[std::to_string(k) + "#" + enc] = r;
      out.listing.push_back({{k, legs}, r});
    }
  }
  return out;
}

}  // namespace cubical

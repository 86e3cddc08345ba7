#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cubical/errors.hpp"

namespace cubical {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// A finite 1-polygraph: named vertices, named directed edges, and a strict
/// total order on the outgoing edges of each vertex (the rule order).
class RewritingSystem {
 public:
  struct Edge {
    std::string name;
    VertexId src;
    VertexId tgt;
  };

  VertexId add_vertex(const std::string& name) {
    if (vertex_index_.count(name)) throw Error("duplicate vertex name: " + name);
    VertexId id = static_cast<VertexId>(vertex_names_.size());
    vertex_names_.push_back(name);
    vertex_index_[name] = id;
    out_edges_.emplace_back();
    return id;
  }

  EdgeId add_edge(const std::string& name, VertexId src, VertexId tgt) {
    if (edge_index_.count(name)) throw Error("duplicate edge name: " + name);
    EdgeId id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{name, src, tgt});
    edge_index_[name] = id;
    out_edges_[src].push_back(id);
    return id;
  }

  /// Replaces the rule order at a vertex. `order` must list exactly its
  /// outgoing edges.
  void set_rule_order(VertexId v, const std::vector<EdgeId>& order) {
    auto current = out_edges_[v];
    auto sorted = order;
    std::sort(current.begin(), current.end());
    std::sort(sorted.begin(), sorted.end());
    if (current != sorted)
      throw Error("rule order at vertex " + vertex_names_[v] +
                  " must list exactly its outgoing edges");
    out_edges_[v] = order;
  }

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::string& edge_name(EdgeId e) const { return edges_[e].name; }
  VertexId source(EdgeId e) const { return edges_[e].src; }
  VertexId target(EdgeId e) const { return edges_[e].tgt; }

  /// Outgoing edges of `v` in rule order.
  const std::vector<EdgeId>& outgoing(VertexId v) const { return out_edges_[v]; }

  /// Position of an edge in the rule order at its source.
  std::size_t rule_rank(EdgeId e) const {
    const auto& out = out_edges_[edges_[e].src];
    return static_cast<std::size_t>(std::find(out.begin(), out.end(), e) - out.begin());
  }

  std::optional<VertexId> find_vertex(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<EdgeId> find_edge(const std::string& name) const {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  bool is_normal_form(VertexId v) const { return out_edges_[v].empty(); }

 private:
  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
  std::vector<std::vector<EdgeId>> out_edges_;  // in rule order
};

/// A rewriting path: a composable, possibly empty sequence of forward edges.
struct Path {
  VertexId start = 0;
  std::vector<EdgeId> steps;

  bool empty() const { return steps.empty(); }
  std::size_t length() const { return steps.size(); }

  VertexId end(const RewritingSystem& rs) const {
    return steps.empty() ? start : rs.target(steps.back());
  }

  bool operator==(const Path& o) const { return start == o.start && steps == o.steps; }
  bool operator!=(const Path& o) const { return !(*this == o); }

  void validate(const RewritingSystem& rs) const {
    VertexId at = start;
    for (EdgeId e : steps) {
      if (rs.source(e) != at)
        throw NotComposable("path step " + rs.edge_name(e) + " does not start at " +
                            rs.vertex_name(at));
      at = rs.target(e);
    }
  }

  std::string show(const RewritingSystem& rs) const {
    if (steps.empty()) return "1_" + rs.vertex_name(start);
    std::string s;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i) s += "*";
      s += rs.edge_name(steps[i]);
    }
    return s;
  }
};

/// One step of a zigzag: an edge traversed forwards or backwards.
struct ZStep {
  EdgeId edge;
  bool forward;
  bool operator==(const ZStep& o) const { return edge == o.edge && forward == o.forward; }
};

/// A zigzag in the free groupoid on the graph.
struct Zigzag {
  VertexId start = 0;
  std::vector<ZStep> steps;

  bool empty() const { return steps.empty(); }

  VertexId step_src(const RewritingSystem& rs, const ZStep& s) const {
    return s.forward ? rs.source(s.edge) : rs.target(s.edge);
  }
  VertexId step_tgt(const RewritingSystem& rs, const ZStep& s) const {
    return s.forward ? rs.target(s.edge) : rs.source(s.edge);
  }

  VertexId end(const RewritingSystem& rs) const {
    return steps.empty() ? start : step_tgt(rs, steps.back());
  }

  void validate(const RewritingSystem& rs) const {
    VertexId at = start;
    for (const auto& s : steps) {
      if (step_src(rs, s) != at)
        throw NotComposable("zigzag step " + rs.edge_name(s.edge) + " does not start at " +
                            rs.vertex_name(at));
      at = step_tgt(rs, s);
    }
  }

  bool operator==(const Zigzag& o) const { return start == o.start && steps == o.steps; }
  bool operator!=(const Zigzag& o) const { return !(*this == o); }

  std::string show(const RewritingSystem& rs) const {
    if (steps.empty()) return "1_" + rs.vertex_name(start);
    std::string s;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (i) s += "*";
      if (!steps[i].forward) s += "~";
      s += rs.edge_name(steps[i].edge);
    }
    return s;
  }

  static Zigzag of_path(const Path& p) {
    Zigzag z{p.start, {}};
    for (EdgeId e : p.steps) z.steps.push_back({e, true});
    return z;
  }
};

/// Cancels adjacent inverse pairs until none remain. Idempotent.
inline Zigzag reduce_zigzag(const RewritingSystem& rs, const Zigzag& z) {
  z.validate(rs);
  Zigzag out{z.start, {}};
  for (const auto& s : z.steps) {
    if (!out.steps.empty() && out.steps.back().edge == s.edge &&
        out.steps.back().forward != s.forward) {
      out.steps.pop_back();
    } else {
      out.steps.push_back(s);
    }
  }
  return out;
}

/// Strict total order on paths with a common source: first edges compared by
/// rule order, equal first edges recurse on tails, a strict prefix precedes
/// its extensions, the empty path is least.
/// Returns <0, 0 or >0.
inline int path_compare(const RewritingSystem& rs, const Path& p, const Path& q) {
  if (p.start != q.start)
    throw DifferentSources("path_order: sources differ (" + rs.vertex_name(p.start) + " vs " +
                           rs.vertex_name(q.start) + ")");
  std::size_t n = std::min(p.steps.size(), q.steps.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (p.steps[i] != q.steps[i]) {
      std::size_t rp = rs.rule_rank(p.steps[i]);
      std::size_t rq = rs.rule_rank(q.steps[i]);
      return rp < rq ? -1 : 1;
    }
  }
  if (p.steps.size() == q.steps.size()) return 0;
  return p.steps.size() < q.steps.size() ? -1 : 1;
}

inline bool path_less(const RewritingSystem& rs, const Path& p, const Path& q) {
  return path_compare(rs, p, q) < 0;
}

/// Verdict of the termination check: empty optional means Noetherian,
/// otherwise a directed cycle is returned as a witness path.
inline std::optional<Path> find_cycle(const RewritingSystem& rs) {
  enum { White, Grey, Black };
  std::vector<int> color(rs.vertex_count(), White);
  std::vector<EdgeId> stack_edges;
  std::vector<VertexId> stack_vertices;
  std::optional<Path> cycle;

  // Iterative DFS with an explicit stack of (vertex, next edge position).
  for (VertexId root = 0; root < rs.vertex_count() && !cycle; ++root) {
    if (color[root] != White) continue;
    std::vector<std::pair<VertexId, std::size_t>> st{{root, 0}};
    color[root] = Grey;
    stack_vertices = {root};
    stack_edges.clear();
    while (!st.empty() && !cycle) {
      auto& [v, pos] = st.back();
      const auto& out = rs.outgoing(v);
      if (pos == out.size()) {
        color[v] = Black;
        st.pop_back();
        stack_vertices.pop_back();
        if (!stack_edges.empty()) stack_edges.pop_back();
        continue;
      }
      EdgeId e = out[pos++];
      VertexId w = rs.target(e);
      if (color[w] == Grey) {
        // Found a back edge; slice the witness cycle out of the stack.
        auto it = std::find(stack_vertices.begin(), stack_vertices.end(), w);
        std::size_t idx = static_cast<std::size_t>(it - stack_vertices.begin());
        Path c{w, {}};
        for (std::size_t i = idx; i < stack_edges.size(); ++i) c.steps.push_back(stack_edges[i]);
        c.steps.push_back(e);
        cycle = c;
      } else if (color[w] == White) {
        color[w] = Grey;
        st.push_back({w, 0});
        stack_vertices.push_back(w);
        stack_edges.push_back(e);
      }
    }
  }
  return cycle;
}

inline bool is_noetherian(const RewritingSystem& rs) { return !find_cycle(rs).has_value(); }

/// The normalisation strategy of a convergent system: unique normal form,
/// the leftmost path to it, and the least rewriting step at each vertex.
struct Strategy {
  std::vector<VertexId> normal_form;            // per vertex
  std::vector<Path> sigma_path;                 // per vertex, ends at normal_form
  std::vector<std::optional<EdgeId>> eta;       // least outgoing edge, none at normal forms
};

/// Set of normal forms reachable from each vertex (memoised DFS).
inline std::vector<std::set<VertexId>> reachable_normal_forms(const RewritingSystem& rs) {
  std::vector<std::set<VertexId>> memo(rs.vertex_count());
  std::vector<bool> done(rs.vertex_count(), false);
  // Vertices in reverse topological order so all successors are done first.
  std::vector<VertexId> order;
  std::vector<int> indeg_done(rs.vertex_count(), 0);
  // Simple repeated passes; systems are small and acyclic at this point.
  std::vector<VertexId> pending;
  for (VertexId v = 0; v < rs.vertex_count(); ++v) pending.push_back(v);
  while (!pending.empty()) {
    bool progress = false;
    std::vector<VertexId> next;
    for (VertexId v : pending) {
      bool ready = true;
      for (EdgeId e : rs.outgoing(v))
        if (!done[rs.target(e)]) { ready = false; break; }
      if (!ready) { next.push_back(v); continue; }
      if (rs.outgoing(v).empty()) {
        memo[v] = {v};
      } else {
        for (EdgeId e : rs.outgoing(v)) {
          const auto& s = memo[rs.target(e)];
          memo[v].insert(s.begin(), s.end());
        }
      }
      done[v] = true;
      progress = true;
    }
    if (!progress) throw NotNoetherian("reachable_normal_forms requires an acyclic system");
    pending = std::move(next);
  }
  return memo;
}

/// Builds the strategy. Requires termination and unique normal forms; the
/// witnesses reported on failure are a cycle or a pair of distinct normal
/// forms with the offending source vertex.
inline Strategy strategy(const RewritingSystem& rs) {
  if (auto c = find_cycle(rs)) {
    throw NotNoetherian("system is not Noetherian: cycle " + c->show(rs));
  }
  auto nfs = reachable_normal_forms(rs);
  for (VertexId v = 0; v < rs.vertex_count(); ++v) {
    if (nfs[v].size() > 1) {
      auto it = nfs[v].begin();
      VertexId a = *it++;
      VertexId b = *it;
      throw NotConfluent("vertex " + rs.vertex_name(v) + " reaches distinct normal forms " +
                         rs.vertex_name(a) + " and " + rs.vertex_name(b));
    }
  }
  Strategy st;
  st.normal_form.resize(rs.vertex_count());
  st.sigma_path.resize(rs.vertex_count());
  st.eta.resize(rs.vertex_count());
  for (VertexId v = 0; v < rs.vertex_count(); ++v) {
    st.normal_form[v] = *nfs[v].begin();
    Path p{v, {}};
    VertexId at = v;
    while (!rs.outgoing(at).empty()) {
      EdgeId e = rs.outgoing(at).front();
      if (at == v) st.eta[v] = e;
      p.steps.push_back(e);
      at = rs.target(e);
    }
    st.sigma_path[v] = p;
  }
  return st;
}

/// Local confluence by joinability of every local branching.
/// Returns an offending peak if one exists.
inline std::optional<std::pair<EdgeId, EdgeId>> find_unjoinable_peak(const RewritingSystem& rs) {
  if (!is_noetherian(rs)) throw NotNoetherian("joinability check requires a Noetherian system");
  auto nfs = reachable_normal_forms(rs);
  // On a Noetherian system two single steps are joinable iff their targets
  // share a reachable vertex; sharing a normal form is enough to certify it.
  auto reaches_common = [&](VertexId a, VertexId b) {
    for (VertexId nf : nfs[a])
      if (nfs[b].count(nf)) return true;
    return false;
  };
  for (VertexId v = 0; v < rs.vertex_count(); ++v) {
    const auto& out = rs.outgoing(v);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = i + 1; j < out.size(); ++j)
        if (!reaches_common(rs.target(out[i]), rs.target(out[j])))
          return std::make_pair(out[i], out[j]);
  }
  return std::nullopt;
}

inline bool is_convergent(const RewritingSystem& rs) {
  if (!is_noetherian(rs)) return false;
  auto nfs = reachable_normal_forms(rs);
  for (const auto& s : nfs)
    if (s.size() != 1) return false;
  return true;
}

/// A k-tuple of nonempty paths out of a common source.
struct Branching {
  VertexId source = 0;
  std::vector<Path> legs;

  bool is_local() const {
    for (const auto& p : legs)
      if (p.length() != 1) return false;
    return true;
  }
};

enum class BranchingMode { Local, Critical, All };

/// Enumerates all nonempty paths from `v`, shortest first, up to `bound`
/// steps (0 means unbounded; requires a Noetherian system).
inline std::vector<Path> paths_from(const RewritingSystem& rs, VertexId v, std::size_t bound) {
  if (bound == 0 && !is_noetherian(rs))
    throw NotNoetherian("unbounded path enumeration requires a Noetherian system");
  std::vector<Path> acc;
  std::vector<Path> frontier{Path{v, {}}};
  while (!frontier.empty()) {
    std::vector<Path> next;
    for (const auto& p : frontier) {
      if (bound && p.length() >= bound) continue;
      for (EdgeId e : rs.outgoing(p.end(rs))) {
        Path q = p;
        q.steps.push_back(e);
        acc.push_back(q);
        next.push_back(q);
      }
    }
    frontier = std::move(next);
  }
  std::sort(acc.begin(), acc.end(),
            [&](const Path& a, const Path& b) { return path_less(rs, a, b); });
  return acc;
}

/// Enumerates k-branchings. Legs are emitted strictly increasing in the path
/// order and pairwise distinct; local/critical modes restrict legs to single
/// steps.
inline std::vector<Branching> branchings(const RewritingSystem& rs, std::size_t k,
                                         BranchingMode mode, std::size_t bound = 0) {
  if (k < 2) throw Error("branchings: arity must be at least 2");
  std::vector<Branching> out;
  for (VertexId v = 0; v < rs.vertex_count(); ++v) {
    std::vector<Path> legs;
    if (mode == BranchingMode::All) {
      legs = paths_from(rs, v, bound);
    } else {
      for (EdgeId e : rs.outgoing(v)) legs.push_back(Path{v, {e}});
    }
    if (legs.size() < k) continue;
    // All strictly increasing k-subsequences of the sorted leg list.
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      Branching b{v, {}};
      for (std::size_t i : idx) b.legs.push_back(legs[i]);
      out.push_back(std::move(b));
      // next combination
      std::size_t i = k;
      while (i > 0) {
        --i;
        if (idx[i] != i + legs.size() - k) break;
        if (i == 0) { i = k; break; }
      }
      if (i == k) break;
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

/// The ambient data every cell-level computation needs: the system plus its
/// normalisation strategy.
struct Complex {
  RewritingSystem rs;
  Strategy strat;
  std::uint64_t id;

  explicit Complex(RewritingSystem r) : rs(std::move(r)), strat(strategy(rs)), id(next_id()) {}

  static std::uint64_t next_id() {
    static std::atomic<std::uint64_t> counter{0};
    return ++counter;
  }

  VertexId normal_form(VertexId v) const { return strat.normal_form[v]; }
  const Path& sigma(VertexId v) const { return strat.sigma_path[v]; }
  std::optional<EdgeId> eta(VertexId v) const { return strat.eta[v]; }
};

/// Parses the line-oriented ARS format:
///   vertex <name>
///   edge <name> : <src> -> <tgt>
///   order <vertex> : <e1> < <e2> < ... < <ek>
/// '#' starts a comment. Rule order defaults to declaration order.
inline RewritingSystem parse_ars(const std::string& text) {
  RewritingSystem rs;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  // Order directives are applied after all edges are declared.
  std::vector<std::tuple<int, std::string, std::vector<std::string>>> orders;
  std::set<std::string> ordered_vertices;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "vertex") {
      std::string name;
      if (!(ls >> name)) throw ParseError(lineno, "vertex: missing name");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "vertex: unexpected token '" + extra + "'");
      if (rs.find_vertex(name)) throw ParseError(lineno, "duplicate vertex name: " + name);
      rs.add_vertex(name);
    } else if (kw == "edge") {
      std::string name, colon, src, arrow, tgt;
      if (!(ls >> name >> colon >> src >> arrow >> tgt) || colon != ":" || arrow != "->")
        throw ParseError(lineno, "edge: expected 'edge <name> : <src> -> <tgt>'");
      if (rs.find_edge(name)) throw ParseError(lineno, "duplicate edge name: " + name);
      auto s = rs.find_vertex(src);
      if (!s) throw ParseError(lineno, "edge " + name + ": undeclared vertex " + src);
      auto t = rs.find_vertex(tgt);
      if (!t) throw ParseError(lineno, "edge " + name + ": undeclared vertex " + tgt);
      rs.add_edge(name, *s, *t);
    } else if (kw == "order") {
      std::string vname, colon;
      if (!(ls >> vname >> colon) || colon != ":")
        throw ParseError(lineno, "order: expected 'order <vertex> : e1 < e2 < ...'");
      if (!ordered_vertices.insert(vname).second)
        throw ParseError(lineno, "duplicate order directive for vertex " + vname);
      std::vector<std::string> names;
      std::string tok;
      bool expect_edge = true;
      while (ls >> tok) {
        if (expect_edge) {
          names.push_back(tok);
        } else if (tok != "<") {
          throw ParseError(lineno, "order: expected '<', got '" + tok + "'");
        }
        expect_edge = !expect_edge;
      }
      if (names.empty()) throw ParseError(lineno, "order: no edges listed");
      if (expect_edge) throw ParseError(lineno, "order: trailing '<'");
      orders.emplace_back(lineno, vname, names);
    } else {
      throw ParseError(lineno, "unknown directive '" + kw + "'");
    }
  }
  for (const auto& [ln, vname, names] : orders) {
    auto v = rs.find_vertex(vname);
    if (!v) throw ParseError(ln, "order: undeclared vertex " + vname);
    std::vector<EdgeId> order;
    std::set<EdgeId> seen;
    for (const auto& n : names) {
      auto e = rs.find_edge(n);
      if (!e) throw ParseError(ln, "order: undeclared edge " + n);
      if (rs.source(*e) != *v)
        throw ParseError(ln, "order: edge " + n + " does not start at " + vname);
      if (!seen.insert(*e).second) throw ParseError(ln, "order: edge " + n + " listed twice");
      order.push_back(*e);
    }
    if (order.size() != rs.outgoing(*v).size())
      throw ParseError(ln, "order: must list all outgoing edges of " + vname);
    rs.set_rule_order(*v, order);
  }
  return rs;
}

}  // namespace cubical

#pragma once

#include <json.hpp>

#include "cubical/confluence.hpp"

namespace cubical {

using nlohmann::json;

inline const char* tool_version() { return "0.1.0"; }

// ---------------------------------------------------------------------------
// Rewriting systems, paths, zigzags
// ---------------------------------------------------------------------------

inline json to_json(const RewritingSystem& rs) {
  json j;
  j["vertices"] = json::array();
  for (VertexId v = 0; v < rs.vertex_count(); ++v) j["vertices"].push_back(rs.vertex_name(v));
  j["edges"] = json::array();
  for (EdgeId e = 0; e < rs.edge_count(); ++e)
    j["edges"].push_back({{"name", rs.edge_name(e)},
                          {"src", rs.vertex_name(rs.source(e))},
                          {"tgt", rs.vertex_name(rs.target(e))}});
  json order = json::object();
  for (VertexId v = 0; v < rs.vertex_count(); ++v) {
    json names = json::array();
    for (EdgeId e : rs.outgoing(v)) names.push_back(rs.edge_name(e));
    order[rs.vertex_name(v)] = names;
  }
  j["rule_order"] = order;
  return j;
}

inline RewritingSystem rs_from_json(const json& j) {
  RewritingSystem rs;
  for (const auto& v : j.at("vertices")) rs.add_vertex(v.get<std::string>());
  for (const auto& e : j.at("edges")) {
    auto s = rs.find_vertex(e.at("src").get<std::string>());
    auto t = rs.find_vertex(e.at("tgt").get<std::string>());
    if (!s || !t) throw Error("rs_from_json: dangling edge endpoint");
    rs.add_edge(e.at("name").get<std::string>(), *s, *t);
  }
  if (j.contains("rule_order"))
    for (auto it = j.at("rule_order").begin(); it != j.at("rule_order").end(); ++it) {
      auto v = rs.find_vertex(it.key());
      if (!v) throw Error("rs_from_json: rule_order names unknown vertex " + it.key());
      std::vector<EdgeId> order;
      for (const auto& n : it.value()) {
        auto e = rs.find_edge(n.get<std::string>());
        if (!e) throw Error("rs_from_json: rule_order names unknown edge");
        order.push_back(*e);
      }
      rs.set_rule_order(*v, order);
    }
  return rs;
}

inline json to_json(const RewritingSystem& rs, const Path& p) {
  json steps = json::array();
  for (EdgeId e : p.steps) steps.push_back(rs.edge_name(e));
  return json{{"start", rs.vertex_name(p.start)}, {"steps", steps}};
}

inline Path path_from_json(const RewritingSystem& rs, const json& j) {
  Path p;
  auto v = rs.find_vertex(j.at("start").get<std::string>());
  if (!v) throw Error("path_from_json: unknown start vertex");
  p.start = *v;
  for (const auto& n : j.at("steps")) {
    auto e = rs.find_edge(n.get<std::string>());
    if (!e) throw Error("path_from_json: unknown edge " + n.get<std::string>());
    p.steps.push_back(*e);
  }
  p.validate(rs);
  return p;
}

inline json to_json(const RewritingSystem& rs, const Zigzag& z) {
  json steps = json::array();
  for (const auto& s : z.steps)
    steps.push_back({{"edge", rs.edge_name(s.edge)}, {"dir", s.forward ? "fwd" : "bwd"}});
  return json{{"start", rs.vertex_name(z.start)}, {"steps", steps}};
}

inline Zigzag zigzag_from_json(const RewritingSystem& rs, const json& j) {
  Zigzag z;
  auto v = rs.find_vertex(j.at("start").get<std::string>());
  if (!v) throw Error("zigzag_from_json: unknown start vertex");
  z.start = *v;
  for (const auto& s : j.at("steps")) {
    auto e = rs.find_edge(s.at("edge").get<std::string>());
    if (!e) throw Error("zigzag_from_json: unknown edge");
    z.steps.push_back({*e, s.at("dir").get<std::string>() == "fwd"});
  }
  z.validate(rs);
  return z;
}

// ---------------------------------------------------------------------------
// Cells and squares
// ---------------------------------------------------------------------------

inline json to_json(const Complex& cx, const Square& s);

inline json to_json(const Complex& cx, const CellPtr& c) {
  switch (c->op) {
    case Op::Vertex:
      return json{{"op", "vertex"}, {"name", cx.rs.vertex_name(c->vertex)}};
    case Op::Edge:
      return json{{"op", "edge"}, {"name", cx.rs.edge_name(c->edge)}};
    case Op::Gen: {
      json legs = json::array();
      for (const auto& p : c->legs) legs.push_back(to_json(cx.rs, p));
      return json{{"op", "gen"}, {"legs", legs}};
    }
    case Op::Formal:
      return json{{"op", "formal"}, {"label", c->label}, {"square", to_json(cx, *c->square)}};
    case Op::Eps:
      return json{{"op", "eps"}, {"i", c->index}, {"cell", to_json(cx, c->a)}};
    case Op::Conn:
      return json{{"op", "conn"},
                  {"i", c->index},
                  {"sign", c->sign > 0 ? "+" : "-"},
                  {"cell", to_json(cx, c->a)}};
    case Op::Comp:
      return json{{"op", "comp"}, {"i", c->index}, {"a", to_json(cx, c->a)}, {"b", to_json(cx, c->b)}};
    case Op::Inv:
      return json{{"op", "inv"}, {"i", c->index}, {"cell", to_json(cx, c->a)}};
    case Op::Transp:
      return json{{"op", "transp"}, {"i", c->index}, {"cell", to_json(cx, c->a)}};
  }
  throw Error("to_json: unreachable");
}

inline json to_json(const Complex& cx, const Square& s) {
  json faces = json::object();
  for (int i = 1; i <= s.k + 1; ++i) {
    faces[std::to_string(i) + "-"] = to_json(cx, s.face(i, -1));
    faces[std::to_string(i) + "+"] = to_json(cx, s.face(i, +1));
  }
  return json{{"k", s.k}, {"faces", faces}};
}

inline Square square_from_json(const Complex& cx, const json& j);

inline CellPtr cell_from_json(const Complex& cx, const json& j) {
  const std::string op = j.at("op").get<std::string>();
  if (op == "vertex") {
    auto v = cx.rs.find_vertex(j.at("name").get<std::string>());
    if (!v) throw Error("cell_from_json: unknown vertex");
    return vertex_cell(*v);
  }
  if (op == "edge") {
    auto e = cx.rs.find_edge(j.at("name").get<std::string>());
    if (!e) throw Error("cell_from_json: unknown edge");
    return edge_cell(cx.rs, *e);
  }
  if (op == "gen") {
    std::vector<Path> legs;
    for (const auto& p : j.at("legs")) legs.push_back(path_from_json(cx.rs, p));
    return gen_cell(cx, legs);
  }
  if (op == "formal")
    return formal_cell(square_from_json(cx, j.at("square")), j.at("label").get<std::string>());
  if (op == "eps") return mk_eps(j.at("i").get<int>(), cell_from_json(cx, j.at("cell")));
  if (op == "conn")
    return mk_conn(j.at("i").get<int>(), j.at("sign").get<std::string>() == "+" ? +1 : -1,
                   cell_from_json(cx, j.at("cell")));
  if (op == "comp")
    return mk_comp(j.at("i").get<int>(), cell_from_json(cx, j.at("a")),
                   cell_from_json(cx, j.at("b")));
  if (op == "inv") return mk_inv(j.at("i").get<int>(), cell_from_json(cx, j.at("cell")));
  if (op == "transp") return mk_transp(j.at("i").get<int>(), cell_from_json(cx, j.at("cell")));
  throw Error("cell_from_json: unknown op '" + op + "'");
}

inline Square square_from_json(const Complex& cx, const json& j) {
  Square s = Square::make(j.at("k").get<int>());
  const auto& faces = j.at("faces");
  for (int i = 1; i <= s.k + 1; ++i) {
    s.face(i, -1) = cell_from_json(cx, faces.at(std::to_string(i) + "-"));
    s.face(i, +1) = cell_from_json(cx, faces.at(std::to_string(i) + "+"));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

inline std::string ars_digest(const RewritingSystem& rs) {
  std::string dump = to_json(rs).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json certificate_header(const std::string& kind, const RewritingSystem& rs) {
  json j;
  j["kind"] = kind;
  j["tool_version"] = tool_version();
  j["inputs"] = json{{"ars", to_json(rs)}, {"ars_digest", ars_digest(rs)}};
  return j;
}

inline json to_json(const Complex& cx, const FillCertificate& c) {
  json j = certificate_header("filler", cx.rs);
  j["payload"] = json{{"square", to_json(cx, c.square)},   {"folded_square", to_json(cx, c.folded)},
                      {"g_minus", to_json(cx, c.g_minus)}, {"g_plus", to_json(cx, c.g_plus)},
                      {"A", to_json(cx, c.a)},             {"B", to_json(cx, c.b)}};
  j["verified"] = c.verified;
  return j;
}

inline json to_json(const Complex& cx, const CubeLawReport& r) {
  json residuals = json::array();
  for (const auto& [ij, p] : r.residuals)
    residuals.push_back({{"i", ij.first}, {"j", ij.second}, {"path", to_json(cx.rs, p)}});
  json instances = json::array();
  for (const auto& inst : r.instances)
    instances.push_back({{"i", inst.i},
                         {"j", inst.j},
                         {"k", inst.k},
                         {"lhs", to_json(cx.rs, inst.lhs)},
                         {"rhs", to_json(cx.rs, inst.rhs)},
                         {"holds", inst.holds},
                         {"face_route_checked", inst.face_route_checked},
                         {"face_route_holds", inst.face_route_holds}});
  json legs = json::array();
  for (const auto& p : r.branching.legs) legs.push_back(to_json(cx.rs, p));
  return json{{"source", cx.rs.vertex_name(r.branching.source)},
              {"legs", legs},
              {"residuals", residuals},
              {"instances", instances},
              {"all_hold", r.all_hold}};
}

}  // namespace cubical

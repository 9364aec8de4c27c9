#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vdg/error.hpp"
#include "vdg/graph.hpp"

namespace vdg {

using json = nlohmann::ordered_json;

inline json tag_to_json(const VertexTag& tag) {
  json out;
  out["role"] = role_name(tag.role);
  if (tag.index >= 0) out["index"] = tag.index;
  if (tag.layer) out["layer"] = *tag.layer;
  if (tag.gadget) out["gadget"] = *tag.gadget;
  return out;
}

inline VertexTag tag_from_json(const json& in) {
  VertexTag tag;
  tag.role = parse_role(in.at("role").get<std::string>());
  if (in.contains("index")) tag.index = in.at("index").get<int>();
  if (in.contains("layer")) tag.layer = in.at("layer").get<int>();
  if (in.contains("gadget")) tag.gadget = in.at("gadget").get<int>();
  return tag;
}

// Canonical graph document: vertices by increasing ID, edges as
// [smaller, larger] pairs sorted lexicographically.
inline json graph_to_json(const Graph& g) {
  g.check_invariants();
  json vertices = json::array();
  for (VertexId v : g.vertices()) {
    vertices.push_back({{"id", raw(v)}, {"tag", tag_to_json(g.tag(v))}});
  }
  json edges = json::array();
  for (const auto& [u, w] : g.edges()) edges.push_back({raw(u), raw(w)});
  json out;
  out["vertices"] = std::move(vertices);
  out["edges"] = std::move(edges);
  return out;
}

inline Graph graph_from_json(const json& in) {
  try {
    const json& vertices = in.at("vertices");
    int max_id = -1;
    for (const json& v : vertices) max_id = std::max(max_id, v.at("id").get<int>());
    Graph g;
    std::vector<bool> present(static_cast<std::size_t>(max_id + 1), false);
    for (int i = 0; i <= max_id; ++i) g.add_vertex();
    for (const json& v : vertices) {
      const int id = v.at("id").get<int>();
      if (id < 0) throw SpecError("negative vertex id");
      if (present[static_cast<std::size_t>(id)]) throw SpecError("duplicate vertex id " + std::to_string(id));
      present[static_cast<std::size_t>(id)] = true;
      g.set_tag(vertex_id(id), v.contains("tag") ? tag_from_json(v.at("tag")) : VertexTag{});
    }
    for (int i = 0; i <= max_id; ++i) {
      if (!present[static_cast<std::size_t>(i)]) g.delete_vertex(vertex_id(i));
    }
    for (const json& e : in.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw SpecError("edge must be a pair");
      g.add_edge(vertex_id(e[0].get<int>()), vertex_id(e[1].get<int>()));
    }
    return g;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed graph JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    throw SpecError(std::string("malformed graph JSON: ") + e.what());
  }
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Hash of the canonical JSON serialization; identical graphs (IDs and tags
// included) hash identically.
inline std::string graph_hash(const Graph& g) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(graph_to_json(g).dump())));
  return buf;
}

struct DotStyle {
  std::string_view shape;
  std::string_view color;
};

// Node styling by role; the README documents the same table.
inline DotStyle dot_style(Role role) {
  switch (role) {
    case Role::kGroupElement: return {"circle", "lightblue"};
    case Role::kEdgeGadgetInternal: return {"point", "gray50"};
    case Role::kGadgetPath: return {"square", "palegreen"};
    case Role::kRevealX: return {"doublecircle", "tomato"};
    case Role::kRevealY: return {"doublecircle", "gold"};
    case Role::kAnchor: return {"diamond", "orchid"};
    case Role::kPlain: return {"ellipse", "white"};
  }
  return {"ellipse", "white"};
}

inline std::string graph_to_dot(const Graph& g, std::string_view name = "G") {
  std::ostringstream out;
  out << "graph " << name << " {\n  node [style=filled, fontsize=8];\n";
  for (VertexId v : g.vertices()) {
    const VertexTag& tag = g.tag(v);
    const DotStyle style = dot_style(tag.role);
    out << "  " << raw(v) << " [shape=" << style.shape << ", fillcolor=" << style.color
        << ", label=\"" << raw(v) << "\"";
    out << ", tooltip=\"" << role_name(tag.role);
    if (tag.index >= 0) out << " " << tag.index;
    if (tag.layer) out << " layer " << *tag.layer;
    out << "\"];\n";
  }
  for (const auto& [u, w] : g.edges()) out << "  " << raw(u) << " -- " << raw(w) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace vdg

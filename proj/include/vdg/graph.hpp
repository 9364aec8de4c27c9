#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vdg/error.hpp"

namespace vdg {

// Stable vertex identity. IDs are handed out in increasing order and never
// reused within one graph lineage, so a transcript line like "deleted 417"
// stays meaningful after later deletions.
enum class VertexId : std::int32_t {};

constexpr int raw(VertexId v) { return static_cast<int>(v); }
constexpr VertexId vertex_id(int v) { return static_cast<VertexId>(v); }
inline std::string to_string(VertexId v) { return std::to_string(raw(v)); }

// Construction provenance of a vertex. The automorphism engine never looks at
// tags; they exist for transcripts, rendering and the game strategy.
enum class Role {
  kGroupElement,
  kEdgeGadgetInternal,
  kGadgetPath,
  kRevealX,
  kRevealY,
  kAnchor,
  kPlain,
};

inline std::string_view role_name(Role role) {
  switch (role) {
    case Role::kGroupElement: return "group-element";
    case Role::kEdgeGadgetInternal: return "edge-gadget-internal";
    case Role::kGadgetPath: return "gadget-path";
    case Role::kRevealX: return "reveal-x";
    case Role::kRevealY: return "reveal-y";
    case Role::kAnchor: return "anchor";
    case Role::kPlain: return "plain";
  }
  return "plain";
}

inline Role parse_role(std::string_view name) {
  for (Role r : {Role::kGroupElement, Role::kEdgeGadgetInternal, Role::kGadgetPath, Role::kRevealX,
                 Role::kRevealY, Role::kAnchor, Role::kPlain}) {
    if (role_name(r) == name) return r;
  }
  throw SpecError("unknown vertex role '" + std::string(name) + "'");
}

struct VertexTag {
  Role role = Role::kPlain;
  // gadget-path: position i on the pendant path (1-based); anchor: j;
  // group-element: element index. -1 when unused.
  int index = -1;
  std::optional<int> layer;
  std::optional<int> gadget;

  friend bool operator==(const VertexTag&, const VertexTag&) = default;
};

using IdMap = std::map<VertexId, VertexId>;

// Simple undirected graph over stable vertex IDs, each carrying a VertexTag.
// Adjacency lists are kept sorted, which makes every traversal deterministic.
class Graph {
 public:
  Graph() = default;

  VertexId add_vertex(VertexTag tag = {}) {
    const VertexId v = vertex_id(static_cast<int>(alive_.size()));
    alive_.push_back(true);
    tags_.push_back(tag);
    adjacency_.emplace_back();
    ++num_vertices_;
    return v;
  }

  bool contains(VertexId v) const {
    return raw(v) >= 0 && static_cast<std::size_t>(raw(v)) < alive_.size() && alive_[slot(v)];
  }

  // Adds {u, v}; returns false if it already existed.
  bool add_edge(VertexId u, VertexId v) {
    require(u);
    require(v);
    if (u == v) throw PreconditionError("self-loop at vertex " + to_string(u));
    auto& nu = adjacency_[slot(u)];
    const auto it = std::lower_bound(nu.begin(), nu.end(), v);
    if (it != nu.end() && *it == v) return false;
    nu.insert(it, v);
    auto& nv = adjacency_[slot(v)];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
    ++num_edges_;
    return true;
  }

  bool has_edge(VertexId u, VertexId v) const {
    if (!contains(u) || !contains(v)) return false;
    const auto& nu = adjacency_[slot(u)];
    return std::binary_search(nu.begin(), nu.end(), v);
  }

  std::span<const VertexId> neighbors(VertexId v) const {
    require(v);
    return adjacency_[slot(v)];
  }
  std::size_t degree(VertexId v) const { return neighbors(v).size(); }

  const VertexTag& tag(VertexId v) const {
    require(v);
    return tags_[slot(v)];
  }
  void set_tag(VertexId v, VertexTag tag) {
    require(v);
    tags_[slot(v)] = tag;
  }

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return num_edges_; }
  // One past the largest ID ever issued in this lineage.
  int next_id() const { return static_cast<int>(alive_.size()); }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    out.reserve(num_vertices_);
    for (std::size_t i = 0; i < alive_.size(); ++i) {
      if (alive_[i]) out.push_back(vertex_id(static_cast<int>(i)));
    }
    return out;
  }

  // Edges as (smaller, larger) pairs in lexicographic order.
  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(num_edges_);
    for (VertexId u : vertices()) {
      for (VertexId w : adjacency_[slot(u)]) {
        if (u < w) out.emplace_back(u, w);
      }
    }
    return out;
  }

  void delete_vertex(VertexId v) {
    require(v);
    for (VertexId w : adjacency_[slot(v)]) {
      auto& nw = adjacency_[slot(w)];
      nw.erase(std::lower_bound(nw.begin(), nw.end(), v));
    }
    num_edges_ -= adjacency_[slot(v)].size();
    adjacency_[slot(v)].clear();
    adjacency_[slot(v)].shrink_to_fit();
    alive_[slot(v)] = false;
    --num_vertices_;
  }

  // Attaches a fresh path v - u_1 - ... - u_length and returns u_1..u_length.
  // `tagger(i)` supplies the tag of u_i.
  std::vector<VertexId> attach_pendant_path(VertexId v, int length,
                                            const std::function<VertexTag(int)>& tagger) {
    require(v);
    if (length < 1) throw PreconditionError("pendant path length must be at least 1");
    std::vector<VertexId> path;
    path.reserve(static_cast<std::size_t>(length));
    VertexId previous = v;
    for (int i = 1; i <= length; ++i) {
      const VertexId u = add_vertex(tagger(i));
      add_edge(previous, u);
      path.push_back(u);
      previous = u;
    }
    return path;
  }

  void join_vertex_to_set(VertexId v, std::span<const VertexId> targets) {
    require(v);
    for (VertexId w : targets) {
      require(w);
      if (w == v) throw PreconditionError("vertex " + to_string(v) + " cannot be joined to itself");
    }
    for (VertexId w : targets) add_edge(v, w);
  }

  // Embeds `source` with fresh IDs (assigned in source ID order) and returns
  // the source-to-fresh ID map.
  IdMap disjoint_copy(const Graph& source,
                      const std::function<VertexTag(const VertexTag&)>& tag_remap = {}) {
    IdMap map;
    for (VertexId u : source.vertices()) {
      map.emplace(u, add_vertex(tag_remap ? tag_remap(source.tag(u)) : source.tag(u)));
    }
    for (const auto& [u, w] : source.edges()) add_edge(map.at(u), map.at(w));
    return map;
  }

  // Subgraph induced on `keep`, preserving IDs and tags.
  Graph induced(std::span<const VertexId> keep) const {
    std::vector<bool> kept(alive_.size(), false);
    for (VertexId v : keep) {
      require(v);
      kept[slot(v)] = true;
    }
    Graph out = *this;
    for (VertexId v : vertices()) {
      if (!kept[slot(v)]) out.delete_vertex(v);
    }
    return out;
  }

  // Adjacency symmetry and loop-freeness; throws on violation.
  void check_invariants() const {
    std::size_t endpoint_count = 0;
    for (VertexId u : vertices()) {
      const auto& nu = adjacency_[slot(u)];
      endpoint_count += nu.size();
      for (VertexId w : nu) {
        if (w == u) throw Error("self-loop at " + to_string(u));
        if (!contains(w)) throw Error("edge to deleted vertex " + to_string(w));
        const auto& nw = adjacency_[slot(w)];
        if (!std::binary_search(nw.begin(), nw.end(), u)) {
          throw Error("asymmetric adjacency " + to_string(u) + "-" + to_string(w));
        }
      }
    }
    if (endpoint_count != 2 * num_edges_) throw Error("edge count out of sync");
  }

 private:
  static std::size_t slot(VertexId v) { return static_cast<std::size_t>(raw(v)); }
  void require(VertexId v) const {
    if (!contains(v)) throw PreconditionError("unknown vertex " + to_string(v));
  }

  std::vector<bool> alive_;
  std::vector<VertexTag> tags_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::size_t num_vertices_ = 0;
  std::size_t num_edges_ = 0;
};

// Value-returning forms of the mutations.

inline Graph delete_vertex(Graph g, VertexId v) {
  g.delete_vertex(v);
  return g;
}

inline std::pair<Graph, std::vector<VertexId>> attach_pendant_path(
    Graph g, VertexId v, int length, const std::function<VertexTag(int)>& tagger) {
  auto path = g.attach_pendant_path(v, length, tagger);
  return {std::move(g), std::move(path)};
}

inline Graph join_vertex_to_set(Graph g, VertexId v, std::span<const VertexId> targets) {
  g.join_vertex_to_set(v, targets);
  return g;
}

inline std::pair<Graph, IdMap> disjoint_copy(
    Graph g, const Graph& source, const std::function<VertexTag(const VertexTag&)>& tag_remap = {}) {
  IdMap map = g.disjoint_copy(source, tag_remap);
  return {std::move(g), std::move(map)};
}

// The empty graph counts as connected.
inline bool is_connected(const Graph& g) {
  const auto vs = g.vertices();
  if (vs.empty()) return true;
  std::vector<bool> seen(static_cast<std::size_t>(g.next_id()), false);
  std::vector<VertexId> stack{vs.front()};
  seen[static_cast<std::size_t>(raw(vs.front()))] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (VertexId w : g.neighbors(u)) {
      if (!seen[static_cast<std::size_t>(raw(w))]) {
        seen[static_cast<std::size_t>(raw(w))] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == vs.size();
}

inline std::vector<std::size_t> degree_sequence(const Graph& g) {
  std::vector<std::size_t> out;
  for (VertexId v : g.vertices()) out.push_back(g.degree(v));
  std::sort(out.begin(), out.end());
  return out;
}

// Small named graphs.
namespace graphs {

inline Graph empty(int n) {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex();
  return g;
}

inline Graph path(int n) {
  Graph g = empty(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(vertex_id(i), vertex_id(i + 1));
  return g;
}

inline Graph cycle(int n) {
  Graph g = path(n);
  if (n >= 3) g.add_edge(vertex_id(n - 1), vertex_id(0));
  return g;
}

inline Graph complete(int n) {
  Graph g = empty(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.add_edge(vertex_id(i), vertex_id(j));
  }
  return g;
}

// K_{1,leaves}; the center is vertex 0.
inline Graph star(int leaves) {
  Graph g = empty(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(vertex_id(0), vertex_id(i));
  return g;
}

// Tree made of paths of the given lengths joined at a center (vertex 0).
inline Graph spider(std::span<const int> legs, VertexTag center_tag = {}, VertexTag leg_tag = {}) {
  Graph g;
  const VertexId center = g.add_vertex(center_tag);
  for (int length : legs) g.attach_pendant_path(center, length, [&](int) { return leg_tag; });
  return g;
}

}  // namespace graphs
}  // namespace vdg

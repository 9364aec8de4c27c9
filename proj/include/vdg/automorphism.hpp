#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "vdg/detail/refinement.hpp"
#include "vdg/error.hpp"
#include "vdg/graph.hpp"
#include "vdg/graph_io.hpp"
#include "vdg/group.hpp"
#include "vdg/limits.hpp"
#include "vdg/permutation.hpp"

namespace vdg {

struct AutOptions {
  std::size_t max_vertices = Limits{}.max_aut_vertices;
  std::size_t enumeration_cap = Limits{}.enumeration_cap;
  // Optional vertex colouring: the result is then the colour-preserving
  // subgroup. Uncoloured vertices get colour 0. Tags are never used.
  std::map<VertexId, int> colors;

  static AutOptions from(const Limits& limits) {
    AutOptions o;
    o.max_vertices = limits.max_aut_vertices;
    o.enumeration_cap = limits.enumeration_cap;
    return o;
  }
};

// Automorphism group of a graph. Permutations act on positions in the sorted
// vertex ID list `vertex_ids`.
struct AutGroup {
  std::vector<VertexId> vertex_ids;
  std::vector<Permutation> generators;
  // Base points (positions) of the search and the orbit length of each base
  // point under the stabilizer of the earlier ones; their product is the order.
  std::vector<int> base;
  std::vector<std::size_t> base_orbit_sizes;
  GroupOrder order = 1;
  // All elements sorted lexicographically (identity first), present when the
  // order is at most the enumeration cap.
  std::optional<std::vector<Permutation>> elements;

  bool enumerated() const { return elements.has_value(); }
  std::size_t degree() const { return vertex_ids.size(); }

  int position(VertexId v) const {
    const auto it = std::lower_bound(vertex_ids.begin(), vertex_ids.end(), v);
    if (it == vertex_ids.end() || *it != v) throw PreconditionError("unknown vertex " + to_string(v));
    return static_cast<int>(it - vertex_ids.begin());
  }
  VertexId image(const Permutation& p, VertexId v) const {
    return vertex_ids[static_cast<std::size_t>(p[position(v)])];
  }
  bool is_trivial() const { return order == 1; }
};

namespace detail {

inline void check_size(const Graph& g, std::size_t max_vertices) {
  if (g.num_vertices() > max_vertices) {
    throw LimitError("graph has " + std::to_string(g.num_vertices()) +
                     " vertices, above the automorphism engine limit of " + std::to_string(max_vertices));
  }
}

inline std::vector<int> dense_colors(const DenseGraph& dense, const std::map<VertexId, int>& colors) {
  if (colors.empty()) return {};
  std::vector<int> out(static_cast<std::size_t>(dense.size()), 0);
  for (const auto& [v, c] : colors) {
    const auto it = std::lower_bound(dense.ids.begin(), dense.ids.end(), v);
    if (it == dense.ids.end() || *it != v) throw PreconditionError("colour given for unknown vertex " + to_string(v));
    out[static_cast<std::size_t>(it - dense.ids.begin())] = c;
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] = parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  void absorb(const Permutation& p) {
    for (int x = 0; x < static_cast<int>(p.size()); ++x) unite(x, p[x]);
  }

 private:
  std::vector<int> parent_;
};

// Closure of the generators under composition, sorted. Returns nullopt if
// more than `cap` elements turn up.
inline std::optional<std::vector<Permutation>> enumerate_group(std::size_t degree,
                                                               const std::vector<Permutation>& generators,
                                                               std::size_t cap) {
  std::unordered_set<Permutation, PermutationHash> seen;
  std::vector<Permutation> all{Permutation::identity(degree)};
  seen.insert(all.front());
  for (std::size_t head = 0; head < all.size(); ++head) {
    for (const Permutation& g : generators) {
      Permutation next = g * all[head];
      if (seen.insert(next).second) {
        if (all.size() >= cap) return std::nullopt;
        all.push_back(std::move(next));
      }
    }
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace detail

// Every element of `group`, enumerating past the configured cap if needed.
inline std::vector<Permutation> all_elements(const AutGroup& group, std::size_t limit) {
  if (group.elements) return *group.elements;
  auto out = detail::enumerate_group(group.degree(), group.generators, limit);
  if (!out) throw LimitError("group order " + group.order.str() + " exceeds enumeration limit");
  return *out;
}

// Exact automorphism group by colour refinement to an equitable partition
// followed by individualisation-refinement backtracking. The search walks a
// first path to a discrete leaf, then for each level from the deepest up
// looks, for every vertex of the target cell not already known to share an
// orbit with the base point, for a leaf in that subtree that matches the
// first leaf; matches are automorphisms and become generators.
inline AutGroup automorphisms(const Graph& g, const AutOptions& options = {}) {
  detail::check_size(g, options.max_vertices);
  const detail::DenseGraph dense(g);
  const std::vector<int> colors = detail::dense_colors(dense, options.colors);
  const std::size_t n = static_cast<std::size_t>(dense.size());

  AutGroup result;
  result.vertex_ids = dense.ids;
  if (n == 0) {
    result.elements = std::vector<Permutation>{Permutation::identity(0)};
    return result;
  }

  detail::Refiner refiner(dense);
  const detail::ReferencePath path = detail::build_reference_path(refiner, colors);
  detail::LeafMatcher matcher(dense, path, dense);
  const std::size_t depth = path.depth();

  result.base_orbit_sizes.assign(depth, 1);
  for (std::size_t level = depth; level-- > 0;) {
    detail::UnionFind orbits(n);
    for (std::size_t k = 0; k < result.generators.size(); ++k) orbits.absorb(result.generators[k]);
    const detail::Partition& node = path.nodes[level];
    const int v = path.chosen[level];
    const auto cell = node.cell(path.target_cells[level]);
    const std::vector<int> members(cell.begin(), cell.end());
    std::vector<int> failed;
    for (int w : members) {
      if (w == v || orbits.find(w) == orbits.find(v)) continue;
      // A vertex sharing an orbit with a failed candidate fails too.
      if (std::any_of(failed.begin(), failed.end(), [&](int f) { return orbits.find(f) == orbits.find(w); })) {
        continue;
      }
      detail::Partition child = node;
      const std::uint64_t trace = detail::mix(path.traces[level], matcher.refiner().individualize(child, w));
      std::optional<std::vector<int>> sigma;
      if (matcher.matches(child, trace, level + 1)) sigma = matcher.search(child, trace, level + 1);
      if (!sigma) {
        failed.push_back(w);
        continue;
      }
      result.generators.emplace_back(std::move(*sigma));
      orbits.absorb(result.generators.back());
    }
    std::size_t orbit = 0;
    for (int w : members) orbit += orbits.find(w) == orbits.find(v) ? 1 : 0;
    result.base_orbit_sizes[level] = orbit;
  }
  for (int v : path.chosen) result.base.push_back(v);
  for (std::size_t s : result.base_orbit_sizes) result.order *= s;

  for (const Permutation& p : result.generators) {
    std::vector<char> mark;
    if (!p.is_bijection() || !detail::maps_edges(dense, dense, p.images(), mark)) {
      throw Error("internal error: engine produced a non-automorphism");
    }
  }
  if (result.order <= options.enumeration_cap) {
    result.elements = detail::enumerate_group(n, result.generators, options.enumeration_cap);
    if (!result.elements || result.elements->size() != result.order) {
      throw Error("internal error: enumerated group size disagrees with the computed order");
    }
  }
  return result;
}

// Checks every permutation of the vertex set. Ground truth for small graphs.
inline AutGroup brute_force_automorphisms(const Graph& g) {
  if (g.num_vertices() > 9) throw LimitError("brute force is limited to 9 vertices");
  const detail::DenseGraph dense(g);
  const std::size_t n = static_cast<std::size_t>(dense.size());
  AutGroup result;
  result.vertex_ids = dense.ids;
  std::vector<Permutation> elements;
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<char> mark;
  do {
    if (detail::maps_edges(dense, dense, sigma, mark)) elements.emplace_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  result.order = elements.size();
  result.generators.assign(elements.begin() + 1, elements.end());
  result.elements = std::move(elements);
  return result;
}

// Orbits of the group on vertices, each sorted, ordered by smallest member.
inline std::vector<std::vector<VertexId>> orbits(const AutGroup& group) {
  detail::UnionFind uf(group.degree());
  for (const Permutation& p : group.generators) uf.absorb(p);
  std::map<int, std::vector<VertexId>> by_root;
  for (std::size_t i = 0; i < group.degree(); ++i) by_root[uf.find(static_cast<int>(i))].push_back(group.vertex_ids[i]);
  std::vector<std::vector<VertexId>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

inline std::vector<VertexId> orbit_of(const AutGroup& group, VertexId v) {
  const int pos = group.position(v);
  detail::UnionFind uf(group.degree());
  for (const Permutation& p : group.generators) uf.absorb(p);
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < group.degree(); ++i) {
    if (uf.find(static_cast<int>(i)) == uf.find(pos)) out.push_back(group.vertex_ids[i]);
  }
  return out;
}

inline std::vector<VertexId> orbit_of(const Graph& g, VertexId v, const AutOptions& options = {}) {
  if (!g.contains(v)) throw PreconditionError("unknown vertex " + to_string(v));
  return orbit_of(automorphisms(g, options), v);
}

// |Stab(v)|, computed independently of the orbit as the automorphism group
// of g with v given its own colour.
inline GroupOrder stabilizer_order(const Graph& g, VertexId v, const AutOptions& options = {}) {
  if (!g.contains(v)) throw PreconditionError("unknown vertex " + to_string(v));
  AutOptions pinned = options;
  int fresh = 1;
  for (const auto& [u, c] : pinned.colors) fresh = std::max(fresh, c + 1);
  pinned.colors[v] = fresh;
  pinned.enumeration_cap = 0;
  return automorphisms(g, pinned).order;
}

// Cayley table of an enumerated group under composition. Element i is the
// i-th permutation in sorted order, so the identity is element 0.
inline FiniteGroup aut_as_abstract_group(const AutGroup& group) {
  if (!group.enumerated()) {
    throw LimitError("automorphism group of order " + group.order.str() +
                     " is above the enumeration cap; compare orders instead");
  }
  const auto& elements = *group.elements;
  std::map<Permutation, int> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], static_cast<int>(i));
  const std::size_t m = elements.size();
  std::vector<int> table(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) table[a * m + b] = index.at(elements[a] * elements[b]);
  }
  return FiniteGroup(m, std::move(table), "Aut");
}

// Exact graph isomorphism test reusing the automorphism search: the first
// path of `a` is the reference and `b`'s search tree is scanned for a leaf
// that matches it.
inline bool graph_isomorphic(const Graph& a, const Graph& b, const AutOptions& options = {}) {
  detail::check_size(a, options.max_vertices);
  detail::check_size(b, options.max_vertices);
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  if (degree_sequence(a) != degree_sequence(b)) return false;
  if (a.num_vertices() == 0) return true;
  const detail::DenseGraph da(a), db(b);
  detail::Refiner refiner_a(da);
  const detail::ReferencePath path = detail::build_reference_path(refiner_a, {});
  detail::LeafMatcher matcher(da, path, db);
  auto [root, trace] = matcher.refiner().initial({});
  if (!matcher.matches(root, trace, 0)) return false;
  return matcher.search(root, trace, 0).has_value();
}

// Orders that fit in 64 bits are JSON numbers, larger ones decimal strings.
inline json order_to_json(const GroupOrder& order) {
  if (order <= GroupOrder(std::numeric_limits<std::int64_t>::max())) return static_cast<std::int64_t>(order);
  return order.str();
}

inline GroupOrder order_from_json(const json& value) {
  if (value.is_number_integer()) return GroupOrder(value.get<std::int64_t>());
  if (value.is_string()) return GroupOrder(value.get<std::string>());
  throw SpecError("group order must be an integer or a decimal string");
}

// AutGroup document: order, generators as image arrays over `vertex_ids`
// (given as vertex IDs), and the Cayley table for small enumerated groups.
inline json aut_to_json(const AutGroup& group) {
  json out;
  out["order"] = order_to_json(group.order);
  json ids = json::array();
  for (VertexId v : group.vertex_ids) ids.push_back(raw(v));
  out["vertex_ids"] = std::move(ids);
  json gens = json::array();
  for (const Permutation& p : group.generators) {
    json images = json::array();
    for (int x : p.images()) images.push_back(raw(group.vertex_ids[static_cast<std::size_t>(x)]));
    gens.push_back(std::move(images));
  }
  out["generators"] = std::move(gens);
  if (group.enumerated() && group.order <= 64) {
    const FiniteGroup abstract = aut_as_abstract_group(group);
    json rows = json::array();
    for (std::size_t a = 0; a < abstract.order(); ++a) {
      const auto r = abstract.row(static_cast<int>(a));
      rows.push_back(std::vector<int>(r.begin(), r.end()));
    }
    out["cayley_table"] = std::move(rows);
  }
  return out;
}

}  // namespace vdg

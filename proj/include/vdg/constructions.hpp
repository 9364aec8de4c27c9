#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vdg/automorphism.hpp"
#include "vdg/error.hpp"
#include "vdg/graph.hpp"
#include "vdg/group.hpp"
#include "vdg/group_iso.hpp"
#include "vdg/limits.hpp"

namespace vdg {

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct InvariantReport {
  std::vector<InvariantCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }
  std::string failures() const {
    std::string out;
    for (const auto& c : checks) {
      if (!c.passed) out += (out.empty() ? "" : "; ") + c.name + " (" + c.detail + ")";
    }
    return out;
  }
};

struct ConstructionOptions {
  bool verify = true;
  Limits limits;
  // Rebuild attempts before a verification failure becomes an error.
  int max_attempts = 3;

  AutOptions aut() const { return AutOptions::from(limits); }
};

// Connected graph realizing a group, with an anchor vertex whose stabilizer
// is trivial.
struct StabilizedGraph {
  Graph graph;
  VertexId anchor{};
  FiniteGroup group = groups::trivial();
  std::vector<int> generators;
  // Added to every tail length; nonzero only after a verification retry.
  int tail_offset = 0;
  bool verified = false;
};

namespace detail {

inline void ensure_order(const FiniteGroup& g, const Limits& limits) {
  if (g.order() > limits.max_group_order) {
    throw LimitError("group order " + std::to_string(g.order()) + " exceeds the limit of " +
                     std::to_string(limits.max_group_order));
  }
}

inline VertexTag internal_tag(int generator) { return {Role::kEdgeGadgetInternal, generator, std::nullopt, std::nullopt}; }

// The rigid spider with legs 1, 2, 3 used for the trivial group.
inline Graph rigid_spider() {
  const std::array<int, 3> legs{1, 2, 3};
  return graphs::spider(legs, VertexTag{Role::kGroupElement, 0, std::nullopt, std::nullopt});
}

// Cayley digraph on `generators` with each arc a -> a*s (generator number q,
// 1-based) replaced by the path a - c1 - c2 - a*s, plus a tail of length
// 2q-1+offset at c1 and 2q+offset at c2. The shorter tail marks the arc's
// tail end; the lengths identify the generator.
inline Graph frucht_graph(const FiniteGroup& group, const std::vector<int>& generators, int offset) {
  Graph g;
  const int m = static_cast<int>(group.order());
  for (int a = 0; a < m; ++a) g.add_vertex({Role::kGroupElement, a, std::nullopt, std::nullopt});
  for (int a = 0; a < m; ++a) {
    for (std::size_t k = 0; k < generators.size(); ++k) {
      const int q = static_cast<int>(k) + 1;
      const VertexId from = vertex_id(a);
      const VertexId to = vertex_id(group.mul(a, generators[k]));
      const VertexId c1 = g.add_vertex(internal_tag(q));
      const VertexId c2 = g.add_vertex(internal_tag(q));
      g.add_edge(from, c1);
      g.add_edge(c1, c2);
      g.add_edge(c2, to);
      g.attach_pendant_path(c1, 2 * q - 1 + offset, [q](int) { return internal_tag(q); });
      g.attach_pendant_path(c2, 2 * q + offset, [q](int) { return internal_tag(q); });
    }
  }
  return g;
}

}  // namespace detail

// |V| of the construction for a group of order m with d generators.
inline std::size_t frucht_vertex_count(std::size_t order, std::size_t generator_count) {
  if (order == 1) return 7;
  std::size_t per_element = 0;
  for (std::size_t q = 1; q <= generator_count; ++q) per_element += 2 + (2 * q - 1) + 2 * q;
  return order + order * per_element;
}

namespace detail {

// An exact isomorphism check needs the elements, and a correct construction
// has exactly |group| of them, so enumerate at least that far.
inline AutOptions enumerating(AutOptions options, const FiniteGroup& group) {
  options.enumeration_cap = std::max(options.enumeration_cap, group.order());
  return options;
}

}  // namespace detail

inline InvariantReport verify_stabilized_graph(const StabilizedGraph& s, const AutOptions& options = {}) {
  InvariantReport report;
  const AutGroup aut = automorphisms(s.graph, detail::enumerating(options, s.group));
  bool iso = false;
  std::string detail = "|Aut| = " + aut.order.str() + ", |group| = " + std::to_string(s.group.order());
  if (aut.enumerated()) iso = are_isomorphic(aut_as_abstract_group(aut), s.group);
  report.checks.push_back({"aut_isomorphic_to_group", iso, detail});
  const GroupOrder stab = stabilizer_order(s.graph, s.anchor, options);
  report.checks.push_back({"anchor_stabilizer_trivial", stab == 1, "|Stab(anchor)| = " + stab.str()});
  report.checks.push_back({"connected", is_connected(s.graph), ""});
  return report;
}

inline StabilizedGraph frucht_with_trivial_stabilizer(const FiniteGroup& group, const ConstructionOptions& options = {}) {
  detail::ensure_order(group, options.limits);
  StabilizedGraph out;
  out.group = group;
  if (group.order() == 1) {
    out.graph = detail::rigid_spider();
    out.anchor = vertex_id(0);
    if (options.verify) {
      const InvariantReport report = verify_stabilized_graph(out, options.aut());
      if (!report.all_passed()) throw VerificationError("trivial-group base graph failed: " + report.failures());
      out.verified = true;
    }
    return out;
  }
  out.generators = minimal_generating_set(group);
  int offset = 0;
  std::string last_failure;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    out.graph = detail::frucht_graph(group, out.generators, offset);
    out.anchor = vertex_id(0);
    out.tail_offset = offset;
    if (!options.verify) return out;
    const InvariantReport report = verify_stabilized_graph(out, options.aut());
    if (report.all_passed()) {
      out.verified = true;
      return out;
    }
    last_failure = report.failures();
    // Lengthen every tail by the previous maximum tail length.
    offset += 2 * static_cast<int>(out.generators.size()) + offset;
  }
  throw VerificationError("construction for " + group.name() + " failed verification: " + last_failure);
}

struct GadgetLayout {
  std::size_t n = 0;           // vertices of the base graph
  int bits = 0;                // t: bit width of n
  int path_length = 0;         // equals `bits` unless remediation lengthened paths
  std::vector<VertexId> base;  // v_1..v_n in construction order
  std::vector<std::vector<VertexId>> paths;  // u_1..u_len hanging off each v_j
};

// Rigid graph H with distinguished x, y: deleting x reveals the group, and
// y has trivial stabilizer in H - x.
struct RevealGadget {
  Graph graph;
  VertexId x{};
  VertexId y{};
  // Orbit of y in H - x; filled in by verification.
  std::vector<VertexId> orbit;
  FiniteGroup group = groups::trivial();
  GadgetLayout layout;
  bool verified = false;
};

inline std::size_t reveal_gadget_vertex_count(std::size_t base_vertices) {
  const int t = std::bit_width(base_vertices);
  return base_vertices * static_cast<std::size_t>(t + 1) + 1;
}

namespace detail {

inline RevealGadget assemble_gadget(const StabilizedGraph& base, int path_length) {
  RevealGadget gadget;
  gadget.group = base.group;
  gadget.graph = base.graph;
  gadget.y = base.anchor;
  VertexTag ytag = gadget.graph.tag(gadget.y);
  ytag.role = Role::kRevealY;
  gadget.graph.set_tag(gadget.y, ytag);

  GadgetLayout& layout = gadget.layout;
  layout.base = base.graph.vertices();
  layout.n = layout.base.size();
  layout.bits = std::bit_width(layout.n);
  layout.path_length = path_length;
  for (VertexId v : layout.base) {
    layout.paths.push_back(gadget.graph.attach_pendant_path(
        v, path_length, [](int i) { return VertexTag{Role::kGadgetPath, i, std::nullopt, std::nullopt}; }));
  }
  gadget.x = gadget.graph.add_vertex({Role::kRevealX, -1, std::nullopt, std::nullopt});
  gadget.graph.join_vertex_to_set(gadget.x, layout.base);
  for (std::size_t j = 1; j <= layout.n; ++j) {
    for (int i = 1; i <= layout.bits; ++i) {
      if ((j >> (i - 1)) & 1U) gadget.graph.add_edge(gadget.x, layout.paths[j - 1][static_cast<std::size_t>(i - 1)]);
    }
  }
  return gadget;
}

}  // namespace detail

// Role-based initial colouring usable as a search hint on construction
// output. y is an element vertex with a marker, so it shares the element
// colour; colouring it apart would fix it and shrink the group.
inline std::map<VertexId, int> tag_hint_colors(const Graph& g) {
  std::map<VertexId, int> colors;
  for (VertexId v : g.vertices()) {
    Role r = g.tag(v).role;
    if (r == Role::kRevealY) r = Role::kGroupElement;
    colors[v] = static_cast<int>(r);
  }
  return colors;
}

// Checks the five gadget invariants and fills in the orbit of y.
inline InvariantReport verify_reveal_gadget(RevealGadget& gadget, const AutOptions& options = {}) {
  InvariantReport report;
  const AutGroup aut_h = automorphisms(gadget.graph, options);
  report.checks.push_back({"aut_trivial", aut_h.order == 1, "|Aut(H)| = " + aut_h.order.str()});

  const Graph minus_x = delete_vertex(gadget.graph, gadget.x);
  report.checks.push_back({"minus_x_connected", is_connected(minus_x), ""});

  const AutGroup aut_minus = automorphisms(minus_x, detail::enumerating(options, gadget.group));
  bool iso = false;
  if (aut_minus.enumerated()) iso = are_isomorphic(aut_as_abstract_group(aut_minus), gadget.group);
  report.checks.push_back({"minus_x_aut_isomorphic_to_group", iso,
                           "|Aut(H-x)| = " + aut_minus.order.str() + ", |group| = " + std::to_string(gadget.group.order())});

  const GroupOrder stab = stabilizer_order(minus_x, gadget.y, options);
  report.checks.push_back({"y_stabilizer_trivial", stab == 1, "|Stab(y)| = " + stab.str()});

  const std::size_t expected =
      gadget.layout.n * static_cast<std::size_t>(gadget.layout.path_length + 1) + 1;
  report.checks.push_back({"size_formula", gadget.graph.num_vertices() == expected,
                           "|V| = " + std::to_string(gadget.graph.num_vertices()) + ", n(t+1)+1 = " +
                               std::to_string(expected)});
  gadget.orbit = orbit_of(aut_minus, gadget.y);
  return report;
}

// Base graph from frucht_with_trivial_stabilizer with a pendant path of
// length t = bit_width(n) on every base vertex v_j, and a vertex x adjacent
// to every v_j and to the i-th path vertex of v_j exactly when bit i of j is
// set. If verification fails the paths are lengthened by n (the bit pattern
// stays on the first t positions) before giving up.
inline RevealGadget build_reveal_gadget(const FiniteGroup& group, const ConstructionOptions& options = {}) {
  const StabilizedGraph base = frucht_with_trivial_stabilizer(group, options);
  const int bits = std::bit_width(base.graph.num_vertices());
  RevealGadget gadget = detail::assemble_gadget(base, bits);
  if (!options.verify) return gadget;
  InvariantReport report = verify_reveal_gadget(gadget, options.aut());
  if (!report.all_passed()) {
    gadget = detail::assemble_gadget(base, bits + static_cast<int>(base.graph.num_vertices()));
    report = verify_reveal_gadget(gadget, options.aut());
    if (!report.all_passed()) {
      throw VerificationError("reveal gadget for " + group.name() + " failed verification: " + report.failures());
    }
  }
  gadget.verified = true;
  return gadget;
}

}  // namespace vdg

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "vdg/automorphism.hpp"
#include "vdg/constructions.hpp"
#include "vdg/error.hpp"
#include "vdg/graph.hpp"
#include "vdg/graph_io.hpp"
#include "vdg/group.hpp"
#include "vdg/group_iso.hpp"
#include "vdg/group_spec.hpp"
#include "vdg/limits.hpp"
#include "vdg/permutation.hpp"

namespace vdg {

// Group specs Γ_0, Γ_1..Γ_k as the adversary wrote them, and the number of
// rounds.
struct GameConfig {
  std::vector<std::string> groups;
  int rounds = 1;

  int k() const { return static_cast<int>(groups.size()) - 1; }
};

// One copy of a reveal gadget placed in the game graph.
struct GadgetHandle {
  int id = 0;  // also stored as the `gadget` field of the copy's tags
  int layer = 0;
  VertexId parent{};
  int group_index = 0;  // after deduplication
  std::vector<VertexId> vertices;
  VertexId x{};
  VertexId y{};
  std::vector<VertexId> orbit;
};

struct MoveRecord {
  int challenge = 0;    // index named by the adversary
  int group_index = 0;  // deduplicated index actually used
  VertexId deleted{};
  std::optional<GroupOrder> aut_order;
  // Unset when the round was not verified or only its order was computed.
  std::optional<bool> verified;
  // Aut was too large to enumerate, so only the orders were compared.
  bool partial = false;
};

enum class Strategy {
  kRevealX,
  // Deliberately wrong: deletes the y-copy. Used as a negative control.
  kDeleteYCopy,
};

struct GameState {
  GameConfig config;
  Limits limits;
  // Γ_0 followed by the pairwise non-isomorphic challenge groups.
  std::vector<FiniteGroup> groups;
  // Adversary index (1..k) to deduplicated index; slot 0 unused.
  std::vector<int> index_map;

  std::shared_ptr<const Graph> initial;
  std::string initial_hash;
  std::optional<GroupOrder> initial_order;
  std::optional<bool> initial_verified;

  Graph graph;
  int round = 0;
  std::vector<std::vector<VertexId>> u_sets;  // U_0..U_rounds
  // Layer j holds V(F_j) minus V(F_{j-1}); layer 0 is V(F_0).
  std::vector<std::vector<VertexId>> layers;
  std::vector<VertexId> anchors;
  std::vector<GadgetHandle> handles;
  std::map<std::tuple<int, VertexId, int>, std::size_t> handle_at;
  std::vector<VertexId> u_path;  // u_0..u_round
  std::vector<MoveRecord> history;

  int k() const { return config.k(); }
  int distinct_k() const { return static_cast<int>(groups.size()) - 1; }
  int remaining_rounds() const { return config.rounds - round; }
  bool finished() const { return round >= config.rounds; }
  VertexId current_u() const { return u_path.back(); }

  int resolve(int challenge) const {
    if (challenge < 1 || challenge > k()) {
      throw BadIndexError("bad index " + std::to_string(challenge) + ": challenges range over 1.." +
                          std::to_string(k()));
    }
    return index_map[static_cast<std::size_t>(challenge)];
  }

  const GadgetHandle& handle(int layer, VertexId parent, int group_index) const {
    const auto it = handle_at.find({layer, parent, group_index});
    if (it == handle_at.end()) {
      throw PreconditionError("no gadget at layer " + std::to_string(layer) + " below " + to_string(parent));
    }
    return handles[it->second];
  }

  // V(F_j), sorted.
  std::vector<VertexId> f_vertices(int j) const {
    if (j < 0 || j > config.rounds) throw PreconditionError("layer " + std::to_string(j) + " out of range");
    std::vector<VertexId> out;
    for (int i = 0; i <= j; ++i) out.insert(out.end(), layers[i].begin(), layers[i].end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

// The game graph is far larger than anything else handed to the engine, so
// it gets its own vertex bound.
inline AutOptions game_aut_options(const Limits& limits) {
  AutOptions o = AutOptions::from(limits);
  o.max_vertices = std::max(limits.max_aut_vertices, limits.max_game_vertices);
  return o;
}

inline std::size_t gadget_vertex_count(const FiniteGroup& g) {
  if (g.order() == 1) return reveal_gadget_vertex_count(frucht_vertex_count(1, 0));
  return reveal_gadget_vertex_count(frucht_vertex_count(g.order(), minimal_generating_set(g).size()));
}

// |V(G_0)| from |F_0| = |H_0| - 1, layer j+1 = |U_j| * sum |H_i|,
// |U_{j+1}| = |U_j| * sum |Γ_i|, plus the rounds+1 anchors.
inline GroupOrder projected_game_vertices(const std::vector<FiniteGroup>& groups, int rounds) {
  GroupOrder total = gadget_vertex_count(groups[0]) - 1;
  GroupOrder u = groups[0].order();
  std::size_t gadgets = 0;
  std::size_t orbits = 0;
  for (std::size_t i = 1; i < groups.size(); ++i) {
    gadgets += gadget_vertex_count(groups[i]);
    orbits += groups[i].order();
  }
  for (int j = 0; j < rounds; ++j) {
    total += u * gadgets;
    u *= orbits;
  }
  return total + rounds + 1;
}

namespace detail {

inline void dedup_groups(GameState& s) {
  s.groups.push_back(build_group(s.config.groups[0], s.limits));
  s.index_map.assign(s.config.groups.size(), 0);
  for (std::size_t i = 1; i < s.config.groups.size(); ++i) {
    FiniteGroup g = build_group(s.config.groups[i], s.limits);
    int found = 0;
    for (std::size_t r = 1; r < s.groups.size() && found == 0; ++r) {
      if (are_isomorphic(s.groups[r], g)) found = static_cast<int>(r);
    }
    if (found == 0) {
      s.groups.push_back(std::move(g));
      found = static_cast<int>(s.groups.size()) - 1;
    }
    s.index_map[i] = found;
  }
}

inline std::vector<VertexId> mapped(const std::vector<VertexId>& ids, const IdMap& map) {
  std::vector<VertexId> out;
  out.reserve(ids.size());
  for (VertexId v : ids) out.push_back(map.at(v));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<VertexId> values(const IdMap& map) {
  std::vector<VertexId> out;
  out.reserve(map.size());
  for (const auto& [from, to] : map) out.push_back(to);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Builds G_0: F_0 = H_0 - x_0, then layer by layer a copy of every H_i
// joined to each v in U_j, then the anchor path a_0..a_rounds with a_j joined
// to layer j. With `verify`, Aut(G_0) is computed and checked against Γ_0.
inline GameState build_game(const GameConfig& config, const Limits& limits = {}, bool verify = true) {
  if (config.groups.size() < 2) throw SpecError("a game needs Γ_0 and at least one challenge group");
  if (config.rounds < 1) throw SpecError("rounds must be at least 1");
  GameState s;
  s.config = config;
  s.limits = limits;
  detail::dedup_groups(s);

  const GroupOrder projected = projected_game_vertices(s.groups, config.rounds);
  if (projected > limits.max_game_vertices) {
    throw LimitError("game graph would have " + projected.str() + " vertices, above the limit of " +
                     std::to_string(limits.max_game_vertices));
  }

  ConstructionOptions copt;
  copt.limits = limits;
  std::vector<RevealGadget> gadgets;
  for (const FiniteGroup& g : s.groups) gadgets.push_back(build_reveal_gadget(g, copt));

  Graph& g = s.graph;
  const RevealGadget& h0 = gadgets[0];
  const IdMap f0 = g.disjoint_copy(delete_vertex(h0.graph, h0.x), [](const VertexTag& t) {
    VertexTag out = t;
    out.layer = 0;
    return out;
  });
  s.layers.push_back(detail::values(f0));
  s.u_sets.push_back(detail::mapped(h0.orbit, f0));
  s.u_path.push_back(f0.at(h0.y));

  for (int j = 0; j < config.rounds; ++j) {
    std::vector<VertexId> layer;
    std::vector<VertexId> next_u;
    for (VertexId v : s.u_sets[static_cast<std::size_t>(j)]) {
      for (int i = 1; i <= s.distinct_k(); ++i) {
        const RevealGadget& h = gadgets[static_cast<std::size_t>(i)];
        GadgetHandle handle;
        handle.id = static_cast<int>(s.handles.size()) + 1;
        handle.layer = j + 1;
        handle.parent = v;
        handle.group_index = i;
        const IdMap copy = g.disjoint_copy(h.graph, [&handle](const VertexTag& t) {
          VertexTag out = t;
          out.layer = handle.layer;
          out.gadget = handle.id;
          return out;
        });
        handle.vertices = detail::values(copy);
        handle.x = copy.at(h.x);
        handle.y = copy.at(h.y);
        handle.orbit = detail::mapped(h.orbit, copy);
        g.join_vertex_to_set(v, handle.vertices);
        layer.insert(layer.end(), handle.vertices.begin(), handle.vertices.end());
        next_u.insert(next_u.end(), handle.orbit.begin(), handle.orbit.end());
        s.handle_at[{handle.layer, v, i}] = s.handles.size();
        s.handles.push_back(std::move(handle));
      }
    }
    std::sort(next_u.begin(), next_u.end());
    s.layers.push_back(std::move(layer));
    s.u_sets.push_back(std::move(next_u));
  }

  for (int j = 0; j <= config.rounds; ++j) {
    const VertexId a = g.add_vertex({Role::kAnchor, j, std::nullopt, std::nullopt});
    if (j > 0) g.add_edge(s.anchors.back(), a);
    g.join_vertex_to_set(a, s.layers[static_cast<std::size_t>(j)]);
    s.anchors.push_back(a);
  }

  // Remediated gadgets are larger than projected; recheck the real size.
  if (g.num_vertices() > limits.max_game_vertices) {
    throw LimitError("game graph has " + std::to_string(g.num_vertices()) + " vertices, above the limit of " +
                     std::to_string(limits.max_game_vertices));
  }

  if (verify) {
    AutOptions options = game_aut_options(limits);
    options.enumeration_cap = std::max(options.enumeration_cap, s.groups[0].order());
    const AutGroup aut = automorphisms(g, options);
    s.initial_order = aut.order;
    bool iso = aut.order == s.groups[0].order();
    if (iso && aut.enumerated()) iso = are_isomorphic(aut_as_abstract_group(aut), s.groups[0]);
    s.initial_verified = iso;
    if (!iso) {
      throw VerificationError("Aut(G_0) has order " + aut.order.str() + " and is not isomorphic to " +
                              s.groups[0].name());
    }
  }
  s.initial = std::make_shared<const Graph>(g);
  s.initial_hash = graph_hash(g);
  return s;
}

// Applies the player's move for `challenge` (an adversary index) and returns
// the deleted vertex: the x-copy in the gadget for that group hanging off the
// current u. The y-copy of the same gadget becomes the next u.
inline VertexId player_move(GameState& s, int challenge, Strategy strategy = Strategy::kRevealX) {
  if (s.finished()) {
    throw GameOverError("game finished: all " + std::to_string(s.config.rounds) + " rounds have been played");
  }
  const int i = s.resolve(challenge);
  const GadgetHandle& h = s.handle(s.round + 1, s.current_u(), i);
  const VertexId v = strategy == Strategy::kRevealX ? h.x : h.y;
  s.graph.delete_vertex(v);
  s.u_path.push_back(h.y);
  ++s.round;
  s.history.push_back({challenge, i, v, std::nullopt, std::nullopt, false});
  return v;
}

// Computes Aut(G_round) for the latest move and, with `isomorphism`, checks
// it against the challenged group. Without it only the order is recorded.
inline const MoveRecord& verify_round(GameState& s, bool isomorphism = true) {
  if (s.round < 1) throw PreconditionError("no move to verify");
  MoveRecord& rec = s.history.back();
  const FiniteGroup& target = s.groups[static_cast<std::size_t>(rec.group_index)];
  const AutGroup aut = automorphisms(s.graph, game_aut_options(s.limits));
  rec.aut_order = aut.order;
  rec.partial = false;
  rec.verified.reset();
  if (!isomorphism) return rec;
  if (aut.order != target.order()) {
    rec.verified = false;
  } else if (aut.enumerated()) {
    rec.verified = are_isomorphic(aut_as_abstract_group(aut), target);
  } else {
    rec.verified = true;
    rec.partial = true;
  }
  return rec;
}

enum class Verify { kNone, kOrderOnly, kFull };

inline const MoveRecord& play_round(GameState& s, int challenge, Verify verify = Verify::kFull,
                                    Strategy strategy = Strategy::kRevealX) {
  player_move(s, challenge, strategy);
  if (verify != Verify::kNone) verify_round(s, verify == Verify::kFull);
  return s.history.back();
}

struct SequenceResult {
  std::vector<int> challenges;
  std::vector<VertexId> deleted;
  std::vector<GroupOrder> orders;
  std::vector<bool> verified;
  bool passed = false;
};

struct ExhaustiveReport {
  GroupOrder initial_order = 0;
  std::size_t graph_vertices = 0;
  std::vector<SequenceResult> sequences;

  bool all_passed() const {
    return !sequences.empty() &&
           std::all_of(sequences.begin(), sequences.end(), [](const SequenceResult& r) { return r.passed; });
  }
};

// Plays every challenge sequence in {1..k}^rounds from a fresh copy of G_0
// and verifies every round.
inline ExhaustiveReport verify_exhaustive(const GameConfig& config, const Limits& limits = {},
                                          Strategy strategy = Strategy::kRevealX) {
  if (config.groups.size() < 2 || config.rounds < 1) throw SpecError("a game needs k >= 1 and rounds >= 1");
  GroupOrder count = 1;
  for (int j = 0; j < config.rounds; ++j) count *= config.k();
  if (count > limits.exhaustive_budget) {
    throw LimitError(count.str() + " challenge sequences exceed the exhaustive budget of " +
                     std::to_string(limits.exhaustive_budget));
  }
  const GameState base = build_game(config, limits, true);
  ExhaustiveReport report;
  report.initial_order = *base.initial_order;
  report.graph_vertices = base.graph.num_vertices();
  std::vector<int> seq(static_cast<std::size_t>(config.rounds), 1);
  for (;;) {
    GameState s = base;
    SequenceResult r;
    r.challenges = seq;
    r.passed = true;
    for (int c : seq) {
      const MoveRecord& rec = play_round(s, c, Verify::kFull, strategy);
      r.deleted.push_back(rec.deleted);
      r.orders.push_back(*rec.aut_order);
      r.verified.push_back(*rec.verified);
      r.passed = r.passed && *rec.verified;
    }
    report.sequences.push_back(std::move(r));
    int pos = config.rounds - 1;
    while (pos >= 0 && seq[static_cast<std::size_t>(pos)] == config.k()) seq[static_cast<std::size_t>(pos--)] = 1;
    if (pos < 0) break;
    ++seq[static_cast<std::size_t>(pos)];
  }
  return report;
}

struct RestrictionReport {
  GroupOrder order_g = 0;  // |Aut(G_0 - X)|
  GroupOrder order_f = 0;  // |Aut(F_j - X)|
  bool restrictions_are_automorphisms = false;
  bool restriction_injective = false;

  bool holds() const { return order_g == order_f && restrictions_are_automorphisms && restriction_injective; }
};

// Compares Aut(G_0 - X) with Aut(F_j - X) and checks that restricting
// automorphisms of the former to V(F_j) - X is an injective homomorphism
// into the latter.
inline RestrictionReport check_restriction(const GameState& s, int j, const std::vector<VertexId>& x) {
  const std::vector<VertexId> fj = s.f_vertices(j);
  const std::set<VertexId> removed(x.begin(), x.end());
  for (VertexId v : removed) {
    if (!std::binary_search(fj.begin(), fj.end(), v)) {
      throw PreconditionError("vertex " + to_string(v) + " is not in F_" + std::to_string(j));
    }
  }
  Graph g_minus = *s.initial;
  for (VertexId v : removed) g_minus.delete_vertex(v);
  std::vector<VertexId> keep;
  for (VertexId v : fj) {
    if (!removed.count(v)) keep.push_back(v);
  }
  const Graph f_minus = s.initial->induced(keep);

  const AutOptions options = game_aut_options(s.limits);
  const AutGroup a = automorphisms(g_minus, options);
  const AutGroup b = automorphisms(f_minus, options);
  RestrictionReport report;
  report.order_g = a.order;
  report.order_f = b.order;

  // Restriction of one automorphism of G_0 - X, as a permutation of b's
  // positions; empty if it leaves V(F_j) - X.
  auto restrict = [&](const Permutation& p) -> std::optional<Permutation> {
    std::vector<int> images;
    images.reserve(b.degree());
    for (VertexId v : b.vertex_ids) {
      const VertexId w = a.image(p, v);
      if (!std::binary_search(keep.begin(), keep.end(), w)) return std::nullopt;
      images.push_back(b.position(w));
    }
    Permutation r(std::move(images));
    for (const auto& [u, w] : f_minus.edges()) {
      if (!f_minus.has_edge(b.vertex_ids[static_cast<std::size_t>(r[b.position(u)])],
                            b.vertex_ids[static_cast<std::size_t>(r[b.position(w)])])) {
        return std::nullopt;
      }
    }
    return r;
  };

  std::vector<Permutation> restricted;
  report.restrictions_are_automorphisms = true;
  for (const Permutation& p : a.generators) {
    auto r = restrict(p);
    if (!r) {
      report.restrictions_are_automorphisms = false;
      return report;
    }
    restricted.push_back(std::move(*r));
  }
  // The image of a homomorphism is generated by the images of generators, so
  // the map is injective exactly when that image has |Aut(G_0 - X)| elements.
  report.restriction_injective = group_order(b.degree(), restricted) == a.order;
  if (report.restriction_injective && a.enumerated()) {
    std::set<Permutation> seen;
    for (const Permutation& p : *a.elements) {
      auto r = restrict(p);
      if (!r || !seen.insert(std::move(*r)).second) {
        report.restriction_injective = false;
        break;
      }
    }
  }
  return report;
}

}  // namespace vdg

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vdg/graph.hpp"

namespace vdg::detail {

// Graph snapshot over dense indices 0..n-1 (positions in the sorted ID list),
// stored as compressed adjacency rows.
struct DenseGraph {
  std::vector<VertexId> ids;
  std::vector<int> offsets{0};
  std::vector<int> targets;

  explicit DenseGraph(const Graph& g) : ids(g.vertices()) {
    std::vector<int> index_of(static_cast<std::size_t>(g.next_id()), -1);
    for (std::size_t i = 0; i < ids.size(); ++i) index_of[static_cast<std::size_t>(raw(ids[i]))] = static_cast<int>(i);
    offsets.reserve(ids.size() + 1);
    targets.reserve(2 * g.num_edges());
    for (VertexId v : ids) {
      for (VertexId w : g.neighbors(v)) targets.push_back(index_of[static_cast<std::size_t>(raw(w))]);
      offsets.push_back(static_cast<int>(targets.size()));
    }
  }

  int size() const { return static_cast<int>(ids.size()); }
  std::size_t num_edges() const { return targets.size() / 2; }
  std::span<const int> neighbors(int v) const {
    return {targets.data() + offsets[static_cast<std::size_t>(v)],
            static_cast<std::size_t>(offsets[static_cast<std::size_t>(v) + 1] - offsets[static_cast<std::size_t>(v)])};
  }
  int degree(int v) const {
    return offsets[static_cast<std::size_t>(v) + 1] - offsets[static_cast<std::size_t>(v)];
  }
};

// Ordered partition of 0..n-1. Each cell is a contiguous range of `elems`
// and is named by the index of its first position.
struct Partition {
  std::vector<int> elems;
  std::vector<int> pos;
  std::vector<int> cell_of;
  std::vector<int> cell_size;  // meaningful at cell starts only
  int num_cells = 0;

  int size() const { return static_cast<int>(elems.size()); }
  bool discrete() const { return num_cells == size(); }
  std::span<const int> cell(int first) const {
    return {elems.data() + first, static_cast<std::size_t>(cell_size[static_cast<std::size_t>(first)])};
  }

  // First non-singleton cell of minimum size, or -1 when discrete.
  int target_cell() const {
    int best = -1;
    for (int f = 0; f < size(); f += cell_size[static_cast<std::size_t>(f)]) {
      const int s = cell_size[static_cast<std::size_t>(f)];
      if (s > 1 && (best < 0 || s < cell_size[static_cast<std::size_t>(best)])) best = f;
    }
    return best;
  }
};

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  v += 0x9e3779b97f4a7c15ULL;
  v = (v ^ (v >> 30)) * 0xbf58476d1ce4e5b9ULL;
  v = (v ^ (v >> 27)) * 0x94d049bb133111ebULL;
  v ^= v >> 31;
  return (h ^ v) * 0x100000001b3ULL + 0x632be59bd9b4e019ULL;
}

// Equitable-partition refinement. Every decision depends only on cell
// positions and neighbour counts, so the returned trace hash is an
// isomorphism invariant of (graph, starting partition).
class Refiner {
 public:
  explicit Refiner(const DenseGraph& g)
      : graph_(g),
        count_(static_cast<std::size_t>(g.size()), 0),
        in_queue_(static_cast<std::size_t>(g.size()), 0) {}

  // Partition whose cells group equal colors in ascending color order.
  std::pair<Partition, std::uint64_t> initial(std::span<const int> colors) {
    const int n = graph_.size();
    Partition p;
    p.elems.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) p.elems[static_cast<std::size_t>(v)] = v;
    auto color = [&](int v) { return colors.empty() ? 0 : colors[static_cast<std::size_t>(v)]; };
    std::stable_sort(p.elems.begin(), p.elems.end(), [&](int a, int b) { return color(a) < color(b); });
    p.pos.resize(static_cast<std::size_t>(n));
    p.cell_of.resize(static_cast<std::size_t>(n));
    p.cell_size.assign(static_cast<std::size_t>(n), 0);
    std::uint64_t trace = mix(0, static_cast<std::uint64_t>(n));
    std::vector<int> splitters;
    for (int i = 0; i < n;) {
      int j = i;
      while (j < n && color(p.elems[static_cast<std::size_t>(j)]) == color(p.elems[static_cast<std::size_t>(i)])) ++j;
      for (int k = i; k < j; ++k) {
        p.pos[static_cast<std::size_t>(p.elems[static_cast<std::size_t>(k)])] = k;
        p.cell_of[static_cast<std::size_t>(p.elems[static_cast<std::size_t>(k)])] = i;
      }
      p.cell_size[static_cast<std::size_t>(i)] = j - i;
      trace = mix(mix(trace, static_cast<std::uint64_t>(color(p.elems[static_cast<std::size_t>(i)]))),
                  static_cast<std::uint64_t>(j - i));
      splitters.push_back(i);
      ++p.num_cells;
      i = j;
    }
    trace = mix(trace, refine(p, splitters));
    return {std::move(p), trace};
  }

  // Splits {v} off the front of its cell and refines. Returns the trace.
  std::uint64_t individualize(Partition& p, int v) {
    const int f = p.cell_of[static_cast<std::size_t>(v)];
    const int s = p.cell_size[static_cast<std::size_t>(f)];
    swap_positions(p, v, p.elems[static_cast<std::size_t>(f)]);
    p.cell_size[static_cast<std::size_t>(f)] = 1;
    p.cell_size[static_cast<std::size_t>(f + 1)] = s - 1;
    for (int k = f + 1; k < f + s; ++k) p.cell_of[static_cast<std::size_t>(p.elems[static_cast<std::size_t>(k)])] = f + 1;
    ++p.num_cells;
    const int splitter[] = {f};
    return mix(mix(0x1d, static_cast<std::uint64_t>(f)), refine(p, splitter));
  }

  std::uint64_t refine(Partition& p, std::span<const int> splitters) {
    std::uint64_t trace = 0;
    std::vector<int> queue(splitters.begin(), splitters.end());
    for (int f : queue) in_queue_[static_cast<std::size_t>(f)] = 1;
    std::vector<int> splitter_elems;
    std::vector<int> starts;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int f = queue[head];
      in_queue_[static_cast<std::size_t>(f)] = 0;
      if (p.discrete()) continue;
      const auto cell = p.cell(f);
      splitter_elems.assign(cell.begin(), cell.end());
      for (int w : splitter_elems) {
        for (int u : graph_.neighbors(w)) {
          if (count_[static_cast<std::size_t>(u)]++ == 0) touched_.push_back(u);
        }
      }
      std::sort(touched_.begin(), touched_.end(), [&](int a, int b) {
        const int ca = p.cell_of[static_cast<std::size_t>(a)], cb = p.cell_of[static_cast<std::size_t>(b)];
        if (ca != cb) return ca < cb;
        return count_[static_cast<std::size_t>(a)] < count_[static_cast<std::size_t>(b)];
      });
      trace = mix(trace, static_cast<std::uint64_t>(f));
      for (std::size_t i = 0; i < touched_.size();) {
        const int cf = p.cell_of[static_cast<std::size_t>(touched_[i])];
        std::size_t j = i;
        while (j < touched_.size() && p.cell_of[static_cast<std::size_t>(touched_[j])] == cf) ++j;
        split_cell(p, cf, std::span<const int>(touched_.data() + i, j - i), queue, starts, trace);
        i = j;
      }
      for (int u : touched_) count_[static_cast<std::size_t>(u)] = 0;
      touched_.clear();
    }
    for (int f : queue) in_queue_[static_cast<std::size_t>(f)] = 0;
    return mix(trace, static_cast<std::uint64_t>(p.num_cells));
  }

 private:
  static void swap_positions(Partition& p, int a, int b) {
    const int pa = p.pos[static_cast<std::size_t>(a)], pb = p.pos[static_cast<std::size_t>(b)];
    p.elems[static_cast<std::size_t>(pa)] = b;
    p.elems[static_cast<std::size_t>(pb)] = a;
    p.pos[static_cast<std::size_t>(a)] = pb;
    p.pos[static_cast<std::size_t>(b)] = pa;
  }

  // `group` holds the touched members of cell `cf`, sorted by count.
  void split_cell(Partition& p, int cf, std::span<const int> group, std::vector<int>& queue,
                  std::vector<int>& starts, std::uint64_t& trace) {
    const int cs = p.cell_size[static_cast<std::size_t>(cf)];
    const int t = static_cast<int>(group.size());
    const int low = count_[static_cast<std::size_t>(group.front())];
    const int high = count_[static_cast<std::size_t>(group.back())];
    trace = mix(mix(mix(trace, static_cast<std::uint64_t>(cf)), static_cast<std::uint64_t>(t)),
                static_cast<std::uint64_t>(low) << 32 | static_cast<std::uint64_t>(high));
    if (cs == 1 || (t == cs && low == high)) return;

    // Touched members go to the back of the cell in ascending count order;
    // untouched members (count 0) stay in front as the first subcell.
    const int base = cf + cs - t;
    for (int k = 0; k < t; ++k) swap_positions(p, group[static_cast<std::size_t>(k)], p.elems[static_cast<std::size_t>(base + k)]);
    starts.clear();
    if (base > cf) starts.push_back(cf);
    for (int k = 0; k < t; ++k) {
      if (k == 0 || count_[static_cast<std::size_t>(group[static_cast<std::size_t>(k)])] !=
                        count_[static_cast<std::size_t>(group[static_cast<std::size_t>(k) - 1])]) {
        starts.push_back(base + k);
      }
    }
    int largest = -1, largest_size = 0;
    for (std::size_t r = 0; r < starts.size(); ++r) {
      const int start = starts[r];
      const int end = r + 1 < starts.size() ? starts[r + 1] : cf + cs;
      p.cell_size[static_cast<std::size_t>(start)] = end - start;
      if (start != cf) {
        for (int k = start; k < end; ++k) p.cell_of[static_cast<std::size_t>(p.elems[static_cast<std::size_t>(k)])] = start;
      }
      if (end - start > largest_size) {
        largest = start;
        largest_size = end - start;
      }
      trace = mix(mix(trace, static_cast<std::uint64_t>(start)), static_cast<std::uint64_t>(end - start));
    }
    p.num_cells += static_cast<int>(starts.size()) - 1;
    const bool parent_queued = in_queue_[static_cast<std::size_t>(cf)] != 0;
    for (int start : starts) {
      if (in_queue_[static_cast<std::size_t>(start)]) continue;
      if (!parent_queued && start == largest) continue;
      in_queue_[static_cast<std::size_t>(start)] = 1;
      queue.push_back(start);
    }
  }

  const DenseGraph& graph_;
  std::vector<int> count_;
  std::vector<char> in_queue_;
  std::vector<int> touched_;
};

// True when sigma (a-index -> b-index) maps every edge of a onto an edge of
// b. With equal degree sequences this makes sigma an isomorphism.
inline bool maps_edges(const DenseGraph& a, const DenseGraph& b, std::span<const int> sigma,
                       std::vector<char>& mark) {
  mark.assign(static_cast<std::size_t>(b.size()), 0);
  for (int u = 0; u < a.size(); ++u) {
    const int su = sigma[static_cast<std::size_t>(u)];
    if (a.degree(u) != b.degree(su)) return false;
    for (int x : b.neighbors(su)) mark[static_cast<std::size_t>(x)] = 1;
    bool ok = true;
    for (int w : a.neighbors(u)) {
      if (!mark[static_cast<std::size_t>(sigma[static_cast<std::size_t>(w)])]) {
        ok = false;
        break;
      }
    }
    for (int x : b.neighbors(su)) mark[static_cast<std::size_t>(x)] = 0;
    if (!ok) return false;
  }
  return true;
}

// First path of the search tree: root, then repeatedly individualize the
// first vertex of the target cell until the partition is discrete.
struct ReferencePath {
  std::vector<Partition> nodes;
  std::vector<std::uint64_t> traces;
  std::vector<int> target_cells;
  std::vector<int> chosen;

  std::size_t depth() const { return target_cells.size(); }
  const Partition& leaf() const { return nodes.back(); }
};

inline ReferencePath build_reference_path(Refiner& refiner, std::span<const int> colors) {
  ReferencePath path;
  auto [root, trace] = refiner.initial(colors);
  path.nodes.push_back(std::move(root));
  path.traces.push_back(trace);
  while (!path.nodes.back().discrete()) {
    const Partition& node = path.nodes.back();
    const int cell = node.target_cell();
    const int v = node.elems[static_cast<std::size_t>(cell)];
    Partition child = node;
    const std::uint64_t t = mix(path.traces.back(), refiner.individualize(child, v));
    path.target_cells.push_back(cell);
    path.chosen.push_back(v);
    path.nodes.push_back(std::move(child));
    path.traces.push_back(t);
  }
  return path;
}

// Searches a subtree of `target` for a leaf whose position-wise match with
// the reference leaf is an isomorphism. Subtrees whose traces diverge from
// the reference path are pruned.
class LeafMatcher {
 public:
  LeafMatcher(const DenseGraph& reference, const ReferencePath& path, const DenseGraph& target)
      : reference_(reference), path_(path), target_(target), refiner_(target) {}

  Refiner& refiner() { return refiner_; }
  std::size_t nodes_visited() const { return visited_; }

  bool matches(const Partition& node, std::uint64_t trace, std::size_t level) const {
    return trace == path_.traces[level] && node.num_cells == path_.nodes[level].num_cells;
  }

  std::optional<std::vector<int>> search(const Partition& node, std::uint64_t trace, std::size_t level) {
    ++visited_;
    if (node.discrete()) {
      const Partition& leaf = path_.leaf();
      std::vector<int> sigma(static_cast<std::size_t>(leaf.size()));
      for (int k = 0; k < leaf.size(); ++k) {
        sigma[static_cast<std::size_t>(leaf.elems[static_cast<std::size_t>(k)])] = node.elems[static_cast<std::size_t>(k)];
      }
      if (maps_edges(reference_, target_, sigma, mark_)) return sigma;
      return std::nullopt;
    }
    if (level >= path_.depth()) return std::nullopt;
    const int cell = path_.target_cells[level];
    if (node.cell_size[static_cast<std::size_t>(cell)] != path_.nodes[level].cell_size[static_cast<std::size_t>(cell)]) {
      return std::nullopt;
    }
    const auto members = node.cell(cell);
    const std::vector<int> candidates(members.begin(), members.end());
    for (int w : candidates) {
      Partition child = node;
      const std::uint64_t t = mix(trace, refiner_.individualize(child, w));
      if (!matches(child, t, level + 1)) continue;
      if (auto sigma = search(child, t, level + 1)) return sigma;
    }
    return std::nullopt;
  }

 private:
  const DenseGraph& reference_;
  const ReferencePath& path_;
  const DenseGraph& target_;
  Refiner refiner_;
  std::vector<char> mark_;
  std::size_t visited_ = 0;
};

}  // namespace vdg::detail

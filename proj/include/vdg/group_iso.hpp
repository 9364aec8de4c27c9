#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "vdg/group.hpp"

namespace vdg {

namespace detail {

inline bool extend_generating_set(const FiniteGroup& g, std::size_t target_size, int start,
                                  std::vector<int>& chosen, const std::vector<bool>& span) {
  const int m = static_cast<int>(g.order());
  for (int s = start; s < m; ++s) {
    // An element already in the span of earlier choices never belongs to a
    // minimum-size generating set.
    if (span[static_cast<std::size_t>(s)]) continue;
    chosen.push_back(s);
    const std::vector<bool> next = g.closure(chosen);
    if (chosen.size() == target_size) {
      if (std::find(next.begin(), next.end(), false) == next.end()) return true;
    } else if (extend_generating_set(g, target_size, s + 1, chosen, next)) {
      return true;
    }
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

// Lexicographically least generating set of minimum cardinality, found by
// exhaustive search in increasing size. Empty for the trivial group.
inline std::vector<int> minimal_generating_set(const FiniteGroup& g) {
  std::vector<int> chosen;
  if (g.order() == 1) return chosen;
  const std::vector<bool> identity_only = g.closure(chosen);
  for (std::size_t size = 1;; ++size) {
    chosen.clear();
    if (detail::extend_generating_set(g, size, 1, chosen, identity_only)) return chosen;
  }
}

namespace detail {

// Extends the homomorphism fixed by the images of generators[0..count) over
// the subgroup they generate. Returns false on an inconsistency or a
// collision (non-injective map).
inline bool propagate_images(const FiniteGroup& a, const FiniteGroup& b,
                             const std::vector<int>& generators, const std::vector<int>& images,
                             std::size_t count, std::vector<int>& phi) {
  std::fill(phi.begin(), phi.end(), -1);
  std::vector<bool> used(b.order(), false);
  phi[0] = 0;
  used[0] = true;
  std::vector<int> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (std::size_t q = 0; q < count; ++q) {
      const int y = a.mul(x, generators[q]);
      const int image = b.mul(phi[static_cast<std::size_t>(x)], images[q]);
      int& slot = phi[static_cast<std::size_t>(y)];
      if (slot == -1) {
        if (used[static_cast<std::size_t>(image)]) return false;
        used[static_cast<std::size_t>(image)] = true;
        slot = image;
        queue.push_back(y);
      } else if (slot != image) {
        return false;
      }
    }
  }
  return true;
}

inline bool search_isomorphism(const FiniteGroup& a, const FiniteGroup& b,
                               const std::vector<int>& generators,
                               const std::vector<std::vector<int>>& candidates,
                               std::vector<int>& images, std::vector<int>& phi) {
  const std::size_t k = images.size();
  if (k == generators.size()) return true;
  for (int c : candidates[k]) {
    images.push_back(c);
    if (propagate_images(a, b, generators, images, k + 1, phi) &&
        search_isomorphism(a, b, generators, candidates, images, phi)) {
      return true;
    }
    images.pop_back();
  }
  return false;
}

}  // namespace detail

// An explicit isomorphism a -> b as an image array, if one exists.
inline std::optional<std::vector<int>> find_group_isomorphism(const FiniteGroup& a,
                                                              const FiniteGroup& b) {
  if (a.order() != b.order()) return std::nullopt;
  if (a.element_order_profile() != b.element_order_profile()) return std::nullopt;
  const std::vector<int> generators = minimal_generating_set(a);
  std::vector<std::vector<int>> candidates(generators.size());
  for (std::size_t q = 0; q < generators.size(); ++q) {
    const int wanted = a.element_order(generators[q]);
    for (int y = 1; y < static_cast<int>(b.order()); ++y) {
      if (b.element_order(y) == wanted) candidates[q].push_back(y);
    }
  }
  std::vector<int> images;
  std::vector<int> phi(a.order(), -1);
  phi[0] = 0;
  if (!detail::search_isomorphism(a, b, generators, candidates, images, phi)) return std::nullopt;
  // Generators reach every element, so phi is total and injective; the
  // homomorphism property was checked edge by edge while propagating.
  return phi;
}

inline bool are_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  return find_group_isomorphism(a, b).has_value();
}

}  // namespace vdg

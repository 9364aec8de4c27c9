#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vdg/error.hpp"

namespace vdg {

// Exact group orders; automorphism groups of modest graphs overflow 64 bits.
using GroupOrder = boost::multiprecision::cpp_int;

// Permutation of {0..n-1} stored as its image array.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {}

  static Permutation identity(std::size_t n) {
    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 0);
    return Permutation(std::move(image));
  }

  std::size_t size() const { return image_.size(); }
  int operator[](int x) const { return image_[static_cast<std::size_t>(x)]; }
  const std::vector<int>& images() const { return image_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (image_[i] != static_cast<int>(i)) return false;
    }
    return true;
  }

  bool is_bijection() const {
    std::vector<bool> hit(image_.size(), false);
    for (int y : image_) {
      if (y < 0 || static_cast<std::size_t>(y) >= image_.size() || hit[static_cast<std::size_t>(y)]) return false;
      hit[static_cast<std::size_t>(y)] = true;
    }
    return true;
  }

  Permutation inverse() const {
    std::vector<int> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[static_cast<std::size_t>(image_[i])] = static_cast<int>(i);
    return Permutation(std::move(inv));
  }

  // (a * b)(x) = a(b(x)).
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    std::vector<int> out(b.image_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.image_[static_cast<std::size_t>(b.image_[i])];
    return Permutation(std::move(out));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> image_;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const {
    std::size_t h = 1469598103934665603ULL;
    for (int x : p.images()) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

// Base and strong generating set built with the deterministic Schreier-Sims
// algorithm. Used to get exact orders of groups given only by generators.
class StabilizerChain {
 public:
  StabilizerChain(std::size_t degree, std::span<const Permutation> generators) : degree_(degree) {
    for (const Permutation& g : generators) {
      if (g.size() != degree) throw PreconditionError("generator degree mismatch");
      auto [residue, level] = sift(g, 0);
      if (!residue.is_identity()) add_strong_generator(std::move(residue), level);
    }
    complete();
  }

  GroupOrder order() const {
    GroupOrder out = 1;
    for (const Level& level : levels_) out *= level.orbit.size();
    return out;
  }

  bool contains(const Permutation& g) const {
    if (g.size() != degree_) return false;
    auto [residue, level] = sift(g, 0);
    return level == levels_.size() && residue.is_identity();
  }

  std::vector<int> base() const {
    std::vector<int> out;
    for (const Level& level : levels_) out.push_back(level.point);
    return out;
  }

 private:
  struct Level {
    int point = 0;
    std::vector<Permutation> strong;
    std::vector<int> orbit;
    // transversal[p] maps the base point to p.
    std::unordered_map<int, Permutation> transversal;
  };

  std::pair<Permutation, std::size_t> sift(Permutation h, std::size_t from) const {
    for (std::size_t i = from; i < levels_.size(); ++i) {
      const auto it = levels_[i].transversal.find(h[levels_[i].point]);
      if (it == levels_[i].transversal.end()) return {std::move(h), i};
      h = it->second.inverse() * h;
    }
    return {std::move(h), levels_.size()};
  }

  void add_strong_generator(Permutation g, std::size_t level) {
    if (level == levels_.size()) {
      Level fresh;
      for (std::size_t x = 0; x < degree_; ++x) {
        if (g[static_cast<int>(x)] != static_cast<int>(x)) {
          fresh.point = static_cast<int>(x);
          break;
        }
      }
      fresh.transversal.emplace(fresh.point, Permutation::identity(degree_));
      fresh.orbit.push_back(fresh.point);
      levels_.push_back(std::move(fresh));
    }
    levels_[level].strong.push_back(std::move(g));
  }

  std::vector<const Permutation*> generators_from(std::size_t level) const {
    std::vector<const Permutation*> out;
    for (std::size_t i = level; i < levels_.size(); ++i) {
      for (const Permutation& g : levels_[i].strong) out.push_back(&g);
    }
    return out;
  }

  void recompute_orbit(std::size_t level) {
    Level& l = levels_[level];
    const auto gens = generators_from(level);
    l.transversal.clear();
    l.orbit.assign(1, l.point);
    l.transversal.emplace(l.point, Permutation::identity(degree_));
    for (std::size_t head = 0; head < l.orbit.size(); ++head) {
      const int p = l.orbit[head];
      for (const Permutation* s : gens) {
        const int q = (*s)[p];
        if (!l.transversal.contains(q)) {
          l.transversal.emplace(q, *s * l.transversal.at(p));
          l.orbit.push_back(q);
        }
      }
    }
  }

  // Adds sifted Schreier generators until every level is closed.
  void complete() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = levels_.size(); i-- > 0 && !changed;) {
        recompute_orbit(i);
        const auto gens = generators_from(i);
        const Level& l = levels_[i];
        for (std::size_t k = 0; !changed && k < l.orbit.size(); ++k) {
          const int p = l.orbit[k];
          for (const Permutation* s : gens) {
            Permutation schreier = l.transversal.at((*s)[p]).inverse() * (*s) * l.transversal.at(p);
            if (schreier.is_identity()) continue;
            auto [residue, level] = sift(std::move(schreier), i + 1);
            if (!residue.is_identity()) {
              add_strong_generator(std::move(residue), level);
              changed = true;
              break;
            }
          }
        }
      }
    }
  }

  std::size_t degree_;
  std::vector<Level> levels_;
};

inline GroupOrder group_order(std::size_t degree, std::span<const Permutation> generators) {
  return StabilizerChain(degree, generators).order();
}

inline std::string order_to_string(const GroupOrder& order) { return order.str(); }

}  // namespace vdg

#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vdg/error.hpp"
#include "vdg/limits.hpp"

namespace vdg {

// A finite group stored as a Cayley table over element indices 0..m-1, with
// the identity at index 0. Construction validates every group law, so a live
// FiniteGroup is always a group.
class FiniteGroup {
 public:
  // `table` is row-major: table[a * order + b] is the index of a*b.
  FiniteGroup(std::size_t order, std::vector<int> table, std::string name = {})
      : order_(order), table_(std::move(table)), name_(std::move(name)) {
    validate();
    inverse_.resize(order_);
    for (std::size_t a = 0; a < order_; ++a) {
      for (std::size_t b = 0; b < order_; ++b) {
        if (mul(static_cast<int>(a), static_cast<int>(b)) == 0) {
          inverse_[a] = static_cast<int>(b);
          break;
        }
      }
    }
  }

  std::size_t order() const { return order_; }
  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  int mul(int a, int b) const {
    return table_[static_cast<std::size_t>(a) * order_ + static_cast<std::size_t>(b)];
  }
  int inverse(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  std::span<const int> row(int a) const {
    return {table_.data() + static_cast<std::size_t>(a) * order_, order_};
  }
  const std::vector<int>& table() const { return table_; }

  int element_order(int a) const {
    int k = 1;
    for (int x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  // Sorted multiset of element orders; a cheap isomorphism invariant.
  std::vector<int> element_order_profile() const {
    std::vector<int> orders(order_);
    for (std::size_t a = 0; a < order_; ++a) orders[a] = element_order(static_cast<int>(a));
    std::sort(orders.begin(), orders.end());
    return orders;
  }

  // Closure of `generators` under multiplication, as a membership mask.
  std::vector<bool> closure(std::span<const int> generators) const {
    std::vector<bool> member(order_, false);
    std::vector<int> frontier{0};
    member[0] = true;
    while (!frontier.empty()) {
      const int x = frontier.back();
      frontier.pop_back();
      for (int s : generators) {
        const int y = mul(x, s);
        if (!member[static_cast<std::size_t>(y)]) {
          member[static_cast<std::size_t>(y)] = true;
          frontier.push_back(y);
        }
      }
    }
    return member;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order_ == b.order_ && a.table_ == b.table_;
  }

 private:
  void validate() const {
    if (order_ == 0) throw GroupLawError("order must be positive", -1, -1, -1);
    if (table_.size() != order_ * order_) {
      throw SpecError("Cayley table has " + std::to_string(table_.size()) +
                      " entries, expected " + std::to_string(order_ * order_));
    }
    const int m = static_cast<int>(order_);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const int v = mul(a, b);
        if (v < 0 || v >= m) throw GroupLawError("closure (entry out of range)", a, b, v);
      }
    }
    for (int a = 0; a < m; ++a) {
      if (mul(0, a) != a || mul(a, 0) != a) throw GroupLawError("identity at index 0", 0, a, -1);
    }
    std::vector<int> seen(order_);
    for (int a = 0; a < m; ++a) {
      std::fill(seen.begin(), seen.end(), -1);
      for (int b = 0; b < m; ++b) {
        const int v = mul(a, b);
        if (seen[static_cast<std::size_t>(v)] >= 0) {
          throw GroupLawError("latin square (row repeats)", a, seen[static_cast<std::size_t>(v)], b);
        }
        seen[static_cast<std::size_t>(v)] = b;
      }
    }
    for (int b = 0; b < m; ++b) {
      std::fill(seen.begin(), seen.end(), -1);
      for (int a = 0; a < m; ++a) {
        const int v = mul(a, b);
        if (seen[static_cast<std::size_t>(v)] >= 0) {
          throw GroupLawError("latin square (column repeats)", seen[static_cast<std::size_t>(v)], a, b);
        }
        seen[static_cast<std::size_t>(v)] = a;
      }
    }
    for (int a = 0; a < m; ++a) {
      bool has_inverse = false;
      for (int b = 0; b < m && !has_inverse; ++b) has_inverse = mul(a, b) == 0;
      if (!has_inverse) throw GroupLawError("inverse", a, -1, -1);
    }
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const int ab = mul(a, b);
        for (int c = 0; c < m; ++c) {
          if (mul(ab, c) != mul(a, mul(b, c))) throw GroupLawError("associativity", a, b, c);
        }
      }
    }
  }

  std::size_t order_;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::string name_;
};

namespace groups {

inline FiniteGroup trivial() { return FiniteGroup(1, {0}, "trivial"); }

inline FiniteGroup cyclic(int n) {
  if (n < 1) throw SpecError("cyclic group needs n >= 1");
  const auto m = static_cast<std::size_t>(n);
  std::vector<int> table(m * m);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a * n + b)] = (a + b) % n;
  }
  return FiniteGroup(m, std::move(table), "C" + std::to_string(n));
}

// Dihedral group of order 2n; element r^k s^e has index k + n*e.
inline FiniteGroup dihedral(int n) {
  if (n < 1) throw SpecError("dihedral group needs n >= 1");
  const int m = 2 * n;
  std::vector<int> table(static_cast<std::size_t>(m * m));
  for (int x = 0; x < m; ++x) {
    const int k1 = x % n, e1 = x / n;
    for (int y = 0; y < m; ++y) {
      const int k2 = y % n, e2 = y / n;
      const int k = ((e1 == 0 ? k1 + k2 : k1 - k2) % n + n) % n;
      table[static_cast<std::size_t>(x * m + y)] = k + n * ((e1 + e2) % 2);
    }
  }
  return FiniteGroup(static_cast<std::size_t>(m), std::move(table), "D" + std::to_string(n));
}

// Symmetric group on n points. Elements are the permutations in lexicographic
// order (identity first); the product is composition, (a*b)(x) = a(b(x)).
inline FiniteGroup symmetric(int n) {
  if (n < 1) throw SpecError("symmetric group needs n >= 1");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::size_t m = perms.size();
  std::vector<int> table(m * m);
  std::vector<int> composed(static_cast<std::size_t>(n));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (int x = 0; x < n; ++x) {
        composed[static_cast<std::size_t>(x)] =
            perms[a][static_cast<std::size_t>(perms[b][static_cast<std::size_t>(x)])];
      }
      const auto it = std::lower_bound(perms.begin(), perms.end(), composed);
      table[a * m + b] = static_cast<int>(it - perms.begin());
    }
  }
  return FiniteGroup(m, std::move(table), "S" + std::to_string(n));
}

// Direct product; element (a, b) has index a * |right| + b.
inline FiniteGroup direct_product(const FiniteGroup& left, const FiniteGroup& right) {
  const std::size_t m1 = left.order(), m2 = right.order(), m = m1 * m2;
  std::vector<int> table(m * m);
  for (std::size_t x = 0; x < m; ++x) {
    const int a1 = static_cast<int>(x / m2), b1 = static_cast<int>(x % m2);
    for (std::size_t y = 0; y < m; ++y) {
      const int a2 = static_cast<int>(y / m2), b2 = static_cast<int>(y % m2);
      table[x * m + y] = left.mul(a1, a2) * static_cast<int>(m2) + right.mul(b1, b2);
    }
  }
  return FiniteGroup(m, std::move(table), left.name() + "x" + right.name());
}

// Cayley-table file: line 1 holds m, then m lines of m space-separated indices.
inline FiniteGroup read_table(std::istream& in, std::string name, const Limits& limits = {}) {
  long long m = 0;
  if (!(in >> m) || m <= 0) throw SpecError("Cayley table: first line must be a positive order");
  if (static_cast<std::size_t>(m) > limits.max_group_order) {
    throw LimitError("group order " + std::to_string(m) + " exceeds limit " +
                     std::to_string(limits.max_group_order));
  }
  const auto order = static_cast<std::size_t>(m);
  std::vector<int> table(order * order);
  for (auto& entry : table) {
    if (!(in >> entry)) throw SpecError("Cayley table: expected " + std::to_string(order * order) + " entries");
  }
  return FiniteGroup(order, std::move(table), std::move(name));
}

inline FiniteGroup read_table_file(const std::string& path, const Limits& limits = {}) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open Cayley table file: " + path);
  return read_table(in, "table:" + path, limits);
}

inline void write_table(std::ostream& out, const FiniteGroup& g) {
  out << g.order() << '\n';
  for (std::size_t a = 0; a < g.order(); ++a) {
    const auto r = g.row(static_cast<int>(a));
    for (std::size_t b = 0; b < r.size(); ++b) out << (b ? " " : "") << r[b];
    out << '\n';
  }
}

}  // namespace groups
}  // namespace vdg

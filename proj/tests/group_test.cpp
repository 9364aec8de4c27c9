#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "vdg/group.hpp"
#include "vdg/group_iso.hpp"
#include "vdg/group_spec.hpp"

namespace vdg {
namespace {

// Brute-force isomorphism oracle: try every bijection that fixes the
// identity and check the homomorphism law on all pairs.
bool brute_force_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order()) return false;
  const int m = static_cast<int>(a.order());
  std::vector<int> phi(static_cast<std::size_t>(m));
  std::iota(phi.begin(), phi.end(), 0);
  do {
    bool ok = true;
    for (int x = 0; x < m && ok; ++x) {
      for (int y = 0; y < m && ok; ++y) {
        ok = phi[static_cast<std::size_t>(a.mul(x, y))] ==
             b.mul(phi[static_cast<std::size_t>(x)], phi[static_cast<std::size_t>(y)]);
      }
    }
    if (ok) return true;
  } while (std::next_permutation(phi.begin() + 1, phi.end()));
  return false;
}

std::vector<FiniteGroup> small_catalog() {
  std::vector<FiniteGroup> out;
  for (const char* spec : {"trivial", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "D3", "C2xC3", "C7", "C8",
                           "D4", "C2xC4", "C2xC2xC2", "C4xC2", "D2", "D1"}) {
    out.push_back(build_group(spec));
  }
  return out;
}

std::filesystem::path write_temp(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path;
}

TEST(GroupSpecTest, ParsesFamiliesAndProducts) {
  EXPECT_EQ(parse_group_spec("trivial").kind, GroupSpec::Kind::kTrivial);
  EXPECT_EQ(parse_group_spec("C12").n, 12);
  const GroupSpec product = parse_group_spec("C2xD3xS3");
  ASSERT_EQ(product.kind, GroupSpec::Kind::kProduct);
  // Left-associative: (C2 x D3) x S3.
  EXPECT_EQ(product.factors[0].kind, GroupSpec::Kind::kProduct);
  EXPECT_EQ(product.factors[1].kind, GroupSpec::Kind::kSymmetric);
  EXPECT_EQ(product.to_string(), "C2xD3xS3");
  EXPECT_EQ(parse_group_spec("C2xtable:/tmp/x.txt").factors[1].path, "/tmp/x.txt");
}

TEST(GroupSpecTest, RejectsMalformedSpecs) {
  for (const char* bad : {"", "C", "C0", "Q8", "C2x", "C2*C3", "c2", "table:", "S3 ", "xC2"}) {
    EXPECT_THROW(parse_group_spec(bad), SpecError) << bad;
  }
}

TEST(GroupSpecTest, OrderBoundIsAHardError) {
  EXPECT_THROW(build_group("S5"), LimitError);
  EXPECT_THROW(build_group("C65"), LimitError);
  EXPECT_THROW(build_group("C8xC8xC2"), LimitError);
  Limits roomy;
  roomy.max_group_order = 120;
  EXPECT_EQ(build_group("S5", roomy).order(), 120u);
}

TEST(BuildGroupTest, Trivial) {
  const FiniteGroup g = build_group("trivial");
  EXPECT_EQ(g.order(), 1u);
  EXPECT_EQ(g.mul(0, 0), 0);
}

TEST(BuildGroupTest, KleinFourSquaresToIdentity) {
  const FiniteGroup g = build_group("C2xC2");
  ASSERT_EQ(g.order(), 4u);
  for (int a = 1; a < 4; ++a) EXPECT_EQ(g.mul(a, a), 0);
}

TEST(BuildGroupTest, S3ElementOrdersMatchPermutationOracle) {
  // Oracle: the orders of the six permutations of three points, computed by
  // repeated composition.
  std::vector<int> expected;
  std::array<int, 3> p{0, 1, 2};
  do {
    std::array<int, 3> power = p;
    int k = 1;
    while (power != std::array<int, 3>{0, 1, 2}) {
      std::array<int, 3> next{};
      for (int x = 0; x < 3; ++x) next[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(power[static_cast<std::size_t>(x)])];
      power = next;
      ++k;
    }
    expected.push_back(k);
  } while (std::next_permutation(p.begin(), p.end()));
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(expected, (std::vector<int>{1, 2, 2, 2, 3, 3}));
  EXPECT_EQ(build_group("S3").element_order_profile(), expected);
}

TEST(BuildGroupTest, DeterministicNumbering) {
  EXPECT_EQ(build_group("D4").table(), build_group("D4").table());
  EXPECT_EQ(build_group("C2xS3").table(), build_group("C2xS3").table());
}

TEST(BuildGroupTest, CatalogSatisfiesGroupLaws) {
  // Re-checks every law directly on the table rather than trusting the
  // constructor's validation.
  for (const FiniteGroup& g : small_catalog()) {
    const int m = static_cast<int>(g.order());
    for (int a = 0; a < m; ++a) {
      EXPECT_EQ(g.mul(0, a), a);
      EXPECT_EQ(g.mul(a, 0), a);
      std::vector<int> row(g.row(a).begin(), g.row(a).end());
      std::sort(row.begin(), row.end());
      std::vector<int> expected(static_cast<std::size_t>(m));
      std::iota(expected.begin(), expected.end(), 0);
      EXPECT_EQ(row, expected);
      EXPECT_EQ(g.mul(a, g.inverse(a)), 0);
      for (int b = 0; b < m; ++b) {
        for (int c = 0; c < m; ++c) ASSERT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c))) << g.name();
      }
    }
  }
}

TEST(CayleyTableFileTest, LoadsValidTable) {
  const auto path = write_temp("vdg_c3.txt", "3\n0 1 2\n1 2 0\n2 0 1\n");
  const FiniteGroup g = build_group("table:" + path.string());
  EXPECT_EQ(g.order(), 3u);
  EXPECT_TRUE(are_isomorphic(g, build_group("C3")));
}

TEST(CayleyTableFileTest, ReportsAssociativityWitness) {
  // A Latin square with identity (a loop of order 5) that is not a group.
  const auto path = write_temp("vdg_loop5.txt",
                               "5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n");
  try {
    build_group("table:" + path.string());
    FAIL() << "expected a group law error";
  } catch (const GroupLawError& e) {
    EXPECT_EQ(e.law(), "associativity");
    // The witness really breaks associativity.
    const std::vector<std::vector<int>> t{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
    auto mul = [&](int x, int y) { return t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; };
    EXPECT_NE(mul(mul(e.a(), e.b()), e.c()), mul(e.a(), mul(e.b(), e.c())));
  }
}

TEST(CayleyTableFileTest, ReportsOtherLaws) {
  const auto identity = write_temp("vdg_noid.txt", "2\n1 0\n0 1\n");
  EXPECT_THROW(build_group("table:" + identity.string()), GroupLawError);
  const auto latin = write_temp("vdg_nolatin.txt", "3\n0 1 2\n1 1 0\n2 0 1\n");
  try {
    build_group("table:" + latin.string());
    FAIL();
  } catch (const GroupLawError& e) {
    EXPECT_NE(e.law().find("latin"), std::string::npos);
  }
  const auto truncated = write_temp("vdg_short.txt", "2\n0 1\n1\n");
  EXPECT_THROW(build_group("table:" + truncated.string()), SpecError);
  EXPECT_THROW(build_group("table:/nonexistent/file.txt"), SpecError);
}

TEST(MinimalGeneratingSetTest, SpecExamples) {
  EXPECT_TRUE(minimal_generating_set(build_group("trivial")).empty());
  EXPECT_EQ(minimal_generating_set(build_group("C5")).size(), 1u);
  // Oracle: no single element of the Klein group generates all four elements.
  const FiniteGroup klein = build_group("C2xC2");
  for (int a = 0; a < 4; ++a) {
    std::vector<bool> seen(4, false);
    for (int x = 0; !seen[static_cast<std::size_t>(x)]; x = klein.mul(x, a)) seen[static_cast<std::size_t>(x)] = true;
    EXPECT_LT(std::count(seen.begin(), seen.end(), true), 4);
  }
  EXPECT_EQ(minimal_generating_set(klein), (std::vector<int>{1, 2}));
}

TEST(MinimalGeneratingSetTest, GeneratesWholeGroupAndIsMinimal) {
  for (const FiniteGroup& g : small_catalog()) {
    const auto gens = minimal_generating_set(g);
    EXPECT_EQ(std::find(gens.begin(), gens.end(), 0), gens.end()) << g.name();
    const auto closure = g.closure(gens);
    EXPECT_EQ(std::count(closure.begin(), closure.end(), true), static_cast<long>(g.order())) << g.name();
    EXPECT_TRUE(std::is_sorted(gens.begin(), gens.end()));
    // No smaller set generates (checked for one size below by brute force).
    if (gens.size() == 2) {
      for (int a = 1; a < static_cast<int>(g.order()); ++a) {
        const std::vector<int> single{a};
        const auto c = g.closure(single);
        EXPECT_LT(std::count(c.begin(), c.end(), true), static_cast<long>(g.order()));
      }
    }
  }
}

TEST(AreIsomorphicTest, SpecExamples) {
  EXPECT_FALSE(are_isomorphic(build_group("C4"), build_group("C2xC2")));
  EXPECT_TRUE(brute_force_isomorphic(build_group("S3"), build_group("D3")));
  EXPECT_TRUE(are_isomorphic(build_group("S3"), build_group("D3")));
  EXPECT_TRUE(are_isomorphic(build_group("trivial"), build_group("trivial")));
}

TEST(AreIsomorphicTest, AgreesWithBruteForceOracle) {
  const auto catalog = small_catalog();
  for (const FiniteGroup& a : catalog) {
    for (const FiniteGroup& b : catalog) {
      if (a.order() != b.order()) {
        EXPECT_FALSE(are_isomorphic(a, b));
        continue;
      }
      EXPECT_EQ(are_isomorphic(a, b), brute_force_isomorphic(a, b)) << a.name() << " vs " << b.name();
    }
  }
}

TEST(AreIsomorphicTest, ReflexiveAndSymmetric) {
  const auto catalog = small_catalog();
  for (const FiniteGroup& a : catalog) {
    EXPECT_TRUE(are_isomorphic(a, a)) << a.name();
    for (const FiniteGroup& b : catalog) EXPECT_EQ(are_isomorphic(a, b), are_isomorphic(b, a));
  }
}

TEST(AreIsomorphicTest, ReturnedMapIsAnIsomorphism) {
  const FiniteGroup a = build_group("C2xC3");
  const FiniteGroup b = build_group("C6");
  const auto phi = find_group_isomorphism(a, b);
  ASSERT_TRUE(phi.has_value());
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 6; ++y) {
      EXPECT_EQ((*phi)[static_cast<std::size_t>(a.mul(x, y))],
                b.mul((*phi)[static_cast<std::size_t>(x)], (*phi)[static_cast<std::size_t>(y)]));
    }
  }
}

TEST(AreIsomorphicTest, LargerGroupsWithinBound) {
  EXPECT_TRUE(are_isomorphic(build_group("D6"), build_group("C2xS3")));
  EXPECT_FALSE(are_isomorphic(build_group("C4xC4"), build_group("C2xC8")));
  EXPECT_TRUE(are_isomorphic(build_group("C2xC2xC2xC2xC2xC2"), build_group("C2xC2xC2xC2xC2xC2")));
}

}  // namespace
}  // namespace vdg

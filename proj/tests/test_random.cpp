#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "scorecard/hash.hpp"
#include "scorecard/random.hpp"

using namespace scorecard;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng rng(7);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) {
    auto k = rng.uniform_index(5);
    ASSERT_LT(k, 5u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_GT(c, 850);
}

TEST(Rng, OpenUnitIntervalExcludesEnds) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform_open01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(11);
  double s = 0, ss = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double v = rng.normal();
    s += v;
    ss += v * v;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(ss / n, 1.0, 0.02);
}

TEST(Rng, SampleWithoutReplacementIsSortedAndDistinct) {
  Rng rng(5);
  auto idx = rng.sample_without_replacement(100, 30);
  ASSERT_EQ(idx.size(), 30u);
  EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 30u);
  EXPECT_LT(idx.back(), 100u);
  EXPECT_EQ(rng.sample_without_replacement(10, 10).size(), 10u);
  EXPECT_TRUE(rng.sample_without_replacement(10, 0).empty());
}

TEST(Rng, DerivedSeedsDifferByTagAndIndex) {
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
  EXPECT_EQ(derive_seed(9, "x", 3), derive_seed(9, "x", 3));
}

TEST(Fnv1a, KnownVector) {
  // FNV-1a 64 of "a" without the length suffix.
  Fnv1a h;
  const unsigned char a = 'a';
  h.update(std::span<const unsigned char>(&a, 1));
  EXPECT_EQ(h.digest(), 0xaf63dc4c8601ec8cULL);
}

TEST(Fnv1a, LengthSeparatesConcatenations) {
  Fnv1a x, y;
  x.update(std::string_view("ab"));
  x.update(std::string_view("c"));
  y.update(std::string_view("a"));
  y.update(std::string_view("bc"));
  EXPECT_NE(x.digest(), y.digest());
  EXPECT_EQ(x.hex().size(), 16u);
}

#include <gtest/gtest.h>

#include <array>
#include <random>
#include <vector>

#include "noiselab/rng.hpp"
#include "oracles.hpp"

using noiselab::RngStream;

namespace {

std::vector<std::uint64_t> draws(RngStream s, int n) {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(s());
  return out;
}

}  // namespace

TEST(RngStream, SameIdentitySameSequence) {
  EXPECT_EQ(draws(RngStream(7, 3), 64), draws(RngStream(7, 3), 64));
}

TEST(RngStream, DistinctStreamsDiffer) {
  const auto a = draws(RngStream(7, 3), 64);
  const auto b = draws(RngStream(7, 4), 64);
  const auto c = draws(RngStream(8, 3), 64);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 64; ++i) {
    same_ab += a[i] == b[i];
    same_ac += a[i] == c[i];
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(RngStream, CopyReplays) {
  RngStream s(11, 0);
  s();
  s.normal();  // leaves a cached spare
  RngStream copy = s;
  EXPECT_EQ(copy.normal(), s.normal());
  EXPECT_EQ(copy(), s());
}

TEST(RngStream, SubstreamIndependentOfParentPosition) {
  RngStream fresh(5, 1);
  RngStream advanced(5, 1);
  for (int i = 0; i < 100; ++i) advanced();
  EXPECT_EQ(draws(fresh.substream(9), 16), draws(advanced.substream(9), 16));
  EXPECT_NE(draws(fresh.substream(9), 16), draws(fresh.substream(10), 16));
}

TEST(RngStream, UniformRangeAndMoments) {
  RngStream s(123, 0);
  constexpr int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sq / n - mean * mean, 1.0 / 12.0, 2e-3);
}

TEST(RngStream, NormalMoments) {
  RngStream s(99, 2);
  constexpr int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(RngStream, UniformBitsPassChiSquare) {
  RngStream s(2024, 0);
  std::array<std::size_t, 16> bins{};
  for (int i = 0; i < 160000; ++i) ++bins[s() >> 60];
  EXPECT_LT(noiselab::oracle::chi_square_uniform(bins), noiselab::oracle::kChiSquare15Df99);
}

TEST(RngStream, WorksWithStdAlgorithms) {
  static_assert(std::uniform_random_bit_generator<RngStream>);
  RngStream s(1, 1);
  std::vector<int> v{1, 2, 3, 4, 5};
  std::shuffle(v.begin(), v.end(), s);
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<int>{1, 2, 3, 4, 5}));
}

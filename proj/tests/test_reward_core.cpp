#include <gtest/gtest.h>

#include <vector>

#include "noiselab/errors.hpp"
#include "noiselab/reward_core.hpp"
#include "oracles.hpp"

using namespace noiselab;

namespace {

RewardMatrix random_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
  std::vector<std::uint8_t> cells(rows * cols);
  for (auto& c : cells) c = rng.uniform() < 0.5 ? 1 : 0;
  return RewardMatrix(rows, cols, std::move(cells));
}

constexpr NoiseMode kSymmetricModes[] = {NoiseMode::Cell, NoiseMode::Row, NoiseMode::Column, NoiseMode::Matrix};

}  // namespace

TEST(RewardMatrix, RejectsBadConstruction) {
  EXPECT_THROW(RewardMatrix(0, 3, {}), InvalidArgument);
  EXPECT_THROW(RewardMatrix(2, 2, {1, 0, 1}), DimensionMismatch);
  EXPECT_THROW(RewardMatrix(1, 2, {1, 2}), InvalidArgument);
  EXPECT_THROW(RewardMatrix::from_rows({{1, 0}, {1}}), DimensionMismatch);
  EXPECT_THROW(RewardMatrix::from_rows({{1, -1}}), InvalidArgument);
}

TEST(RewardMatrix, AccessorsAndComplement) {
  const auto m = RewardMatrix::from_rows({{1, 0, 1}, {0, 0, 1}});
  EXPECT_EQ(m.rollouts(), 2u);
  EXPECT_EQ(m.tests(), 3u);
  EXPECT_TRUE(m.at(0, 2));
  EXPECT_FALSE(m.at(1, 0));
  EXPECT_THROW(m.at(2, 0), OutOfRange);
  EXPECT_EQ(m.complement(), RewardMatrix::from_rows({{0, 1, 0}, {1, 1, 0}}));
  EXPECT_EQ(m.complement().complement(), m);
}

TEST(NoiseSpec, ValidatesProbabilities) {
  EXPECT_THROW(NoiseSpec::symmetric(NoiseMode::Cell, 1.5), InvalidNoiseSpec);
  EXPECT_THROW(NoiseSpec::symmetric(NoiseMode::Row, -0.1), InvalidNoiseSpec);
  EXPECT_THROW(NoiseSpec::asymmetric(0.2, 1.01), InvalidNoiseSpec);
  EXPECT_THROW(NoiseSpec::symmetric(NoiseMode::AsymmetricCell, 0.1), InvalidNoiseSpec);
  try {
    NoiseSpec::symmetric(NoiseMode::Cell, 1.5);
    FAIL();
  } catch (const InvalidNoiseSpec& e) {
    EXPECT_NE(std::string(e.what()).find("rate_p"), std::string::npos);
  }
  NoiseSpec raw{NoiseMode::Matrix, 2.0, 0.0, 0.0, 0};
  RngStream rng(1, 0);
  EXPECT_THROW(apply_noise(RewardMatrix::filled(2, 2, true), raw, rng), InvalidNoiseSpec);
}

TEST(NoiseMode, NamesRoundTrip) {
  for (auto mode : {NoiseMode::Cell, NoiseMode::Row, NoiseMode::Column, NoiseMode::Matrix, NoiseMode::AsymmetricCell}) {
    EXPECT_EQ(parse_noise_mode(to_string(mode)), mode);
  }
  EXPECT_THROW(parse_noise_mode("diagonal"), InvalidNoiseSpec);
}

TEST(ApplyNoise, ZeroRateIsIdentity) {
  RngStream gen(3, 0);
  const auto m = random_matrix(6, 4, gen);
  for (auto mode : kSymmetricModes) {
    RngStream rng(4, 0);
    EXPECT_EQ(apply_noise(m, NoiseSpec::symmetric(mode, 0.0), rng), m);
  }
  RngStream rng(4, 0);
  EXPECT_EQ(apply_noise(m, NoiseSpec::asymmetric(0.0, 0.0), rng), m);
}

TEST(ApplyNoise, CertainFlipComplements) {
  RngStream gen(5, 0);
  const auto m = random_matrix(5, 3, gen);
  for (auto mode : kSymmetricModes) {
    RngStream rng(6, 0);
    EXPECT_EQ(apply_noise(m, NoiseSpec::symmetric(mode, 1.0), rng), m.complement()) << to_string(mode);
  }
  RngStream rng(6, 0);
  EXPECT_EQ(apply_noise(m, NoiseSpec::asymmetric(1.0, 1.0), rng), m.complement());
}

TEST(ApplyNoise, MatrixModeFullInversion) {
  RngStream rng(0, 0);
  EXPECT_EQ(apply_noise(RewardMatrix::filled(3, 3, true), NoiseSpec::symmetric(NoiseMode::Matrix, 1.0), rng),
            RewardMatrix::filled(3, 3, false));
}

TEST(ApplyNoise, InputUntouchedAndShapePreserved) {
  RngStream gen(8, 0);
  const auto m = random_matrix(7, 2, gen);
  const auto copy = m;
  RngStream rng(9, 0);
  const auto noisy = apply_noise(m, NoiseSpec::symmetric(NoiseMode::Cell, 0.5), rng);
  EXPECT_EQ(m, copy);
  EXPECT_EQ(noisy.rollouts(), 7u);
  EXPECT_EQ(noisy.tests(), 2u);
}

TEST(ApplyNoise, CellFlipFrequencyPerCell) {
  // 16x3, p = 0.10, 1e5 resamples: each cell's flip frequency within [0.094, 0.106].
  RngStream gen(10, 0);
  const auto m = random_matrix(16, 3, gen);
  const auto spec = NoiseSpec::symmetric(NoiseMode::Cell, 0.10, 77);
  std::vector<int> flips(m.size(), 0);
  constexpr int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    RngStream rng = resample_epoch_noise(spec, t);
    const auto noisy = apply_noise(m, spec, rng);
    for (std::size_t k = 0; k < m.size(); ++k) flips[k] += noisy.cells()[k] != m.cells()[k];
  }
  for (int f : flips) {
    const double freq = static_cast<double>(f) / trials;
    EXPECT_GE(freq, 0.094);
    EXPECT_LE(freq, 0.106);
  }
}

TEST(ApplyNoise, StructuralAtomicity) {
  RngStream gen(12, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_matrix(1 + trial % 9, 1 + trial % 5, gen);
    const auto flipped = m.complement();
    {
      RngStream rng(13, trial);
      const auto out = apply_noise(m, NoiseSpec::symmetric(NoiseMode::Row, 0.4), rng);
      for (std::size_t i = 0; i < m.rollouts(); ++i) {
        const auto r = out.row(i);
        const bool same = std::equal(r.begin(), r.end(), m.row(i).begin());
        const bool inverted = std::equal(r.begin(), r.end(), flipped.row(i).begin());
        EXPECT_TRUE(same || inverted);
      }
    }
    {
      RngStream rng(14, trial);
      const auto out = apply_noise(m, NoiseSpec::symmetric(NoiseMode::Column, 0.4), rng);
      for (std::size_t j = 0; j < m.tests(); ++j) {
        bool same = true, inverted = true;
        for (std::size_t i = 0; i < m.rollouts(); ++i) {
          same = same && out.at(i, j) == m.at(i, j);
          inverted = inverted && out.at(i, j) != m.at(i, j);
        }
        EXPECT_TRUE(same || inverted);
      }
    }
    {
      RngStream rng(15, trial);
      const auto out = apply_noise(m, NoiseSpec::symmetric(NoiseMode::Matrix, 0.4), rng);
      EXPECT_TRUE(out == m || out == flipped);
    }
  }
}

TEST(ApplyNoise, MatrixFlipIsInvolutionUnderReplay) {
  RngStream gen(16, 0);
  const auto m = random_matrix(4, 3, gen);
  const auto spec = NoiseSpec::symmetric(NoiseMode::Matrix, 1.0);
  RngStream rng(17, 0);
  RngStream replay = rng;
  const auto once = apply_noise(m, spec, rng);
  EXPECT_EQ(apply_noise(once, spec, replay), m);
}

TEST(ApplyNoise, RowAndColumnSelectionRates) {
  const auto m = RewardMatrix::filled(10, 10, false);
  for (auto mode : {NoiseMode::Row, NoiseMode::Column}) {
    const auto spec = NoiseSpec::symmetric(mode, 0.3, 21);
    std::size_t flipped = 0, total = 0;
    for (int t = 0; t < 20000; ++t) {
      RngStream rng = resample_epoch_noise(spec, t);
      const auto out = apply_noise(m, spec, rng);
      for (auto c : out.cells()) flipped += c;
      total += out.size();
    }
    // Units of selection are rows/columns, so the band uses 10x fewer independent trials.
    const double rate = static_cast<double>(flipped) / static_cast<double>(total);
    EXPECT_NEAR(rate, 0.3, oracle::binomial_band(0.3, total / 10.0, 4.0)) << to_string(mode);
  }
}

TEST(ApplyNoise, AsymmetricRatesAndSymmetricEquivalence) {
  RngStream gen(18, 0);
  const auto m = random_matrix(32, 4, gen);
  auto measure = [&](const NoiseSpec& spec) {
    double fp = 0, neg = 0, fn = 0, pos = 0;
    for (int t = 0; t < 2000; ++t) {
      RngStream rng = resample_epoch_noise(spec, t);
      const auto out = apply_noise(m, spec, rng);
      for (std::size_t k = 0; k < m.size(); ++k) {
        if (m.cells()[k]) {
          ++pos;
          fn += out.cells()[k] == 0;
        } else {
          ++neg;
          fp += out.cells()[k] == 1;
        }
      }
    }
    return std::array<double, 4>{fp / neg, fn / pos, neg, pos};
  };
  const auto asym = measure(NoiseSpec::asymmetric(0.3, 0.05, 5));
  EXPECT_NEAR(asym[0], 0.3, oracle::binomial_band(0.3, asym[2]));
  EXPECT_NEAR(asym[1], 0.05, oracle::binomial_band(0.05, asym[3]));

  // fpr = fnr = p behaves like Cell mode at p; same draw layout gives identical output.
  for (int t = 0; t < 50; ++t) {
    RngStream a(30, t), b(30, t);
    EXPECT_EQ(apply_noise(m, NoiseSpec::asymmetric(0.2, 0.2), a),
              apply_noise(m, NoiseSpec::symmetric(NoiseMode::Cell, 0.2), b));
  }
}

TEST(RolloutRewards, PassFractions) {
  const auto m = RewardMatrix::from_rows({{1, 1, 1}, {0, 0, 0}, {1, 0, 1}});
  const auto r = rollout_rewards(m);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], 1.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_DOUBLE_EQ(r[2], 2.0 / 3.0);
}

TEST(EpochNoise, DeterministicAndIndependent) {
  const auto spec = NoiseSpec::symmetric(NoiseMode::Cell, 0.5, 7);
  EXPECT_EQ(resample_epoch_noise(spec, 3), resample_epoch_noise(spec, 3));

  RngStream e3 = resample_epoch_noise(spec, 3);
  RngStream e4 = resample_epoch_noise(spec, 4);
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += e3() == e4();
  EXPECT_EQ(equal, 0);

  RngStream gen(19, 0);
  const auto m = random_matrix(8, 3, gen);
  RngStream first = resample_epoch_noise(spec, 0);
  RngStream second = resample_epoch_noise(spec, 0);
  EXPECT_EQ(apply_noise(m, spec, first), apply_noise(m, spec, second));

  RngStream other = resample_epoch_noise(spec, 1);
  RngStream again = resample_epoch_noise(spec, 0);
  EXPECT_NE(apply_noise(m, spec, other), apply_noise(m, spec, again));
}

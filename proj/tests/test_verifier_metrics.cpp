#include <gtest/gtest.h>

#include <vector>

#include "noiselab/errors.hpp"
#include "noiselab/verifier_metrics.hpp"
#include "oracles.hpp"

using namespace noiselab;

namespace {

RewardMatrix random_matrix(std::size_t rows, std::size_t cols, double density, RngStream& rng) {
  std::vector<std::uint8_t> cells(rows * cols);
  for (auto& c : cells) c = rng.uniform() < density ? 1 : 0;
  return RewardMatrix(rows, cols, std::move(cells));
}

}  // namespace

TEST(ConfusionMetrics, HandCountedTwoByTwo) {
  const auto predicted = RewardMatrix::from_rows({{1, 0}, {1, 1}});
  const auto truth = RewardMatrix::from_rows({{1, 1}, {0, 1}});
  const auto r = confusion_metrics(predicted, truth);
  EXPECT_EQ(r.tp, 2u);
  EXPECT_EQ(r.fp, 1u);
  EXPECT_EQ(r.fn, 1u);
  EXPECT_EQ(r.tn, 0u);
  EXPECT_EQ(*r.accuracy, 0.5);
  EXPECT_EQ(*r.precision, 2.0 / 3.0);
  EXPECT_EQ(*r.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*r.f1, 2.0 / 3.0);
}

TEST(ConfusionMetrics, PerfectAndInvertedVerifier) {
  const auto truth = RewardMatrix::from_rows({{1, 0, 1}, {0, 0, 1}});
  const auto perfect = confusion_metrics(truth, truth);
  EXPECT_EQ(*perfect.accuracy, 1.0);
  EXPECT_EQ(*perfect.precision, 1.0);
  EXPECT_EQ(*perfect.recall, 1.0);
  EXPECT_EQ(*perfect.f1, 1.0);

  const auto inverted = confusion_metrics(truth.complement(), truth);
  EXPECT_EQ(inverted.tp, 0u);
  EXPECT_EQ(inverted.tn, 0u);
  EXPECT_EQ(*inverted.accuracy, 0.0);
  EXPECT_EQ(*inverted.precision, 0.0);
  EXPECT_EQ(*inverted.recall, 0.0);
  EXPECT_FALSE(inverted.f1.has_value());  // precision + recall = 0
}

TEST(ConfusionMetrics, UndefinedRatiosAreMarked) {
  // Verifier never says pass; truth has no passes either.
  const auto zeros = RewardMatrix::filled(2, 2, false);
  const auto r = confusion_metrics(zeros, zeros);
  EXPECT_EQ(*r.accuracy, 1.0);
  EXPECT_FALSE(r.precision.has_value());
  EXPECT_FALSE(r.recall.has_value());
  EXPECT_FALSE(r.f1.has_value());
  EXPECT_FALSE(r.false_negative_rate().has_value());
  EXPECT_EQ(*r.false_positive_rate(), 0.0);
}

TEST(ConfusionMetrics, DimensionMismatch) {
  EXPECT_THROW(confusion_metrics(RewardMatrix::filled(2, 3, true), RewardMatrix::filled(3, 2, true)),
               DimensionMismatch);
}

TEST(ConfusionMetrics, CountsCoverEveryCellAndF1IsHarmonicMean) {
  RngStream rng(1, 0);
  for (int t = 0; t < 500; ++t) {
    const std::size_t rows = 1 + t % 7, cols = 1 + t % 4;
    const auto a = random_matrix(rows, cols, 0.6, rng);
    const auto b = random_matrix(rows, cols, 0.4, rng);
    const auto r = confusion_metrics(a, b);
    EXPECT_EQ(r.total(), rows * cols);
    if (r.precision && r.recall && *r.precision + *r.recall > 0.0) {
      ASSERT_TRUE(r.f1.has_value());
      EXPECT_NEAR(1.0 / *r.f1, 0.5 * (1.0 / *r.precision + 1.0 / *r.recall), 1e-12);
    }
  }
}

TEST(BatchConfusion, MicroAverage) {
  const auto single = ConfusionReport::from_counts(3, 1, 4, 2);
  EXPECT_EQ(batch_confusion(std::vector{single}), single);

  const auto doubled = batch_confusion(std::vector{single, single});
  EXPECT_EQ(doubled.tp, 6u);
  EXPECT_EQ(doubled.fn, 4u);
  EXPECT_EQ(doubled.precision, single.precision);
  EXPECT_EQ(doubled.recall, single.recall);
  EXPECT_EQ(doubled.accuracy, single.accuracy);

  const auto merged = batch_confusion(std::vector{ConfusionReport::from_counts(1, 1, 0, 0),
                                                  ConfusionReport::from_counts(1, 0, 0, 1)});
  EXPECT_EQ(*merged.precision, 2.0 / 3.0);
  EXPECT_EQ(*merged.recall, 2.0 / 3.0);

  EXPECT_THROW(batch_confusion(std::vector<ConfusionReport>{}), EmptyInput);
}

TEST(BatchConfusion, EqualsConcatenation) {
  RngStream rng(2, 0);
  std::vector<ConfusionReport> parts;
  std::vector<std::uint8_t> pred_cells, truth_cells;
  std::size_t rows = 0;
  for (int b = 0; b < 20; ++b) {
    const auto p = random_matrix(3, 4, 0.5, rng);
    const auto t = random_matrix(3, 4, 0.3, rng);
    parts.push_back(confusion_metrics(p, t));
    pred_cells.insert(pred_cells.end(), p.cells().begin(), p.cells().end());
    truth_cells.insert(truth_cells.end(), t.cells().begin(), t.cells().end());
    rows += 3;
  }
  const auto whole = confusion_metrics(RewardMatrix(rows, 4, pred_cells), RewardMatrix(rows, 4, truth_cells));
  EXPECT_EQ(batch_confusion(parts), whole);
}

TEST(VerifierNoise, CellModeRatesConvergeToP) {
  const auto spec = NoiseSpec::symmetric(NoiseMode::Cell, 0.2, 9);
  RngStream truth_rng(3, 0);
  std::vector<ConfusionReport> reports;
  for (int s = 0; s < 4000; ++s) {  // 4000 * 25 = 1e5 cells
    const auto truth = random_matrix(5, 5, 0.5, truth_rng);
    RngStream noise = resample_epoch_noise(spec, s);
    reports.push_back(confusion_metrics(apply_noise(truth, spec, noise), truth));
  }
  const auto total = batch_confusion(reports);
  EXPECT_NEAR(*total.false_positive_rate(), 0.2, oracle::binomial_band(0.2, total.fp + total.tn));
  EXPECT_NEAR(*total.false_negative_rate(), 0.2, oracle::binomial_band(0.2, total.fn + total.tp));
}

TEST(VerifierNoise, AsymmetricRatesConvergeToConfiguredPair) {
  const auto spec = NoiseSpec::asymmetric(0.25, 0.05, 10);
  RngStream truth_rng(4, 0);
  std::vector<ConfusionReport> reports;
  for (int s = 0; s < 4000; ++s) {
    const auto truth = random_matrix(5, 5, 0.5, truth_rng);
    RngStream noise = resample_epoch_noise(spec, s);
    reports.push_back(confusion_metrics(apply_noise(truth, spec, noise), truth));
  }
  const auto total = batch_confusion(reports);
  EXPECT_NEAR(*total.false_positive_rate(), 0.25, oracle::binomial_band(0.25, total.fp + total.tn));
  EXPECT_NEAR(*total.false_negative_rate(), 0.05, oracle::binomial_band(0.05, total.fn + total.tp));
  // High FPR hurts precision far more than recall.
  EXPECT_LT(*total.precision, *total.recall);
}

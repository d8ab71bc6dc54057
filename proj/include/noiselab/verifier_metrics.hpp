#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "noiselab/reward_core.hpp"

namespace noiselab {

/// Confusion counts of a verifier's pass/fail calls against ground truth, with
/// "pass" as the positive class. Ratios whose denominator is zero are nullopt.
struct ConfusionReport {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;

  /// Builds a report and derives every ratio from the counts.
  static ConfusionReport from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                                     std::uint64_t fn);

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  /// fp / (fp + tn): how often a failing test is reported as passing.
  std::optional<double> false_positive_rate() const noexcept;
  /// fn / (fn + tp): how often a passing test is reported as failing.
  std::optional<double> false_negative_rate() const noexcept;

  friend bool operator==(const ConfusionReport&, const ConfusionReport&) = default;
};

/// Throws DimensionMismatch when the shapes differ.
ConfusionReport confusion_metrics(const RewardMatrix& predicted, const RewardMatrix& truth);

/// Micro-average: sums counts, then re-derives ratios. Throws EmptyInput on an empty list.
ConfusionReport batch_confusion(std::span<const ConfusionReport> reports);

}  // namespace noiselab

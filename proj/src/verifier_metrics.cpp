#include "noiselab/verifier_metrics.hpp"

#include "noiselab/errors.hpp"

namespace noiselab {
namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionReport ConfusionReport::from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                                             std::uint64_t fn) {
  ConfusionReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  r.accuracy = ratio(tp + tn, r.total());
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  if (r.precision && r.recall && *r.precision + *r.recall > 0.0) {
    r.f1 = 2.0 * *r.precision * *r.recall / (*r.precision + *r.recall);
  }
  return r;
}

std::optional<double> ConfusionReport::false_positive_rate() const noexcept {
  return ratio(fp, fp + tn);
}

std::optional<double> ConfusionReport::false_negative_rate() const noexcept {
  return ratio(fn, fn + tp);
}

ConfusionReport confusion_metrics(const RewardMatrix& predicted, const RewardMatrix& truth) {
  if (predicted.rollouts() != truth.rollouts() || predicted.tests() != truth.tests()) {
    throw DimensionMismatch("confusion_metrics: predicted and truth shapes differ");
  }
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  const auto pred = predicted.cells();
  const auto real = truth.cells();
  for (std::size_t k = 0; k < pred.size(); ++k) {
    if (pred[k]) {
      real[k] ? ++tp : ++fp;
    } else {
      real[k] ? ++fn : ++tn;
    }
  }
  return ConfusionReport::from_counts(tp, fp, tn, fn);
}

ConfusionReport batch_confusion(std::span<const ConfusionReport> reports) {
  if (reports.empty()) throw EmptyInput("batch_confusion: no reports to merge");
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (const auto& r : reports) {
    tp += r.tp;
    fp += r.fp;
    tn += r.tn;
    fn += r.fn;
  }
  return ConfusionReport::from_counts(tp, fp, tn, fn);
}

}  // namespace noiselab

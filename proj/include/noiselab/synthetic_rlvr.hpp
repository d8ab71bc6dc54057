#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "noiselab/advantage.hpp"
#include "noiselab/reward_core.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

/// K candidate solutions with known unit-test outcomes. Row k of `pass_vectors`
/// holds candidate k's ground-truth results over the T tests.
class SyntheticTask {
 public:
  /// Throws InvalidArgument unless K >= 2, T >= 1 and some candidate passes every test.
  explicit SyntheticTask(RewardMatrix pass_vectors);

  /// Candidate k passes the first pass_counts[k] of `tests` tests.
  static SyntheticTask from_pass_counts(std::span<const std::size_t> pass_counts, std::size_t tests);
  /// K=8, T=3, pass counts {3,2,2,1,1,1,0,0}.
  static SyntheticTask default_task();

  std::size_t candidates() const noexcept { return pass_vectors_.rollouts(); }
  std::size_t tests() const noexcept { return pass_vectors_.tests(); }
  const RewardMatrix& pass_vectors() const noexcept { return pass_vectors_; }
  const std::vector<std::size_t>& optimal_set() const noexcept { return optimal_set_; }
  /// Ground-truth pass fraction of each candidate.
  const std::vector<double>& clean_rewards() const noexcept { return clean_rewards_; }

  /// Assembles the G x T reward matrix for the chosen candidates.
  RewardMatrix rollout_matrix(std::span<const std::size_t> choices) const;

 private:
  RewardMatrix pass_vectors_;
  std::vector<std::size_t> optimal_set_;
  std::vector<double> clean_rewards_;
};

/// Softmax distribution over candidates.
class SoftmaxPolicy {
 public:
  explicit SoftmaxPolicy(std::vector<double> logits);
  static SoftmaxPolicy uniform(std::size_t candidates);

  const std::vector<double>& logits() const noexcept { return logits_; }
  std::vector<double> probabilities() const;
  /// Inverse-CDF draw; consumes one uniform.
  std::size_t sample(RngStream& rng) const;
  /// sum_k pi_k * value_k
  double expected(std::span<const double> values) const;

  /// logits -= learning_rate * gradient
  void apply_gradient(std::span<const double> gradient, double learning_rate);

 private:
  std::vector<double> logits_;
};

/// Gradient w.r.t. the logits of L = -(1/G) sum_i A_i log pi(choice_i):
/// -(1/G) sum_i A_i (onehot(choice_i) - pi).
std::vector<double> softmax_policy_gradient(const SoftmaxPolicy& policy,
                                            std::span<const std::size_t> choices,
                                            std::span<const double> advantages);

struct SyntheticConfig {
  std::size_t group_size = 64;
  std::size_t steps = 4000;
  double learning_rate = 0.01;
  double advantage_epsilon = kDefaultAdvantageEpsilon;

  void validate() const;
  friend bool operator==(const SyntheticConfig&, const SyntheticConfig&) = default;
};

struct TrainingSummary {
  double best_reward = 0.0;
  double final_reward = 0.0;
  std::size_t steps_to_best = 0;
  /// Clean expected reward before training and after every update (steps + 1 values).
  std::vector<double> reward_curve;
  std::vector<double> final_logits;
};

/// Trains a uniform softmax policy on `task` with rewards corrupted by `noise`.
/// Candidate sampling uses RngStream(sampling_seed, 0); step t is corrupted with
/// resample_epoch_noise(noise, t). The reward curve is always evaluated on the
/// uncorrupted pass vectors.
TrainingSummary train_synthetic(const SyntheticTask& task, const NoiseSpec& noise,
                                const SyntheticConfig& config, std::uint64_t sampling_seed);

/// Same as train_synthetic but from the given initial logits.
TrainingSummary train_synthetic(const SyntheticTask& task, const NoiseSpec& noise,
                                const SyntheticConfig& config, std::uint64_t sampling_seed,
                                SoftmaxPolicy initial);

struct SweepGrid {
  std::vector<NoiseMode> modes;         // symmetric modes, crossed with `rates`
  std::vector<double> rates;
  std::vector<std::array<double, 2>> asymmetric_pairs;  // extra AsymmetricCell cells, (fpr, fnr)
  std::size_t seeds = 3;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation across seeds; 0 for a single seed
};

MeanStd mean_std(std::span<const double> values);

struct SweepCell {
  NoiseSpec noise;  // seed field is per-run; see runs
  std::vector<TrainingSummary> runs;
  MeanStd best;
  MeanStd final;
  MeanStd steps_to_best;
};

struct SweepTable {
  std::vector<SweepCell> cells;
};

/// Runs every (mode, rate, seed) combination, plus each asymmetric pair per seed.
/// Each run gets its own sampling and noise seeds derived from (master_seed, cell, seed
/// index), so the table is independent of thread count and scheduling.
SweepTable noise_sweep(const SyntheticTask& task, const SweepGrid& grid, const SyntheticConfig& config);

}  // namespace noiselab

#include "noiselab/synthetic_rlvr.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

#include "noiselab/errors.hpp"

namespace noiselab {

SyntheticTask::SyntheticTask(RewardMatrix pass_vectors) : pass_vectors_(std::move(pass_vectors)) {
  if (pass_vectors_.rollouts() < 2) throw InvalidArgument("synthetic task needs at least 2 candidates");
  clean_rewards_ = rollout_rewards(pass_vectors_);
  for (std::size_t k = 0; k < clean_rewards_.size(); ++k) {
    if (clean_rewards_[k] == 1.0) optimal_set_.push_back(k);
  }
  if (optimal_set_.empty()) throw InvalidArgument("synthetic task needs an all-pass candidate");
}

SyntheticTask SyntheticTask::from_pass_counts(std::span<const std::size_t> pass_counts,
                                              std::size_t tests) {
  if (tests == 0) throw InvalidArgument("synthetic task needs at least one test");
  std::vector<std::uint8_t> cells;
  cells.reserve(pass_counts.size() * tests);
  for (std::size_t count : pass_counts) {
    if (count > tests) throw InvalidArgument("pass count exceeds the number of tests");
    for (std::size_t j = 0; j < tests; ++j) cells.push_back(j < count ? 1 : 0);
  }
  if (pass_counts.empty()) throw InvalidArgument("synthetic task needs at least 2 candidates");
  return SyntheticTask(RewardMatrix(pass_counts.size(), tests, std::move(cells)));
}

SyntheticTask SyntheticTask::default_task() {
  static constexpr std::array<std::size_t, 8> kCounts{3, 2, 2, 1, 1, 1, 0, 0};
  return from_pass_counts(kCounts, 3);
}

RewardMatrix SyntheticTask::rollout_matrix(std::span<const std::size_t> choices) const {
  if (choices.empty()) throw EmptyInput("rollout_matrix: no rollouts");
  const std::size_t t = tests();
  std::vector<std::uint8_t> cells;
  cells.reserve(choices.size() * t);
  for (std::size_t k : choices) {
    const auto r = pass_vectors_.row(k);
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return RewardMatrix(choices.size(), t, std::move(cells));
}

SoftmaxPolicy::SoftmaxPolicy(std::vector<double> logits) : logits_(std::move(logits)) {
  if (logits_.empty()) throw EmptyInput("softmax policy needs at least one logit");
  for (double l : logits_) {
    if (!std::isfinite(l)) throw InvalidArgument("softmax policy logits must be finite");
  }
}

SoftmaxPolicy SoftmaxPolicy::uniform(std::size_t candidates) {
  return SoftmaxPolicy(std::vector<double>(candidates, 0.0));
}

std::vector<double> SoftmaxPolicy::probabilities() const {
  const double peak = *std::max_element(logits_.begin(), logits_.end());
  std::vector<double> p(logits_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = std::exp(logits_[k] - peak);
    total += p[k];
  }
  for (double& x : p) x /= total;
  return p;
}

std::size_t SoftmaxPolicy::sample(RngStream& rng) const {
  const auto p = probabilities();
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    cumulative += p[k];
    if (u < cumulative) return k;
  }
  // u landed in the rounding gap above the final cumulative sum.
  for (std::size_t k = p.size(); k-- > 0;) {
    if (p[k] > 0.0) return k;
  }
  return p.size() - 1;
}

double SoftmaxPolicy::expected(std::span<const double> values) const {
  if (values.size() != logits_.size()) {
    throw DimensionMismatch("expected: value count differs from candidate count");
  }
  const auto p = probabilities();
  return std::inner_product(p.begin(), p.end(), values.begin(), 0.0);
}

void SoftmaxPolicy::apply_gradient(std::span<const double> gradient, double learning_rate) {
  if (gradient.size() != logits_.size()) {
    throw DimensionMismatch("apply_gradient: gradient size differs from candidate count");
  }
  for (std::size_t k = 0; k < logits_.size(); ++k) logits_[k] -= learning_rate * gradient[k];
}

std::vector<double> softmax_policy_gradient(const SoftmaxPolicy& policy,
                                            std::span<const std::size_t> choices,
                                            std::span<const double> advantages) {
  if (choices.size() != advantages.size()) {
    throw DimensionMismatch("softmax_policy_gradient: choices and advantages differ in length");
  }
  if (choices.empty()) throw EmptyInput("softmax_policy_gradient: empty group");
  const auto p = policy.probabilities();
  const double scale = -1.0 / static_cast<double>(choices.size());
  std::vector<double> grad(p.size(), 0.0);
  double advantage_sum = 0.0;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (choices[i] >= p.size()) throw OutOfRange("softmax_policy_gradient: choice out of range");
    grad[choices[i]] += advantages[i];
    advantage_sum += advantages[i];
  }
  for (std::size_t k = 0; k < p.size(); ++k) grad[k] = scale * (grad[k] - advantage_sum * p[k]);
  return grad;
}

void SyntheticConfig::validate() const {
  if (group_size < 2) throw InvalidArgument("synthetic: group_size must be >= 2");
  if (steps == 0) throw InvalidArgument("synthetic: steps must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw InvalidArgument("synthetic: learning_rate must be > 0");
  }
  if (!(advantage_epsilon > 0.0) || !std::isfinite(advantage_epsilon)) {
    throw InvalidArgument("synthetic: advantage_epsilon must be > 0");
  }
}

TrainingSummary train_synthetic(const SyntheticTask& task, const NoiseSpec& noise,
                                const SyntheticConfig& config, std::uint64_t sampling_seed) {
  return train_synthetic(task, noise, config, sampling_seed, SoftmaxPolicy::uniform(task.candidates()));
}

TrainingSummary train_synthetic(const SyntheticTask& task, const NoiseSpec& noise,
                                const SyntheticConfig& config, std::uint64_t sampling_seed,
                                SoftmaxPolicy policy) {
  config.validate();
  noise.validate();
  if (policy.logits().size() != task.candidates()) {
    throw DimensionMismatch("train_synthetic: initial logits do not match the candidate count");
  }

  const auto& clean = task.clean_rewards();
  RngStream sampling(sampling_seed, 0);
  std::vector<std::size_t> choices(config.group_size);

  TrainingSummary summary;
  summary.reward_curve.reserve(config.steps + 1);
  summary.reward_curve.push_back(policy.expected(clean));

  for (std::size_t step = 0; step < config.steps; ++step) {
    for (auto& c : choices) c = policy.sample(sampling);
    const RewardMatrix truth = task.rollout_matrix(choices);
    RngStream epoch_stream = resample_epoch_noise(noise, step);
    const RewardMatrix observed = apply_noise(truth, noise, epoch_stream);
    const auto rewards = rollout_rewards(observed);
    const GroupAdvantages adv = group_advantages(rewards, config.advantage_epsilon);
    const auto grad = softmax_policy_gradient(policy, choices, adv.advantages);
    policy.apply_gradient(grad, config.learning_rate);
    summary.reward_curve.push_back(policy.expected(clean));
  }

  const auto best = std::max_element(summary.reward_curve.begin(), summary.reward_curve.end());
  summary.best_reward = *best;
  summary.steps_to_best = static_cast<std::size_t>(best - summary.reward_curve.begin());
  summary.final_reward = summary.reward_curve.back();
  summary.final_logits = policy.logits();
  return summary;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("mean_std: no values");
  const auto n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / (n - 1.0))};
}

namespace {

struct RunSlot {
  std::size_t cell;
  std::size_t seed_index;
};

}  // namespace

SweepTable noise_sweep(const SyntheticTask& task, const SweepGrid& grid, const SyntheticConfig& config) {
  config.validate();
  if (grid.seeds == 0) throw EmptyInput("noise_sweep: need at least one seed");
  if ((grid.modes.empty() || grid.rates.empty()) && grid.asymmetric_pairs.empty()) {
    throw EmptyInput("noise_sweep: empty noise grid");
  }

  SweepTable table;
  for (NoiseMode mode : grid.modes) {
    for (double p : grid.rates) table.cells.push_back({NoiseSpec::symmetric(mode, p), {}, {}, {}, {}});
  }
  for (const auto& [fpr, fnr] : grid.asymmetric_pairs) {
    table.cells.push_back({NoiseSpec::asymmetric(fpr, fnr), {}, {}, {}, {}});
  }

  std::vector<RunSlot> slots;
  for (std::size_t c = 0; c < table.cells.size(); ++c) {
    table.cells[c].runs.resize(grid.seeds);
    for (std::size_t s = 0; s < grid.seeds; ++s) slots.push_back({c, s});
  }

  const RngStream master(grid.master_seed, 0);
  auto run_slot = [&](const RunSlot& slot) {
    // One substream per (cell, seed index); its first two draws seed sampling and noise.
    RngStream derive = master.substream(slot.cell * grid.seeds + slot.seed_index);
    const std::uint64_t sampling_seed = derive();
    NoiseSpec noise = table.cells[slot.cell].noise;
    noise.seed = derive();
    table.cells[slot.cell].runs[slot.seed_index] = train_synthetic(task, noise, config, sampling_seed);
  };

  const std::size_t workers = std::clamp<std::size_t>(grid.threads, 1, slots.size());
  if (workers == 1) {
    for (const auto& slot : slots) run_slot(slot);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < slots.size(); i = next++) run_slot(slots[i]);
      }));
    }
    for (auto& f : pool) f.get();
  }

  for (auto& cell : table.cells) {
    std::vector<double> best, final, steps;
    for (const auto& r : cell.runs) {
      best.push_back(r.best_reward);
      final.push_back(r.final_reward);
      steps.push_back(static_cast<double>(r.steps_to_best));
    }
    cell.best = mean_std(best);
    cell.final = mean_std(final);
    cell.steps_to_best = mean_std(steps);
  }
  return table;
}

}  // namespace noiselab

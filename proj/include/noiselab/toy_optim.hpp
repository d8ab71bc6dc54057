#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "noiselab/advantage.hpp"
#include "noiselab/rng.hpp"

namespace noiselab {

using Vec2 = std::array<double, 2>;

/// Standard Ackley function (a=20, b=0.2, c=2*pi) in two dimensions.
/// Non-negative, zero only at the origin.
double ackley(const Vec2& point) noexcept;

/// N(mean, std^2 I) over R^2. The mean is learnable; std is fixed and must be > 0.
class GaussianPolicy {
 public:
  GaussianPolicy(Vec2 mean, double std);

  const Vec2& mean() const noexcept { return mean_; }
  double std() const noexcept { return std_; }
  GaussianPolicy with_mean(const Vec2& mean) const { return GaussianPolicy(mean, std_); }

 private:
  Vec2 mean_;
  double std_;
};

/// One group of samples s_i = mean + std * eps_i, drawn with the mean treated as a constant.
struct SampleGroup {
  std::vector<Vec2> epsilons;
  std::vector<Vec2> samples;
  std::vector<double> rewards;  // empty until noisy_rewards fills it
};

SampleGroup sample_group(const GaussianPolicy& policy, std::size_t group_size, RngStream& rng);

/// r_i = -ackley(s_i) + N(0, sigma_noise^2). Only the reward-noise stream is consumed,
/// so the samples themselves never depend on the noise level.
SampleGroup noisy_rewards(SampleGroup group, double sigma_noise, RngStream& rng);

/// Gradient of L(mu) = -(1/G) sum_i A_i log N(s_i; mu, std^2 I) at the draw-time mean,
/// which reduces to -(1/(G std)) sum_i A_i eps_i.
Vec2 policy_gradient(std::span<const double> advantages, std::span<const Vec2> epsilons, double std);

struct AdamConfig {
  double learning_rate = 0.2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;

  void validate() const;
  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

struct AdamState {
  AdamConfig config;
  Vec2 first_moment{0.0, 0.0};
  Vec2 second_moment{0.0, 0.0};
  std::uint64_t step_count = 0;
};

struct AdamUpdate {
  AdamState state;
  Vec2 mean;
};

/// One bias-corrected Adam step (Kingma & Ba) descending `gradient`.
AdamUpdate adam_step(const AdamState& state, const Vec2& gradient, const Vec2& mean);

struct ToyConfig {
  std::size_t steps = 500;
  std::size_t group_size = 16;
  double policy_std = 0.15;
  double sigma_noise = 0.0;
  AdamConfig adam;
  double advantage_epsilon = kDefaultAdvantageEpsilon;

  void validate() const;
  friend bool operator==(const ToyConfig&, const ToyConfig&) = default;
};

struct OptimizerRun {
  ToyConfig config;
  Vec2 start{};
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::vector<Vec2> trajectory;       // steps + 1 policy means, trajectory[0] == start
  std::vector<double> clean_rewards;  // -ackley(trajectory[k]) for every k
  AdamState final_adam;

  const Vec2& final_mean() const { return trajectory.back(); }
};

/// Substream ids under a run's stream: samples and reward noise never share draws.
inline constexpr std::uint64_t kPolicySamplingStream = 0;
inline constexpr std::uint64_t kRewardNoiseStream = 1;

/// Runs sample -> noisy rewards -> group advantages -> policy gradient -> Adam for
/// `config.steps` iterations. Deterministic in (config, start, seed, stream_id).
OptimizerRun run_optimization(const ToyConfig& config, const Vec2& start, std::uint64_t seed,
                              std::uint64_t stream_id = 0);

/// `count` points uniformly distributed on the circle of `radius` around the origin.
std::vector<Vec2> circle_starts(double radius, std::size_t count, RngStream& rng);

}  // namespace noiselab

#include "noiselab/toy_optim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "noiselab/errors.hpp"

namespace noiselab {
namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double ackley(const Vec2& point) noexcept {
  constexpr double a = 20.0;
  constexpr double b = 0.2;
  constexpr double c = 2.0 * std::numbers::pi;
  const double x = point[0];
  const double y = point[1];
  const double radial = -a * std::exp(-b * std::sqrt(0.5 * (x * x + y * y)));
  const double ripple = -std::exp(0.5 * (std::cos(c * x) + std::cos(c * y)));
  // Grouped so the origin cancels to exactly 0: radial = -a, ripple = -e there.
  return (radial + a) + (ripple + std::numbers::e);
}

GaussianPolicy::GaussianPolicy(Vec2 mean, double std) : mean_(mean), std_(std) {
  if (!positive_finite(std)) throw InvalidArgument("GaussianPolicy: std must be > 0");
  if (!std::isfinite(mean[0]) || !std::isfinite(mean[1])) {
    throw InvalidArgument("GaussianPolicy: mean must be finite");
  }
}

SampleGroup sample_group(const GaussianPolicy& policy, std::size_t group_size, RngStream& rng) {
  if (group_size == 0) throw InvalidArgument("sample_group: group size must be >= 1");
  SampleGroup group;
  group.epsilons.reserve(group_size);
  group.samples.reserve(group_size);
  const Vec2 mu = policy.mean();
  const double sd = policy.std();
  for (std::size_t i = 0; i < group_size; ++i) {
    const Vec2 eps{rng.normal(), rng.normal()};
    group.epsilons.push_back(eps);
    group.samples.push_back({mu[0] + sd * eps[0], mu[1] + sd * eps[1]});
  }
  return group;
}

SampleGroup noisy_rewards(SampleGroup group, double sigma_noise, RngStream& rng) {
  if (!(sigma_noise >= 0.0) || !std::isfinite(sigma_noise)) {
    throw InvalidArgument("noisy_rewards: sigma_noise must be a finite value >= 0");
  }
  group.rewards.clear();
  group.rewards.reserve(group.samples.size());
  for (const auto& s : group.samples) {
    double r = -ackley(s);
    if (sigma_noise > 0.0) r += sigma_noise * rng.normal();
    group.rewards.push_back(r);
  }
  return group;
}

Vec2 policy_gradient(std::span<const double> advantages, std::span<const Vec2> epsilons, double std) {
  if (advantages.size() != epsilons.size()) {
    throw DimensionMismatch("policy_gradient: advantages and epsilons differ in length");
  }
  if (advantages.empty()) throw EmptyInput("policy_gradient: empty group");
  if (!positive_finite(std)) throw InvalidArgument("policy_gradient: std must be > 0");

  Vec2 acc{0.0, 0.0};
  for (std::size_t i = 0; i < advantages.size(); ++i) {
    acc[0] += advantages[i] * epsilons[i][0];
    acc[1] += advantages[i] * epsilons[i][1];
  }
  const double scale = -1.0 / (static_cast<double>(advantages.size()) * std);
  return {scale * acc[0], scale * acc[1]};
}

void AdamConfig::validate() const {
  if (!positive_finite(learning_rate)) throw InvalidArgument("adam: learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw InvalidArgument("adam: beta1 must lie in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InvalidArgument("adam: beta2 must lie in [0, 1)");
  if (!positive_finite(eps_hat)) throw InvalidArgument("adam: eps_hat must be > 0");
}

AdamUpdate adam_step(const AdamState& state, const Vec2& gradient, const Vec2& mean) {
  const AdamConfig& cfg = state.config;
  AdamUpdate out{state, mean};
  AdamState& next = out.state;
  next.step_count = state.step_count + 1;
  const auto t = static_cast<double>(next.step_count);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t d = 0; d < 2; ++d) {
    const double g = gradient[d];
    next.first_moment[d] = cfg.beta1 * state.first_moment[d] + (1.0 - cfg.beta1) * g;
    next.second_moment[d] = cfg.beta2 * state.second_moment[d] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = next.first_moment[d] / bias1;
    const double v_hat = next.second_moment[d] / bias2;
    out.mean[d] = mean[d] - cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps_hat);
  }
  return out;
}

void ToyConfig::validate() const {
  if (steps == 0) throw InvalidArgument("toy: steps must be >= 1");
  if (group_size == 0) throw InvalidArgument("toy: group_size must be >= 1");
  if (!positive_finite(policy_std)) throw InvalidArgument("toy: policy_std must be > 0");
  if (!(sigma_noise >= 0.0) || !std::isfinite(sigma_noise)) {
    throw InvalidArgument("toy: sigma_noise must be >= 0");
  }
  if (!positive_finite(advantage_epsilon)) {
    throw InvalidArgument("toy: advantage_epsilon must be > 0");
  }
  adam.validate();
}

OptimizerRun run_optimization(const ToyConfig& config, const Vec2& start, std::uint64_t seed,
                              std::uint64_t stream_id) {
  config.validate();
  OptimizerRun run;
  run.config = config;
  run.start = start;
  run.seed = seed;
  run.stream_id = stream_id;
  run.trajectory.reserve(config.steps + 1);
  run.clean_rewards.reserve(config.steps + 1);

  const RngStream root(seed, stream_id);
  RngStream sampling = root.substream(kPolicySamplingStream);
  RngStream reward_noise = root.substream(kRewardNoiseStream);

  GaussianPolicy policy(start, config.policy_std);
  AdamState adam{config.adam};
  run.trajectory.push_back(start);
  run.clean_rewards.push_back(-ackley(start));

  for (std::size_t step = 0; step < config.steps; ++step) {
    SampleGroup group = sample_group(policy, config.group_size, sampling);
    group = noisy_rewards(std::move(group), config.sigma_noise, reward_noise);
    const GroupAdvantages adv = group_advantages(group.rewards, config.advantage_epsilon);
    const Vec2 grad = policy_gradient(adv.advantages, group.epsilons, policy.std());
    AdamUpdate update = adam_step(adam, grad, policy.mean());
    adam = update.state;
    policy = policy.with_mean(update.mean);
    run.trajectory.push_back(policy.mean());
    run.clean_rewards.push_back(-ackley(policy.mean()));
  }
  run.final_adam = adam;
  return run;
}

std::vector<Vec2> circle_starts(double radius, std::size_t count, RngStream& rng) {
  if (!positive_finite(radius)) {
    std::ostringstream msg;
    msg << "circle_starts: radius must be > 0, got " << radius;
    throw InvalidArgument(msg.str());
  }
  if (count == 0) throw InvalidArgument("circle_starts: count must be >= 1");
  std::vector<Vec2> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    points.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  return points;
}

}  // namespace noiselab

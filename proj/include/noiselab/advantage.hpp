#pragma once

#include <span>
#include <vector>

namespace noiselab {

/// Stabilizer added to the group standard deviation.
inline constexpr double kDefaultAdvantageEpsilon = 1e-8;

/// Group-relative advantages (r_i - mean) / (std + epsilon) with population std.
struct GroupAdvantages {
  std::vector<double> rewards;
  std::vector<double> advantages;
  double group_mean = 0.0;
  double group_std = 0.0;
  double epsilon = kDefaultAdvantageEpsilon;
};

/// Throws EmptyInput for an empty group and InvalidArgument for epsilon <= 0 or
/// non-finite rewards. When every reward is equal all advantages are exactly 0.
GroupAdvantages group_advantages(std::span<const double> rewards,
                                 double epsilon = kDefaultAdvantageEpsilon);

/// Element-wise 1 - r: the reward view after a whole-matrix flip. Rewards must lie in [0, 1].
std::vector<double> complement_rewards(std::span<const double> rewards);

}  // namespace noiselab

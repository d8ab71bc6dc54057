#include "noiselab/advantage.hpp"

#include <cmath>
#include <sstream>

#include "noiselab/errors.hpp"

namespace noiselab {

GroupAdvantages group_advantages(std::span<const double> rewards, double epsilon) {
  if (rewards.empty()) throw EmptyInput("group_advantages: empty reward group");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("group_advantages: epsilon must be a positive finite number");
  }
  for (double r : rewards) {
    if (!std::isfinite(r)) throw InvalidArgument("group_advantages: non-finite reward");
  }

  const auto group = static_cast<double>(rewards.size());
  // Mean taken relative to the first reward: exact when all rewards are equal,
  // so a degenerate group yields exact zeros.
  const double pivot = rewards.front();
  double shifted_sum = 0.0;
  for (double r : rewards) shifted_sum += r - pivot;
  const double mean = pivot + shifted_sum / group;

  GroupAdvantages out;
  out.rewards.assign(rewards.begin(), rewards.end());
  out.group_mean = mean;
  out.epsilon = epsilon;

  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  out.group_std = std::sqrt(sq / group);

  const double denom = out.group_std + epsilon;
  out.advantages.reserve(rewards.size());
  for (double r : rewards) out.advantages.push_back((r - mean) / denom);
  return out;
}

std::vector<double> complement_rewards(std::span<const double> rewards) {
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) {
    if (!(r >= 0.0 && r <= 1.0)) {
      std::ostringstream msg;
      msg << "complement_rewards: reward " << r << " is outside [0, 1]";
      throw OutOfRange(msg.str());
    }
    out.push_back(1.0 - r);
  }
  return out;
}

}  // namespace noiselab

#include "noiselab/reward_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "noiselab/errors.hpp"

namespace noiselab {
namespace {

struct ModeName {
  NoiseMode mode;
  std::string_view name;
};

constexpr std::array<ModeName, 5> kModeNames{{
    {NoiseMode::Cell, "cell"},
    {NoiseMode::Row, "row"},
    {NoiseMode::Column, "column"},
    {NoiseMode::Matrix, "matrix"},
    {NoiseMode::AsymmetricCell, "asymmetric-cell"},
}};

void check_probability(double value, const char* field) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << "noise spec field " << field << " = " << value << " is outside [0, 1]";
    throw InvalidNoiseSpec(msg.str());
  }
}

// Domain-separates epoch streams from any other (seed, id) streams the caller uses.
constexpr std::uint64_t kEpochStreamTag = 0x6e6f6973655f6570ULL;

}  // namespace

RewardMatrix::RewardMatrix(std::size_t rollouts, std::size_t tests, std::vector<std::uint8_t> cells)
    : rollouts_(rollouts), tests_(tests), cells_(std::move(cells)) {
  if (rollouts_ == 0 || tests_ == 0) {
    throw InvalidArgument("reward matrix needs at least one rollout and one test");
  }
  if (cells_.size() != rollouts_ * tests_) {
    throw DimensionMismatch("reward matrix cell count does not match rollouts x tests");
  }
  if (std::any_of(cells_.begin(), cells_.end(), [](std::uint8_t c) { return c > 1; })) {
    throw InvalidArgument("reward matrix entries must be 0 or 1");
  }
}

RewardMatrix RewardMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> copy;
  copy.reserve(rows.size());
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

RewardMatrix RewardMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw InvalidArgument("reward matrix needs at least one rollout and one test");
  }
  const std::size_t tests = rows.front().size();
  std::vector<std::uint8_t> cells;
  cells.reserve(rows.size() * tests);
  for (const auto& r : rows) {
    if (r.size() != tests) throw DimensionMismatch("ragged reward matrix rows");
    for (int v : r) {
      if (v != 0 && v != 1) throw InvalidArgument("reward matrix entries must be 0 or 1");
      cells.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return RewardMatrix(rows.size(), tests, std::move(cells));
}

RewardMatrix RewardMatrix::filled(std::size_t rollouts, std::size_t tests, bool pass) {
  return RewardMatrix(rollouts, tests, std::vector<std::uint8_t>(rollouts * tests, pass ? 1 : 0));
}

bool RewardMatrix::at(std::size_t rollout, std::size_t test) const {
  if (rollout >= rollouts_ || test >= tests_) throw OutOfRange("reward matrix index out of range");
  return cells_[rollout * tests_ + test] != 0;
}

std::span<const std::uint8_t> RewardMatrix::row(std::size_t rollout) const {
  if (rollout >= rollouts_) throw OutOfRange("reward matrix row out of range");
  return std::span<const std::uint8_t>(cells_).subspan(rollout * tests_, tests_);
}

RewardMatrix RewardMatrix::complement() const {
  std::vector<std::uint8_t> flipped(cells_.size());
  std::transform(cells_.begin(), cells_.end(), flipped.begin(),
                 [](std::uint8_t c) { return static_cast<std::uint8_t>(c ^ 1U); });
  return RewardMatrix(rollouts_, tests_, std::move(flipped));
}

std::string_view to_string(NoiseMode mode) noexcept {
  for (const auto& entry : kModeNames) {
    if (entry.mode == mode) return entry.name;
  }
  return "unknown";
}

NoiseMode parse_noise_mode(std::string_view name) {
  for (const auto& entry : kModeNames) {
    if (entry.name == name) return entry.mode;
  }
  throw InvalidNoiseSpec("unknown noise mode '" + std::string(name) +
                         "' (expected cell, row, column, matrix or asymmetric-cell)");
}

NoiseSpec NoiseSpec::symmetric(NoiseMode mode, double rate_p, std::uint64_t seed) {
  if (mode == NoiseMode::AsymmetricCell) {
    throw InvalidNoiseSpec("asymmetric-cell noise takes an fpr/fnr pair, not a single rate");
  }
  NoiseSpec spec{mode, rate_p, 0.0, 0.0, seed};
  spec.validate();
  return spec;
}

NoiseSpec NoiseSpec::asymmetric(double fpr, double fnr, std::uint64_t seed) {
  NoiseSpec spec{NoiseMode::AsymmetricCell, 0.0, fpr, fnr, seed};
  spec.validate();
  return spec;
}

void NoiseSpec::validate() const {
  check_probability(rate_p, "rate_p");
  check_probability(fpr, "fpr");
  check_probability(fnr, "fnr");
}

RewardMatrix apply_noise(const RewardMatrix& matrix, const NoiseSpec& spec, RngStream& rng) {
  spec.validate();
  const std::size_t rollouts = matrix.rollouts();
  const std::size_t tests = matrix.tests();
  const auto in = matrix.cells();
  std::vector<std::uint8_t> out(in.begin(), in.end());
  const double p = spec.rate_p;

  switch (spec.mode) {
    case NoiseMode::Cell:
      for (auto& c : out) {
        if (rng.uniform() < p) c ^= 1U;
      }
      break;
    case NoiseMode::Row:
      for (std::size_t i = 0; i < rollouts; ++i) {
        if (rng.uniform() < p) {
          for (std::size_t j = 0; j < tests; ++j) out[i * tests + j] ^= 1U;
        }
      }
      break;
    case NoiseMode::Column:
      for (std::size_t j = 0; j < tests; ++j) {
        if (rng.uniform() < p) {
          for (std::size_t i = 0; i < rollouts; ++i) out[i * tests + j] ^= 1U;
        }
      }
      break;
    case NoiseMode::Matrix:
      if (rng.uniform() < p) {
        for (auto& c : out) c ^= 1U;
      }
      break;
    case NoiseMode::AsymmetricCell:
      for (auto& c : out) {
        const double flip = c != 0 ? spec.fnr : spec.fpr;
        if (rng.uniform() < flip) c ^= 1U;
      }
      break;
  }
  return RewardMatrix(rollouts, tests, std::move(out));
}

std::vector<double> rollout_rewards(const RewardMatrix& matrix) {
  std::vector<double> rewards;
  rewards.reserve(matrix.rollouts());
  const auto tests = static_cast<double>(matrix.tests());
  for (std::size_t i = 0; i < matrix.rollouts(); ++i) {
    const auto r = matrix.row(i);
    const auto passed = std::accumulate(r.begin(), r.end(), std::size_t{0});
    rewards.push_back(static_cast<double>(passed) / tests);
  }
  return rewards;
}

RngStream resample_epoch_noise(const NoiseSpec& spec, std::uint64_t epoch) {
  return RngStream(spec.seed ^ kEpochStreamTag, epoch);
}

}  // namespace noiselab

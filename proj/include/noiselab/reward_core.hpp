#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noiselab/rng.hpp"

namespace noiselab {

/// Binary rollout x test outcome grid: entry (i, j) is 1 when rollout i passes test j.
/// Immutable after construction; every entry is exactly 0 or 1.
class RewardMatrix {
 public:
  /// Row-major cells. Throws InvalidArgument on zero dimensions, a size mismatch,
  /// or any cell other than 0/1.
  RewardMatrix(std::size_t rollouts, std::size_t tests, std::vector<std::uint8_t> cells);

  static RewardMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
  static RewardMatrix from_rows(const std::vector<std::vector<int>>& rows);
  static RewardMatrix filled(std::size_t rollouts, std::size_t tests, bool pass);

  std::size_t rollouts() const noexcept { return rollouts_; }
  std::size_t tests() const noexcept { return tests_; }
  std::size_t size() const noexcept { return cells_.size(); }

  bool at(std::size_t rollout, std::size_t test) const;
  std::span<const std::uint8_t> row(std::size_t rollout) const;
  std::span<const std::uint8_t> cells() const noexcept { return cells_; }

  RewardMatrix complement() const;

  friend bool operator==(const RewardMatrix&, const RewardMatrix&) = default;

 private:
  std::size_t rollouts_;
  std::size_t tests_;
  std::vector<std::uint8_t> cells_;
};

enum class NoiseMode {
  Cell,            // every cell flipped independently
  Row,             // whole rollouts flipped
  Column,          // whole tests flipped across the group
  Matrix,          // the entire matrix flipped at once
  AsymmetricCell,  // per cell, 0->1 with fpr and 1->0 with fnr
};

std::string_view to_string(NoiseMode mode) noexcept;
/// Accepts "cell", "row", "column", "matrix", "asymmetric-cell".
NoiseMode parse_noise_mode(std::string_view name);

struct NoiseSpec {
  NoiseMode mode = NoiseMode::Cell;
  double rate_p = 0.0;  // symmetric modes only
  double fpr = 0.0;     // AsymmetricCell only
  double fnr = 0.0;     // AsymmetricCell only
  std::uint64_t seed = 0;

  static NoiseSpec symmetric(NoiseMode mode, double rate_p, std::uint64_t seed = 0);
  static NoiseSpec asymmetric(double fpr, double fnr, std::uint64_t seed = 0);

  /// Throws InvalidNoiseSpec naming the offending field when a probability lies outside [0, 1].
  void validate() const;

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// Returns a corrupted copy of `matrix`. Draws consumed from `rng`: one uniform per
/// cell (Cell, AsymmetricCell, row-major), per row (Row), per column (Column), or a
/// single one (Matrix). Copy the stream beforehand to replay a corruption.
RewardMatrix apply_noise(const RewardMatrix& matrix, const NoiseSpec& spec, RngStream& rng);

/// Fraction of tests passed by each rollout.
std::vector<double> rollout_rewards(const RewardMatrix& matrix);

/// Fresh stream for one epoch's corruption; the same (spec.seed, epoch) always
/// gives the same stream, different epochs give independent ones.
RngStream resample_epoch_noise(const NoiseSpec& spec, std::uint64_t epoch);

}  // namespace noiselab

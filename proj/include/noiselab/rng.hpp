#pragma once

#include <cstdint>
#include <limits>

namespace noiselab {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Reproducible random stream identified by (seed, stream_id).
///
/// Counter based: the k-th raw draw is a pure function of (seed, stream_id, k),
/// so a stream can be copied to replay it and substreams never depend on how
/// many values a sibling consumed. Each stream gets its own starting state and
/// its own odd increment, following the SplittableRandom construction.
///
/// Satisfies std::uniform_random_bit_generator, but the helpers below are
/// preferred: std distributions are implementation-defined and would break
/// cross-platform determinism.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Standard normal draw (Box-Muller; the second variate of each pair is cached).
  double normal() noexcept;

  /// Independent child stream; depends only on this stream's identity, not its position.
  RngStream substream(std::uint64_t id) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t base_;
  std::uint64_t gamma_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace noiselab

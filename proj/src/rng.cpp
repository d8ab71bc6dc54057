#include "noiselab/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace noiselab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// MurmurHash3 fmix64 variant; a second mixer so base and gamma decorrelate.
constexpr std::uint64_t mix64_alt(std::uint64_t z) noexcept {
  z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
  z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
  return z ^ (z >> 33);
}

// Odd gamma with enough bit transitions (java.util.SplittableRandom::mixGamma).
std::uint64_t make_gamma(std::uint64_t z) noexcept {
  z = mix64_alt(z) | 1ULL;
  if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {
  const std::uint64_t key = mix64(seed ^ mix64(stream_id + kGolden));
  base_ = mix64(key + kGolden);
  gamma_ = make_gamma(key ^ (stream_id * kGolden));
}

RngStream::result_type RngStream::operator()() noexcept {
  ++counter_;
  return mix64(base_ + counter_ * gamma_);
}

double RngStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

RngStream RngStream::substream(std::uint64_t id) const noexcept {
  return RngStream(mix64_alt(base_ ^ mix64(gamma_ + id)), id);
}

}  // namespace noiselab

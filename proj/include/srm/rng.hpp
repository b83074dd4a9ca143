#pragma once

#include <cstdint>
#include <limits>

namespace srm {

// Counter-based splittable generator. Output i of a stream with key k is
// mix(k + i * golden), the SplitMix64 output function, so a stream is fully
// described by (key, counter) and child streams derive their keys by hashing.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Independent child stream; split(i) is a pure function of (key, i) and
  // does not advance this stream.
  RngStream split(std::uint64_t index) const;
  // Child stream keyed by the next output; advances this stream by one draw,
  // so repeated calls on the same stream give fresh children.
  RngStream fork();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_pos();
  double exponential();
  double normal();
  std::uint64_t poisson(double mean);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  RngStream(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace srm

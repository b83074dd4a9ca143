#include "srm/rng.hpp"

#include <cmath>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

namespace srm {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), key_(mix64(seed ^ 0x5DEECE66DULL)) {}

RngStream::result_type RngStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(seed_, mix64(key_ ^ mix64((index + 1) * kGolden + 0xD1B54A32D192ED03ULL)));
}

RngStream RngStream::fork() { return split((*this)()); }

double RngStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RngStream::uniform_pos() {
  return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform_pos()); }

double RngStream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  boost::random::poisson_distribution<std::uint64_t, double> dist(mean);
  return dist(*this);
}

}  // namespace srm

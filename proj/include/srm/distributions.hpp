#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "srm/errors.hpp"
#include "srm/rng.hpp"

namespace srm {

// One-dimensional law for the weight of a fixed atom: a normal distribution
// (degenerate when sd == 0) or a finite discrete distribution.
class WeightDistribution {
 public:
  enum class Kind { Normal, Discrete };

  static WeightDistribution normal(double mean, double sd) {
    if (!(sd >= 0.0) || !std::isfinite(mean) || !std::isfinite(sd)) {
      throw Error(ErrorKind::InvalidArgument, "normal weight law needs finite mean and sd >= 0");
    }
    WeightDistribution d;
    d.kind_ = Kind::Normal;
    d.mean_ = mean;
    d.sd_ = sd;
    return d;
  }

  static WeightDistribution discrete(std::vector<double> values, std::vector<double> probs) {
    if (values.empty() || values.size() != probs.size()) {
      throw Error(ErrorKind::InvalidArgument, "discrete weight law needs matching values/probs");
    }
    double total = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) throw Error(ErrorKind::InvalidArgument, "probabilities must be >= 0");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidArgument, "discrete weight law probabilities must sum to 1");
    }
    WeightDistribution d;
    d.kind_ = Kind::Discrete;
    d.values_ = std::move(values);
    d.probs_ = std::move(probs);
    return d;
  }

  Kind kind() const { return kind_; }
  // Point masses: discrete laws and degenerate normals.
  bool is_atomic() const { return kind_ == Kind::Discrete || sd_ == 0.0; }
  double mean() const { return mean_; }
  double sd() const { return sd_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

  // Support points of an atomic law.
  std::vector<double> support() const {
    if (kind_ == Kind::Discrete) return values_;
    return {mean_};
  }

  // Density for a continuous law, probability for an atomic one.
  double density(double theta) const {
    if (kind_ == Kind::Discrete) {
      double p = 0.0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] == theta) p += probs_[i];
      }
      return p;
    }
    if (sd_ == 0.0) return theta == mean_ ? 1.0 : 0.0;
    const double z = (theta - mean_) / sd_;
    return std::exp(-0.5 * z * z) / (sd_ * std::sqrt(2.0 * std::numbers::pi));
  }

  double sample(RngStream& rng) const {
    if (kind_ == Kind::Discrete) {
      const double u = rng.uniform();
      double cumulative = 0.0;
      for (std::size_t i = 0; i < values_.size(); ++i) {
        cumulative += probs_[i];
        if (u < cumulative) return values_[i];
      }
      return values_.back();
    }
    if (sd_ == 0.0) return mean_;
    return mean_ + sd_ * rng.normal();
  }

 private:
  WeightDistribution() = default;

  Kind kind_ = Kind::Normal;
  double mean_ = 0.0;
  double sd_ = 0.0;
  std::vector<double> values_;
  std::vector<double> probs_;
};

}  // namespace srm

#pragma once

// Levy intensity measures F(ds, dw) = base_rate * ds * rho(dw) on [0, T) x (R \ {0}).
//
// The jump-size measure rho is stored as two measures on (0, inf): the
// positive half rho(dw) restricted to w > 0, and the reflection of the
// negative half, w -> -w. Each half is a HalfLineMeasure; built-in families
// answer every query in closed form, custom densities fall back to
// quadrature with a declared power-law exponent at zero.

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "srm/measure.hpp"

namespace srm {

struct DiscretePoint {
  double weight = 0.0;  // jump size, > 0 on a half line, nonzero on the real line
  double mass = 0.0;    // > 0
};

// Serializable description of a half-line measure.
struct FamilyDescriptor {
  std::string family;  // "discrete", "gamma", "power", "stable", "exponential", "custom"
  std::map<std::string, double> params;
  std::vector<DiscretePoint> points;
};

// A sigma-finite measure on (0, inf).
class HalfLineMeasure {
 public:
  virtual ~HalfLineMeasure() = default;

  virtual FamilyDescriptor descriptor() const = 0;
  virtual bool is_discrete() const { return false; }
  virtual const std::vector<DiscretePoint>& points() const;

  // Density w.r.t. Lebesgue on (0, inf); zero for discrete measures.
  virtual double density(double x) const = 0;
  // Measure of the open interval (lo, hi), 0 <= lo < hi <= inf. May be inf.
  virtual double mass_between(double lo, double hi) const = 0;
  // Integral of x over the open interval (lo, hi). May be inf.
  virtual double moment_between(double lo, double hi) const = 0;
  // Measure of [x, inf) for x > 0.
  virtual double tail(double x) const = 0;
  // Largest jump size x with tail(x) >= y, for 0 < y; returns 0 when
  // y exceeds the total mass.
  virtual double inverse_tail(double y) const = 0;
  // Integral of (exp(i t x) - 1) over the measure. Requires the Levy condition.
  virtual std::complex<double> char_exponent(double t) const = 0;
  // Exponent p with density ~ x^p as x -> 0 (quadrature hint), and the right
  // end of the support.
  virtual double zero_exponent() const { return 0.0; }
  virtual double support_upper() const { return kInfinity; }

  double total_mass() const { return mass_between(0.0, kInfinity); }
  double one_wedge_integral() const;
  double first_moment() const { return moment_between(0.0, kInfinity); }

  static constexpr double kInfinity = std::numeric_limits<double>::infinity();
};

using HalfLinePtr = std::shared_ptr<const HalfLineMeasure>;

// Built-in half-line families.
namespace half_line {

HalfLinePtr discrete(std::vector<DiscretePoint> points);
// a * x^{-1} * exp(-b x)
HalfLinePtr gamma(double a, double b);
// a * x^exponent on (0, upper]; upper may be infinite.
HalfLinePtr power(double a, double exponent, double upper);
// a * x^{-1-sigma} on (0, w_max], sigma in (0, 1).
HalfLinePtr stable(double a, double sigma, double w_max);
// a * exp(-b x)
HalfLinePtr exponential(double a, double b);
// Arbitrary density on (0, upper]. zero_exponent p declares density ~ x^p near
// zero; quadrature handles the singular end through that exponent.
HalfLinePtr custom(std::function<double(double)> density, double zero_exponent, double upper,
                   std::string label = "custom");

}  // namespace half_line

enum class WeightKind { FiniteDiscrete, Density, TwoSidedComposite };

// rho(dw) on R \ {0}.
class WeightMeasure {
 public:
  WeightMeasure() = default;  // the zero measure

  static WeightMeasure finite_discrete(std::vector<DiscretePoint> points);
  // Density measure built from its two halves; either may be null.
  static WeightMeasure density(HalfLinePtr positive, HalfLinePtr negative);
  static WeightMeasure composite(HalfLinePtr positive, HalfLinePtr negative);

  WeightKind kind() const { return kind_; }
  const HalfLinePtr& positive() const { return positive_; }
  // Reflection of the negative half onto (0, inf).
  const HalfLinePtr& negative() const { return negative_; }

  bool is_zero() const;
  bool has_negative_support() const;
  bool has_positive_support() const;

  double density(double w) const;
  // rho((lo, hi)) for an open interval of the real line.
  double mass_between(double lo, double hi) const;
  double total_mass() const;
  double one_wedge_integral() const;
  double abs_first_moment() const;
  // Integral of (exp(i t w) - 1) rho(dw).
  std::complex<double> char_exponent(double t) const;

  // Signed atoms when both halves are discrete (or absent).
  std::vector<DiscretePoint> signed_points() const;

 private:
  WeightMeasure(WeightKind kind, HalfLinePtr positive, HalfLinePtr negative)
      : kind_(kind), positive_(std::move(positive)), negative_(std::move(negative)) {}

  WeightKind kind_ = WeightKind::FiniteDiscrete;
  HalfLinePtr positive_;
  HalfLinePtr negative_;
};

// rho assigns F1's mass to positive jumps and F2's mass, reflected, to
// negative jumps. Throws SupportViolation if either input has negative support.
WeightMeasure compose_two_sided(const WeightMeasure& f1, const WeightMeasure& f2);

struct LevySpec {
  WeightMeasure weight;
  double base_rate = 1.0;      // homogeneous Lebesgue multiplier on [0, T)
  double domain_length = 1.0;  // T
};

struct CharacteristicPair {
  LevySpec levy;
  PiecewiseDensity drift;
};

struct IntegrabilityReport {
  bool ok = false;
  double value = 0.0;
};

struct ActivityReport {
  bool finite = false;
  double mass = 0.0;  // inf for infinite activity
};

// value = base_rate * T * integral of min(1, |w|) rho(dw).
IntegrabilityReport check_levy_integrability(const LevySpec& spec);
ActivityReport activity(const LevySpec& spec);

// exp(i t drift(B) + |B| base_rate * integral (exp(i t w) - 1) rho(dw)).
std::complex<double> char_fn(const CharacteristicPair& pair, double t, const BorelSet& b);

}  // namespace srm

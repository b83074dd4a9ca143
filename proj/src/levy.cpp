#include "srm/levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "srm/errors.hpp"
#include "srm/quadrature.hpp"

namespace srm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorKind::InvalidArgument, message);
}

// 1 - cos(u) without cancellation for small u.
double one_minus_cos(double u) {
  const double s = std::sin(0.5 * u);
  return 2.0 * s * s;
}

// Integral of a * x^p over (lo, hi) with 0 <= lo <= hi <= inf.
double power_integral(double a, double p, double lo, double hi) {
  if (!(lo < hi) || a == 0.0) return 0.0;
  const double q = p + 1.0;
  if (lo == 0.0 && q <= 0.0) return kInf;
  if (std::isinf(hi) && q >= 0.0) return kInf;
  if (q == 0.0) return a * std::log(hi / lo);
  const double upper = std::isinf(hi) ? 0.0 : std::pow(hi, q);
  const double lower = lo == 0.0 ? 0.0 : std::pow(lo, q);
  return a * (upper - lower) / q;
}

// Numerical integral of (exp(i t x) - 1) density(x) over (0, upper].
std::complex<double> numeric_char_exponent(const std::function<double(double)>& density,
                                           double zero_exponent, double upper, double t) {
  if (t == 0.0) return {0.0, 0.0};
  const double head_end = std::isinf(upper) ? 1.0 : upper;
  double re = -quad::integrate_from_zero(
      [&](double x) { return one_minus_cos(t * x) * density(x); }, head_end, zero_exponent + 2.0);
  double im = quad::integrate_from_zero(
      [&](double x) { return std::sin(t * x) * density(x); }, head_end, zero_exponent + 1.0);
  if (std::isinf(upper)) {
    const auto osc = quad::fourier_tail(density, head_end, t);
    re += osc.real() - quad::integrate(density, head_end, kInf);
    im += osc.imag();
  }
  return {re, im};
}

// Solves tail(x) = y for x on a log scale, tail decreasing.
double invert_decreasing_tail(const std::function<double(double)>& tail, double y, double upper) {
  double hi_log = std::isinf(upper) ? 0.0 : std::log(upper);
  if (std::isinf(upper)) {
    while (tail(std::exp(hi_log)) >= y) {
      hi_log += 2.0;
      if (hi_log > 700.0) return std::exp(hi_log);
    }
  }
  double lo_log = std::min(hi_log, 0.0) - 1.0;
  while (tail(std::exp(lo_log)) < y) {
    lo_log -= 2.0;
    if (lo_log < -700.0) return 0.0;
  }
  boost::uintmax_t max_iter = 200;
  const auto root = boost::math::tools::toms748_solve(
      [&](double l) { return tail(std::exp(l)) - y; }, lo_log, hi_log,
      boost::math::tools::eps_tolerance<double>(48), max_iter);
  return std::exp(0.5 * (root.first + root.second));
}

// ---------------------------------------------------------------------------

class DiscreteHalf final : public HalfLineMeasure {
 public:
  explicit DiscreteHalf(std::vector<DiscretePoint> points) : points_(std::move(points)) {
    for (const auto& p : points_) {
      require(std::isfinite(p.weight) && p.weight > 0.0, "discrete jump sizes must be positive");
      require(std::isfinite(p.mass) && p.mass > 0.0, "discrete masses must be positive");
    }
    // Largest jump first, the order inverse_tail walks.
    std::sort(points_.begin(), points_.end(),
              [](const DiscretePoint& a, const DiscretePoint& b) { return a.weight > b.weight; });
  }

  FamilyDescriptor descriptor() const override { return {"discrete", {}, points_}; }
  bool is_discrete() const override { return true; }
  const std::vector<DiscretePoint>& points() const override { return points_; }

  double density(double) const override { return 0.0; }

  double mass_between(double lo, double hi) const override {
    double total = 0.0;
    for (const auto& p : points_) {
      if (lo < p.weight && p.weight < hi) total += p.mass;
    }
    return total;
  }

  double moment_between(double lo, double hi) const override {
    double total = 0.0;
    for (const auto& p : points_) {
      if (lo < p.weight && p.weight < hi) total += p.weight * p.mass;
    }
    return total;
  }

  double tail(double x) const override {
    double total = 0.0;
    for (const auto& p : points_) {
      if (p.weight >= x) total += p.mass;
    }
    return total;
  }

  double inverse_tail(double y) const override {
    double cumulative = 0.0;
    for (const auto& p : points_) {
      cumulative += p.mass;
      if (y <= cumulative) return p.weight;
    }
    return 0.0;
  }

  std::complex<double> char_exponent(double t) const override {
    std::complex<double> total{0.0, 0.0};
    for (const auto& p : points_) {
      total += p.mass * std::complex<double>(-one_minus_cos(t * p.weight), std::sin(t * p.weight));
    }
    return total;
  }

 private:
  std::vector<DiscretePoint> points_;
};

class GammaHalf final : public HalfLineMeasure {
 public:
  GammaHalf(double a, double b) : a_(a), b_(b) {
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "gamma family needs a > 0 and b > 0");
  }

  FamilyDescriptor descriptor() const override { return {"gamma", {{"a", a_}, {"b", b_}}, {}}; }

  double density(double x) const override { return x > 0.0 ? a_ * std::exp(-b_ * x) / x : 0.0; }

  double mass_between(double lo, double hi) const override {
    if (!(lo < hi)) return 0.0;
    if (lo <= 0.0) return kInf;
    return a_ * (e1(b_ * lo) - (std::isinf(hi) ? 0.0 : e1(b_ * hi)));
  }

  double moment_between(double lo, double hi) const override {
    if (!(lo < hi)) return 0.0;
    const double upper = std::isinf(hi) ? 0.0 : std::exp(-b_ * hi);
    return a_ / b_ * (std::exp(-b_ * lo) - upper);
  }

  double tail(double x) const override { return x <= 0.0 ? kInf : a_ * e1(b_ * x); }

  double inverse_tail(double y) const override {
    // Solve E1(z) = c with z = b x, Newton on log z.
    const double c = y / a_;
    constexpr double kLogMin = -700.0;
    const double log_max = std::log(700.0);
    if (c <= e1(700.0)) return 700.0 / b_;
    const double guess =
        c > 1.0 ? -std::numbers::egamma - c : std::log(std::max(-std::log(c), 1e-3));
    boost::uintmax_t max_iter = 100;
    const double log_z = boost::math::tools::newton_raphson_iterate(
        [c](double l) {
          const double z = std::exp(l);
          return std::make_pair(e1(z) - c, -std::exp(-z));
        },
        std::clamp(guess, kLogMin, log_max), kLogMin, log_max, 50, max_iter);
    return std::exp(log_z) / b_;
  }

  std::complex<double> char_exponent(double t) const override {
    return -a_ * std::log(std::complex<double>(1.0, -t / b_));
  }

  double zero_exponent() const override { return -1.0; }

 private:
  static double e1(double z) { return boost::math::expint(1, z); }

  double a_;
  double b_;
};

class PowerHalf final : public HalfLineMeasure {
 public:
  PowerHalf(std::string family, double a, double exponent, double upper)
      : family_(std::move(family)), a_(a), p_(exponent), upper_(upper) {
    require(a > 0.0 && std::isfinite(a), "power family needs a > 0");
    require(std::isfinite(exponent), "power exponent must be finite");
    require(upper > 0.0, "power family support bound must be positive");
  }

  FamilyDescriptor descriptor() const override {
    if (family_ == "stable") {
      return {"stable", {{"a", a_}, {"sigma", -1.0 - p_}, {"w_max", upper_}}, {}};
    }
    return {"power", {{"a", a_}, {"exponent", p_}, {"upper", upper_}}, {}};
  }

  double density(double x) const override {
    return (x > 0.0 && x <= upper_) ? a_ * std::pow(x, p_) : 0.0;
  }

  double mass_between(double lo, double hi) const override {
    return power_integral(a_, p_, std::max(lo, 0.0), std::min(hi, upper_));
  }

  double moment_between(double lo, double hi) const override {
    return power_integral(a_, p_ + 1.0, std::max(lo, 0.0), std::min(hi, upper_));
  }

  double tail(double x) const override { return mass_between(x, kInf); }

  double inverse_tail(double y) const override {
    if (y >= total_mass()) return 0.0;
    const double q = p_ + 1.0;
    if (q == 0.0) return upper_ * std::exp(-y / a_);
    const double top = std::isinf(upper_) ? 0.0 : std::pow(upper_, q);
    return std::pow(top - q * y / a_, 1.0 / q);
  }

  std::complex<double> char_exponent(double t) const override {
    if (t == 0.0) return {0.0, 0.0};
    require(p_ > -2.0, "power density violates the Levy condition at zero");
    if (std::isinf(upper_)) {
      require(p_ < -1.0, "untruncated power density violates the Levy condition at infinity");
      // Integral of (e^{itx} - 1) x^{-1-s} over (0, inf) is Gamma(-s) (-i t)^s.
      const double s = -1.0 - p_;
      const double phase = -0.5 * std::numbers::pi * s * (t > 0.0 ? 1.0 : -1.0);
      return a_ * boost::math::tgamma(-s) * std::pow(std::abs(t), s) *
             std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return numeric_char_exponent([this](double x) { return density(x); }, p_, upper_, t);
  }

  double zero_exponent() const override { return p_; }
  double support_upper() const override { return upper_; }

 private:
  std::string family_;
  double a_;
  double p_;
  double upper_;
};

class ExponentialHalf final : public HalfLineMeasure {
 public:
  ExponentialHalf(double a, double b) : a_(a), b_(b) {
    require(a > 0.0 && b > 0.0 && std::isfinite(a) && std::isfinite(b),
            "exponential family needs a > 0 and b > 0");
  }

  FamilyDescriptor descriptor() const override {
    return {"exponential", {{"a", a_}, {"b", b_}}, {}};
  }

  double density(double x) const override { return x > 0.0 ? a_ * std::exp(-b_ * x) : 0.0; }

  double mass_between(double lo, double hi) const override {
    if (!(lo < hi)) return 0.0;
    const double upper = std::isinf(hi) ? 0.0 : std::exp(-b_ * hi);
    return a_ / b_ * (std::exp(-b_ * std::max(lo, 0.0)) - upper);
  }

  double moment_between(double lo, double hi) const override {
    if (!(lo < hi)) return 0.0;
    lo = std::max(lo, 0.0);
    const auto primitive = [this](double x) {
      return std::isinf(x) ? 0.0 : (1.0 + b_ * x) * std::exp(-b_ * x);
    };
    return a_ / (b_ * b_) * (primitive(lo) - primitive(hi));
  }

  double tail(double x) const override { return mass_between(std::max(x, 0.0), kInf); }

  double inverse_tail(double y) const override {
    const double mass = a_ / b_;
    if (y >= mass) return 0.0;
    return std::log(mass / y) / b_;
  }

  std::complex<double> char_exponent(double t) const override {
    return a_ * (1.0 / std::complex<double>(b_, -t) - 1.0 / b_);
  }

 private:
  double a_;
  double b_;
};

class CustomHalf final : public HalfLineMeasure {
 public:
  CustomHalf(std::function<double(double)> density, double zero_exponent, double upper,
             std::string label)
      : density_(std::move(density)), p_(zero_exponent), upper_(upper), label_(std::move(label)) {
    require(static_cast<bool>(density_), "custom density needs a callable");
    require(upper > 0.0, "custom density support bound must be positive");
  }

  FamilyDescriptor descriptor() const override {
    return {label_, {{"zero_exponent", p_}, {"upper", upper_}}, {}};
  }

  double density(double x) const override {
    return (x > 0.0 && x <= upper_) ? density_(x) : 0.0;
  }

  double mass_between(double lo, double hi) const override {
    return integral([this](double x) { return density_(x); }, p_, lo, hi);
  }

  double moment_between(double lo, double hi) const override {
    return integral([this](double x) { return x * density_(x); }, p_ + 1.0, lo, hi);
  }

  double tail(double x) const override { return mass_between(std::max(x, 0.0), kInf); }

  double inverse_tail(double y) const override {
    if (y >= total_mass()) return 0.0;
    return invert_decreasing_tail([this](double x) { return tail(x); }, y, upper_);
  }

  std::complex<double> char_exponent(double t) const override {
    return numeric_char_exponent([this](double x) { return density(x); }, p_, upper_, t);
  }

  double zero_exponent() const override { return p_; }
  double support_upper() const override { return upper_; }

 private:
  double integral(const std::function<double(double)>& f, double exponent, double lo,
                  double hi) const {
    hi = std::min(hi, upper_);
    lo = std::max(lo, 0.0);
    if (!(lo < hi)) return 0.0;
    if (lo == 0.0) {
      if (exponent <= -1.0) return kInf;
      return quad::integrate_from_zero(f, hi, exponent);
    }
    return quad::integrate(f, lo, hi);
  }

  std::function<double(double)> density_;
  double p_;
  double upper_;
  std::string label_;
};

}  // namespace

const std::vector<DiscretePoint>& HalfLineMeasure::points() const {
  static const std::vector<DiscretePoint> kEmpty;
  return kEmpty;
}

double HalfLineMeasure::one_wedge_integral() const { return moment_between(0.0, 1.0) + tail(1.0); }

namespace half_line {

HalfLinePtr discrete(std::vector<DiscretePoint> points) {
  return std::make_shared<DiscreteHalf>(std::move(points));
}

HalfLinePtr gamma(double a, double b) { return std::make_shared<GammaHalf>(a, b); }

HalfLinePtr power(double a, double exponent, double upper) {
  return std::make_shared<PowerHalf>("power", a, exponent, upper);
}

HalfLinePtr stable(double a, double sigma, double w_max) {
  require(sigma > 0.0 && sigma < 1.0, "stable family needs sigma in (0, 1)");
  require(std::isfinite(w_max) && w_max > 0.0, "stable family needs a finite truncation w_max");
  return std::make_shared<PowerHalf>("stable", a, -1.0 - sigma, w_max);
}

HalfLinePtr exponential(double a, double b) { return std::make_shared<ExponentialHalf>(a, b); }

HalfLinePtr custom(std::function<double(double)> density, double zero_exponent, double upper,
                   std::string label) {
  return std::make_shared<CustomHalf>(std::move(density), zero_exponent, upper, std::move(label));
}

}  // namespace half_line

// ---------------------------------------------------------------------------

WeightMeasure WeightMeasure::finite_discrete(std::vector<DiscretePoint> points) {
  std::vector<DiscretePoint> pos;
  std::vector<DiscretePoint> neg;
  for (const auto& p : points) {
    require(std::isfinite(p.weight) && p.weight != 0.0, "discrete weights must be nonzero");
    if (p.weight > 0.0) {
      pos.push_back(p);
    } else {
      neg.push_back({-p.weight, p.mass});
    }
  }
  return WeightMeasure(WeightKind::FiniteDiscrete,
                       pos.empty() ? nullptr : half_line::discrete(std::move(pos)),
                       neg.empty() ? nullptr : half_line::discrete(std::move(neg)));
}

WeightMeasure WeightMeasure::density(HalfLinePtr positive, HalfLinePtr negative) {
  return WeightMeasure(WeightKind::Density, std::move(positive), std::move(negative));
}

WeightMeasure WeightMeasure::composite(HalfLinePtr positive, HalfLinePtr negative) {
  return WeightMeasure(WeightKind::TwoSidedComposite, std::move(positive), std::move(negative));
}

bool WeightMeasure::is_zero() const { return !positive_ && !negative_; }
bool WeightMeasure::has_negative_support() const { return static_cast<bool>(negative_); }
bool WeightMeasure::has_positive_support() const { return static_cast<bool>(positive_); }

double WeightMeasure::density(double w) const {
  if (w > 0.0) return positive_ ? positive_->density(w) : 0.0;
  if (w < 0.0) return negative_ ? negative_->density(-w) : 0.0;
  return 0.0;
}

double WeightMeasure::mass_between(double lo, double hi) const {
  double total = 0.0;
  if (positive_ && hi > 0.0) total += positive_->mass_between(std::max(lo, 0.0), hi);
  if (negative_ && lo < 0.0) total += negative_->mass_between(std::max(-hi, 0.0), -lo);
  return total;
}

double WeightMeasure::total_mass() const {
  return (positive_ ? positive_->total_mass() : 0.0) + (negative_ ? negative_->total_mass() : 0.0);
}

double WeightMeasure::one_wedge_integral() const {
  return (positive_ ? positive_->one_wedge_integral() : 0.0) +
         (negative_ ? negative_->one_wedge_integral() : 0.0);
}

double WeightMeasure::abs_first_moment() const {
  return (positive_ ? positive_->first_moment() : 0.0) +
         (negative_ ? negative_->first_moment() : 0.0);
}

std::complex<double> WeightMeasure::char_exponent(double t) const {
  std::complex<double> total{0.0, 0.0};
  if (t == 0.0) return total;
  if (positive_) total += positive_->char_exponent(t);
  if (negative_) total += negative_->char_exponent(-t);
  return total;
}

std::vector<DiscretePoint> WeightMeasure::signed_points() const {
  std::vector<DiscretePoint> out;
  if (positive_) {
    require(positive_->is_discrete(), "weight measure has a continuous positive half");
    for (const auto& p : positive_->points()) out.push_back(p);
  }
  if (negative_) {
    require(negative_->is_discrete(), "weight measure has a continuous negative half");
    for (const auto& p : negative_->points()) out.push_back({-p.weight, p.mass});
  }
  return out;
}

WeightMeasure compose_two_sided(const WeightMeasure& f1, const WeightMeasure& f2) {
  if (f1.has_negative_support() || f2.has_negative_support()) {
    throw Error(ErrorKind::SupportViolation,
                "two-sided composition needs both inputs supported on (0, inf)");
  }
  return WeightMeasure::composite(f1.positive(), f2.positive());
}

IntegrabilityReport check_levy_integrability(const LevySpec& spec) {
  require(spec.base_rate > 0.0 && std::isfinite(spec.base_rate), "base_rate must be positive");
  require(spec.domain_length > 0.0 && std::isfinite(spec.domain_length),
          "domain length must be positive");
  const double value = spec.base_rate * spec.domain_length * spec.weight.one_wedge_integral();
  return {std::isfinite(value), value};
}

ActivityReport activity(const LevySpec& spec) {
  const double mass = spec.weight.total_mass();
  return {std::isfinite(mass), mass};
}

std::complex<double> char_fn(const CharacteristicPair& pair, double t, const BorelSet& b) {
  if (t == 0.0) return {1.0, 0.0};
  const double drift = pair.drift.integral(b);
  const double scale = b.length() * pair.levy.base_rate;
  std::complex<double> exponent{0.0, t * drift};
  if (scale > 0.0 && !pair.levy.weight.is_zero()) {
    exponent += scale * pair.levy.weight.char_exponent(t);
  }
  return std::exp(exponent);
}

}  // namespace srm

#include "srm/bnp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/distributions/beta.hpp>

#include "srm/errors.hpp"
#include "srm/quadrature.hpp"
#include "srm/samplers.hpp"

namespace srm::bnp {

namespace {

double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

bool is_discrete_measure(const WeightMeasure& nu) {
  const auto discrete_or_null = [](const HalfLinePtr& h) { return !h || h->is_discrete(); };
  return discrete_or_null(nu.positive()) && discrete_or_null(nu.negative());
}

void check_factor(double value, double x, double theta) {
  if (std::isnan(value)) {
    std::ostringstream msg;
    msg << "likelihood evaluates to NaN at x=" << x << ", theta=" << theta;
    throw Error(ErrorKind::UnmatchedLikelihood, msg.str());
  }
}

// Integral of f over (-upper_neg, 0) and (0, upper_pos), with power-law
// hints at zero for each side.
double integrate_both_sides(const std::function<double(double)>& f, const HalfLinePtr& pos,
                            const HalfLinePtr& neg, double extra_exponent) {
  double total = 0.0;
  if (pos) {
    const double p = pos->zero_exponent() + extra_exponent;
    if (p <= -1.0) return quad::kInf;
    total += quad::integrate_from_zero(f, pos->support_upper(), p);
  }
  if (neg) {
    const double p = neg->zero_exponent() + extra_exponent;
    if (p <= -1.0) return quad::kInf;
    total += quad::integrate_from_zero([&](double w) { return f(-w); }, neg->support_upper(), p);
  }
  return total;
}

// Per-location observed values, 0 where a dataset has no atom there.
std::map<double, std::vector<double>> collect_values(const std::vector<Observation>& obs,
                                                     bool integer_values) {
  std::map<double, std::vector<double>> table;
  const auto m = obs.size();
  for (std::size_t j = 0; j < m; ++j) {
    std::set<double> seen;
    for (const auto& [loc, x] : obs[j].atoms) {
      if (!seen.insert(loc).second) {
        std::ostringstream msg;
        msg << "observation " << j << " has two atoms at location " << loc;
        throw Error(ErrorKind::DuplicateLocation, msg.str());
      }
      if (x == 0.0 || !std::isfinite(x)) {
        throw Error(ErrorKind::InvalidArgument, "observed atom values must be finite and nonzero");
      }
      if (integer_values && x != std::round(x)) {
        throw Error(ErrorKind::InvalidArgument, "discrete likelihood needs integer observations");
      }
      auto& row = table[loc];
      if (row.empty()) row.assign(m, 0.0);
      row[j] = x;
    }
  }
  return table;
}

void enforce(const TraitPrior& prior, const LikelihoodModel& lik, AssumptionPolicy policy) {
  if (policy == AssumptionPolicy::Skip) return;
  const auto report = check_assumptions(prior, lik);
  if (!report.all_hold()) {
    const auto name = report.first_failure();
    std::ostringstream msg;
    msg << name << " does not hold";
    if (name == "A1") msg << " (weight measure has finite mass " << report.nu_mass << ")";
    if (name == "A2" || name == "A2'") msg << " (integral is " << report.a2_value << ")";
    throw Error(ErrorKind::AssumptionViolated, msg.str());
  }
}

PosteriorAtom update_fixed(const FixedAtom& atom, const std::vector<double>& values,
                           const LikelihoodModel& lik) {
  PosteriorAtom out;
  out.location = atom.location;
  out.from_prior = true;
  out.observed = values;
  const auto likelihood = [&lik, values](double theta) {
    double product = 1.0;
    for (double x : values) {
      const double f = lik.fixed_factor(x, theta);
      check_factor(f, x, theta);
      product *= f;
    }
    return product;
  };
  if (atom.weight.is_atomic()) {
    out.atomic = true;
    const auto& law = atom.weight;
    if (law.kind() == WeightDistribution::Kind::Discrete) {
      for (std::size_t i = 0; i < law.values().size(); ++i) {
        out.support.push_back(law.values()[i]);
        out.masses.push_back(law.probs()[i] * likelihood(law.values()[i]));
      }
    } else {
      out.support.push_back(law.mean());
      out.masses.push_back(likelihood(law.mean()));
    }
    for (double w : out.masses) out.normalizer += w;
    const auto support = out.support;
    const auto masses = out.masses;
    out.unnormalized = [support, masses](double theta) {
      double total = 0.0;
      for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] == theta) total += masses[i];
      }
      return total;
    };
  } else {
    const double mean = atom.weight.mean();
    const double sd = atom.weight.sd();
    out.unnormalized = [mean, sd, likelihood](double theta) {
      return normal_pdf(theta, mean, sd) * likelihood(theta);
    };
    const double lo = mean - 50.0 * sd;
    const double hi = mean + 50.0 * sd;
    if (lo < 0.0 && hi > 0.0) {
      out.normalizer = quad::integrate(out.unnormalized, lo, 0.0) +
                       quad::integrate(out.unnormalized, 0.0, hi);
    } else {
      out.normalizer = quad::integrate(out.unnormalized, lo, hi);
    }
  }
  if (!(out.normalizer > 0.0) || !std::isfinite(out.normalizer)) {
    std::ostringstream msg;
    msg << "observations at fixed atom " << atom.location << " have zero likelihood under its prior";
    throw Error(ErrorKind::UnmatchedLikelihood, msg.str());
  }
  return out;
}

PosteriorAtom new_atom(double location, const std::vector<double>& values, const WeightMeasure& nu,
                       const LikelihoodModel& lik) {
  PosteriorAtom out;
  out.location = location;
  out.observed = values;
  const auto likelihood = [&lik, values](double theta) {
    double product = 1.0;
    for (double x : values) {
      const double f = lik.ordinary_factor(x, theta);
      check_factor(f, x, theta);
      product *= f;
    }
    return product;
  };
  if (is_discrete_measure(nu)) {
    out.atomic = true;
    for (const auto& point : nu.signed_points()) {
      out.support.push_back(point.weight);
      out.masses.push_back(point.mass * likelihood(point.weight));
      out.normalizer += out.masses.back();
    }
    const auto support = out.support;
    const auto masses = out.masses;
    out.unnormalized = [support, masses](double theta) {
      double total = 0.0;
      for (std::size_t i = 0; i < support.size(); ++i) {
        if (support[i] == theta) total += masses[i];
      }
      return total;
    };
  } else {
    out.zero_exponent = 0.0;
    for (double x : values) {
      if (x == 0.0) continue;
      out.zero_exponent += lik.value_exponent ? lik.value_exponent(x) : lik.nonzero_exponent;
    }
    out.unnormalized = [nu, likelihood](double theta) {
      if (theta == 0.0) return 0.0;
      return nu.density(theta) * likelihood(theta);
    };
    out.normalizer = integrate_both_sides(out.unnormalized, nu.positive(), nu.negative(),
                                          out.zero_exponent);
    if (nu.positive()) out.zero_exponent += nu.positive()->zero_exponent();
  }
  if (!(out.normalizer > 0.0) || !std::isfinite(out.normalizer)) {
    std::ostringstream msg;
    msg << "new atom at " << location << " has normalizer " << out.normalizer;
    throw Error(ErrorKind::UnmatchedLikelihood, msg.str());
  }
  return out;
}

PosteriorResult update(const TraitPrior& prior, const LikelihoodModel& lik,
                       const std::vector<Observation>& obs, bool integer_values) {
  const auto table = collect_values(obs, integer_values);
  PosteriorResult result;
  std::set<double> fixed_locations;
  for (const auto& atom : prior.fixed_atoms) {
    fixed_locations.insert(atom.location);
    const auto it = table.find(atom.location);
    const std::vector<double> values =
        it == table.end() ? std::vector<double>(obs.size(), 0.0) : it->second;
    result.fixed_updates.push_back(update_fixed(atom, values, lik));
  }
  for (const auto& [loc, values] : table) {
    if (fixed_locations.count(loc)) continue;
    result.new_atoms.push_back(new_atom(loc, values, prior.weight_measure, lik));
  }
  result.ordinary = {prior.weight_measure, lik, static_cast<int>(obs.size())};
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------

BaseDistribution BaseDistribution::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorKind::InvalidArgument, "uniform base needs finite lo < hi");
  }
  BaseDistribution g;
  g.family_ = "uniform";
  g.params_ = {{"lo", lo}, {"hi", hi}};
  return g;
}

BaseDistribution BaseDistribution::beta(double a, double b, double length) {
  if (!(a > 0.0) || !(b > 0.0) || !(length > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "beta base needs a, b, length > 0");
  }
  BaseDistribution g;
  g.family_ = "beta";
  g.params_ = {{"a", a}, {"b", b}, {"length", length}};
  return g;
}

double BaseDistribution::cdf(double x) const {
  if (family_ == "uniform") {
    const double lo = params_.at("lo");
    const double hi = params_.at("hi");
    return std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
  }
  const double length = params_.at("length");
  const double u = std::clamp(x / length, 0.0, 1.0);
  return boost::math::cdf(boost::math::beta_distribution<>(params_.at("a"), params_.at("b")), u);
}

double BaseDistribution::sample(RngStream& rng) const {
  if (family_ == "uniform") {
    const double lo = params_.at("lo");
    return lo + (params_.at("hi") - lo) * rng.uniform();
  }
  const boost::math::beta_distribution<> dist(params_.at("a"), params_.at("b"));
  const double u = boost::math::quantile(dist, rng.uniform());
  return std::min(u, std::nextafter(1.0, 0.0)) * params_.at("length");
}

// ---------------------------------------------------------------------------

double LikelihoodModel::zero_prob(double theta) const {
  return kind == Kind::Discrete ? pmf(0, theta) : ordinary_zero_mass(theta);
}

double LikelihoodModel::ordinary_factor(double x, double theta) const {
  if (kind == Kind::Discrete) return pmf(std::lround(x), theta);
  return x == 0.0 ? ordinary_zero_mass(theta) : ordinary_density(x, theta);
}

double LikelihoodModel::fixed_factor(double x, double theta) const {
  if (kind == Kind::Discrete) return pmf(std::lround(x), theta);
  // H_fix is continuous, so an absent value carries no information.
  return x == 0.0 ? 1.0 : fixed_density(x, theta);
}

LikelihoodModel LikelihoodModel::signed_poisson(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::InvalidArgument, "signed Poisson scale must be positive");
  }
  LikelihoodModel lik;
  lik.kind = Kind::Discrete;
  lik.family = "signed_poisson";
  lik.params = {{"scale", scale}};
  lik.pmf = [scale](long x, double theta) {
    const double mean = scale * std::abs(theta);
    if (x == 0) return std::exp(-mean);
    if (theta == 0.0 || (x > 0) != (theta > 0.0)) return 0.0;
    const double k = static_cast<double>(std::labs(x));
    return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
  };
  lik.nonzero_prob = [scale](double theta) { return -std::expm1(-scale * std::abs(theta)); };
  lik.nonzero_exponent = 1.0;
  lik.value_exponent = [](double x) { return std::abs(x); };
  return lik;
}

// ---------------------------------------------------------------------------

std::string AssumptionReport::first_failure() const {
  if (!a0) return "A0";
  if (!levy_ok) return "A00";
  if (!a1) return "A1";
  if (!a2) return continuous ? "A2'" : "A2";
  return "";
}

AssumptionReport check_assumptions(const TraitPrior& prior, const LikelihoodModel& lik) {
  AssumptionReport report;
  report.continuous = lik.kind == LikelihoodModel::Kind::Continuous;
  report.a0 = true;
  const auto& nu = prior.weight_measure;
  report.nu_mass = nu.total_mass();
  report.a1 = std::isinf(report.nu_mass);
  report.levy_value = nu.one_wedge_integral();
  report.levy_ok = std::isfinite(report.levy_value);

  // Both A2 and A2' reduce to the integral of P(x != 0 | theta) against nu.
  double value = 0.0;
  if (is_discrete_measure(nu)) {
    for (const auto& point : nu.signed_points()) value += point.mass * lik.nonzero_prob(point.weight);
  } else {
    value = integrate_both_sides(
        [&](double theta) { return nu.density(theta) * lik.nonzero_prob(theta); }, nu.positive(),
        nu.negative(), lik.nonzero_exponent);
  }
  report.a2_value = value;
  report.a2 = std::isfinite(value);
  return report;
}

// ---------------------------------------------------------------------------

double PosteriorAtom::density(double theta) const { return unnormalized(theta) / normalizer; }

std::vector<double> PosteriorAtom::grid_normalized(const std::vector<double>& grid) const {
  std::vector<double> values(grid.size());
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = unnormalized(grid[i]);
    total += values[i];
  }
  if (total > 0.0) {
    for (double& v : values) v /= total;
  }
  return values;
}

double OrdinaryPart::density(double theta) const {
  if (theta == 0.0) return 0.0;
  return base.density(theta) * std::pow(likelihood.zero_prob(theta), observations);
}

OrdinaryPart OrdinaryPart::thinned_once() const { return {base, likelihood, observations + 1}; }

WeightMeasure OrdinaryPart::measure() const {
  if (observations == 0) return base;
  const auto lik = likelihood;
  const int m = observations;
  if (is_discrete_measure(base)) {
    std::vector<DiscretePoint> points;
    for (const auto& point : base.signed_points()) {
      const double mass = point.mass * std::pow(lik.zero_prob(point.weight), m);
      if (mass > 0.0) points.push_back({point.weight, mass});
    }
    return WeightMeasure::finite_discrete(std::move(points));
  }
  const auto thin = [lik, m](const HalfLinePtr& half, double sign) -> HalfLinePtr {
    if (!half) return nullptr;
    return half_line::custom(
        [half, lik, m, sign](double w) {
          return half->density(w) * std::pow(lik.zero_prob(sign * w), m);
        },
        half->zero_exponent(), half->support_upper(), "thinned");
  };
  return WeightMeasure::density(thin(base.positive(), 1.0), thin(base.negative(), -1.0));
}

// ---------------------------------------------------------------------------

PosteriorResult posterior_update_discrete(const TraitPrior& prior, const LikelihoodModel& lik,
                                          const std::vector<Observation>& obs,
                                          AssumptionPolicy policy) {
  if (lik.kind != LikelihoodModel::Kind::Discrete) {
    throw Error(ErrorKind::InvalidArgument, "discrete update needs a discrete likelihood");
  }
  enforce(prior, lik, policy);
  return update(prior, lik, obs, true);
}

PosteriorResult posterior_update_continuous(const TraitPrior& prior, const LikelihoodModel& lik,
                                            const std::vector<Observation>& obs,
                                            AssumptionPolicy policy) {
  if (lik.kind != LikelihoodModel::Kind::Continuous) {
    throw Error(ErrorKind::InvalidArgument, "continuous update needs a continuous likelihood");
  }
  if (is_discrete_measure(prior.weight_measure) && !prior.weight_measure.is_zero()) {
    throw Error(ErrorKind::InvalidArgument, "continuous update needs a weight measure with a density");
  }
  enforce(prior, lik, policy);
  return update(prior, lik, obs, false);
}

std::pair<TraitPrior, LikelihoodModel> gaussian_example_prior(
    double alpha, double sigma, const std::vector<GaussianFixedAtom>& fixed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0, 1), got " << alpha;
    throw Error(ErrorKind::InvalidAlpha, msg.str());
  }
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");

  TraitPrior prior;
  const auto half = half_line::power(1.0, alpha - 2.0, HalfLineMeasure::kInfinity);
  prior.weight_measure = WeightMeasure::density(half, half);
  for (const auto& f : fixed) {
    prior.fixed_atoms.push_back({f.location, WeightDistribution::normal(f.mean, f.sd)});
  }

  LikelihoodModel lik;
  lik.kind = LikelihoodModel::Kind::Continuous;
  lik.family = "gaussian_example";
  lik.params = {{"alpha", alpha}, {"sigma", sigma}};
  const auto emit = [alpha](double theta) {
    const double a = std::abs(theta);
    return std::pow(a, 2.0 - alpha) * std::exp(-theta * theta);
  };
  lik.nonzero_prob = emit;
  lik.nonzero_exponent = 2.0 - alpha;
  lik.ordinary_zero_mass = [emit](double theta) { return 1.0 - emit(theta); };
  lik.fixed_density = [sigma](double x, double theta) { return normal_pdf(x, theta, sigma); };
  lik.ordinary_density = [sigma, emit](double x, double theta) {
    return emit(theta) * normal_pdf(x, theta, sigma);
  };
  return {prior, lik};
}

SignedAtomicMeasure sample_prior_draw(const TraitPrior& prior, double eps, RngStream& rng) {
  const auto base = prior.base;
  auto draw = sample_ordinary(prior.weight_measure, 1.0,
                              [base](RngStream& r) { return base.sample(r); }, eps, rng);
  std::vector<Atom> atoms = draw.measure.atoms();
  auto fixed_rng = rng.fork();
  for (const auto& f : prior.fixed_atoms) atoms.push_back({f.location, f.weight.sample(fixed_rng)});
  return SignedAtomicMeasure(std::move(atoms));
}

Kernel Kernel::constant(double c) {
  return {"constant", [c](double, double) { return c; }};
}

Kernel Kernel::gaussian(double bandwidth) {
  if (!(bandwidth > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
  return {"gaussian", [bandwidth](double x, double t) {
            const double z = (x - t) / bandwidth;
            return std::exp(-0.5 * z * z);
          }};
}

std::vector<double> eval_mean_function(const Kernel& kernel, const SignedAtomicMeasure& xi,
                                       const std::vector<double>& grid) {
  std::vector<double> out(grid.size(), 0.0);
  const auto& breaks = xi.diffuse().breaks();
  const auto& levels = xi.diffuse().levels();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    double total = 0.0;
    for (const auto& atom : xi.atoms()) total += kernel.eval(atom.location, t) * atom.weight;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i] == 0.0) continue;
      total += levels[i] *
               quad::integrate([&](double x) { return kernel.eval(x, t); }, breaks[i], breaks[i + 1]);
    }
    out[g] = total;
  }
  return out;
}

}  // namespace srm::bnp

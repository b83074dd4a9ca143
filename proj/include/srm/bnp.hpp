#pragma once

// Conjugate updates for trait priors built on completely random signed measures.
//
// The prior is Theta = sum_k theta_k delta_{psi_k}: finitely many fixed atoms
// with weight laws F_fix,k, plus an ordinary component whose atoms form a
// Poisson process with mean measure nu(dtheta) G(dpsi). Data X_1..X_m are
// atomic measures on the same locations, x_{j,k} | theta_k ~ h(. | theta_k).
// The posterior has three parts: updated fixed atoms, new fixed atoms at
// every observed location not in the prior, and an ordinary component with
// weight measure nu(dtheta) h(0 | theta)^m.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "srm/distributions.hpp"
#include "srm/levy.hpp"
#include "srm/measure.hpp"
#include "srm/rng.hpp"

namespace srm::bnp {

// Atomless location law G on [0, T).
class BaseDistribution {
 public:
  static BaseDistribution uniform(double lo, double hi);
  // Beta(a, b) rescaled to [0, length).
  static BaseDistribution beta(double a, double b, double length = 1.0);

  const std::string& family() const { return family_; }
  const std::map<std::string, double>& params() const { return params_; }
  double cdf(double x) const;
  double sample(RngStream& rng) const;

 private:
  std::string family_;
  std::map<std::string, double> params_;
};

struct FixedAtom {
  double location = 0.0;
  WeightDistribution weight = WeightDistribution::normal(0.0, 0.0);
};

struct TraitPrior {
  std::vector<FixedAtom> fixed_atoms;
  WeightMeasure weight_measure;  // nu
  BaseDistribution base = BaseDistribution::uniform(0.0, 1.0);
};

struct LikelihoodModel {
  enum class Kind { Discrete, Continuous };

  Kind kind = Kind::Discrete;
  std::string family;
  std::map<std::string, double> params;

  // Discrete: pmf h(x | theta) on the integers.
  std::function<double(long, double)> pmf;
  // Continuous: density h_fix for fixed atoms, density h_ord on R \ {0} for
  // ordinary atoms, and the point mass H_ord({0} | theta).
  std::function<double(double, double)> fixed_density;
  std::function<double(double, double)> ordinary_density;
  std::function<double(double)> ordinary_zero_mass;
  // 1 - P(x = 0 | theta), computed without cancellation, and r with
  // 1 - P(x = 0 | theta) ~ |theta|^r as theta -> 0.
  std::function<double(double)> nonzero_prob;
  double nonzero_exponent = 0.0;
  // Exponent of ordinary_factor(x, theta) ~ |theta|^r(x) as theta -> 0 for
  // x != 0; nonzero_exponent is used when unset.
  std::function<double(double)> value_exponent;

  // P(x = 0 | theta) for an ordinary atom.
  double zero_prob(double theta) const;
  // Factor contributed by observing x at an ordinary (new) atom.
  double ordinary_factor(double x, double theta) const;
  // Factor contributed by observing x at a prior fixed atom.
  double fixed_factor(double x, double theta) const;

  // x = sign(theta) * Poisson(scale * |theta|).
  static LikelihoodModel signed_poisson(double scale = 1.0);
};

struct Observation {
  std::vector<std::pair<double, double>> atoms;  // (location, value != 0)
};

struct AssumptionReport {
  bool a0 = true;        // finitely many fixed atoms
  bool a1 = false;       // nu(R \ {0}) = inf
  bool a2 = false;       // A2 (discrete) or A2' (continuous)
  bool continuous = false;
  bool levy_ok = false;  // integral of min(1, |theta|) nu(dtheta) < inf
  double nu_mass = 0.0;
  double a2_value = 0.0;  // integral of (1 - P(x=0 | theta)) nu(dtheta)
  double levy_value = 0.0;

  bool all_hold() const { return a0 && a1 && a2 && levy_ok; }
  // Name of the first failing assumption, empty when all hold.
  std::string first_failure() const;
};

AssumptionReport check_assumptions(const TraitPrior& prior, const LikelihoodModel& lik);

// Unnormalized law of one posterior fixed-atom weight. Either atomic (support
// points with unnormalized masses) or a density on R \ {0}.
struct PosteriorAtom {
  double location = 0.0;
  bool from_prior = false;
  std::vector<double> observed;  // x_{j} for j = 1..m, 0 where absent
  bool atomic = false;
  std::vector<double> support;
  std::vector<double> masses;
  std::function<double(double)> unnormalized;
  double zero_exponent = 0.0;  // density ~ |theta|^p near 0
  double normalizer = 0.0;

  // Normalized density (or probability for atomic laws).
  double density(double theta) const;
  // Unnormalized values on a grid divided by their grid sum.
  std::vector<double> grid_normalized(const std::vector<double>& grid) const;
};

// nu(dtheta) * P(x = 0 | theta)^m, kept symbolic in (base, likelihood, m).
struct OrdinaryPart {
  WeightMeasure base;
  LikelihoodModel likelihood;
  int observations = 0;

  double density(double theta) const;
  // One more all-zero observation.
  OrdinaryPart thinned_once() const;
  // Materialized weight measure: exact for discrete nu, a custom density otherwise.
  WeightMeasure measure() const;
};

struct PosteriorResult {
  std::vector<PosteriorAtom> fixed_updates;
  std::vector<PosteriorAtom> new_atoms;
  OrdinaryPart ordinary;
};

enum class AssumptionPolicy { Enforce, Skip };

PosteriorResult posterior_update_discrete(const TraitPrior& prior, const LikelihoodModel& lik,
                                          const std::vector<Observation>& obs,
                                          AssumptionPolicy policy = AssumptionPolicy::Enforce);

PosteriorResult posterior_update_continuous(const TraitPrior& prior, const LikelihoodModel& lik,
                                            const std::vector<Observation>& obs,
                                            AssumptionPolicy policy = AssumptionPolicy::Enforce);

struct GaussianFixedAtom {
  double location = 0.0;
  double mean = 0.0;
  double sd = 1.0;
};

// nu(dtheta) = |theta|^{alpha-2} dtheta, H_ord({0}|theta) = 1 - |theta|^{2-alpha} e^{-theta^2},
// h_ord(x|theta) = |theta|^{2-alpha} e^{-theta^2} N(x; theta, sigma^2),
// h_fix(x|theta) = N(x; theta, sigma^2), normal fixed-atom weights.
std::pair<TraitPrior, LikelihoodModel> gaussian_example_prior(
    double alpha, double sigma, const std::vector<GaussianFixedAtom>& fixed);

// Fixed atoms drawn from their laws, ordinary atoms from the Poisson process
// with mean measure nu x G.
SignedAtomicMeasure sample_prior_draw(const TraitPrior& prior, double eps, RngStream& rng);

struct Kernel {
  std::string name;
  std::function<double(double, double)> eval;  // K(x, t)

  static Kernel constant(double c);
  static Kernel gaussian(double bandwidth);
};

// f(t) = integral K(x, t) xi(dx) for each grid point.
std::vector<double> eval_mean_function(const Kernel& kernel, const SignedAtomicMeasure& xi,
                                       const std::vector<double>& grid);

}  // namespace srm::bnp

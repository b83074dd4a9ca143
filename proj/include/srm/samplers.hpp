#pragma once

// Random generation of Poisson point processes, CRMs, CRSMs, Skellam point
// processes and finite-partition Gaussian random measures.
//
// Every sampler is a pure function of its inputs and the RngStream it is
// handed. Independent components draw from distinct split() children so that
// adding or removing one component never shifts the randomness of another.

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "srm/distributions.hpp"
#include "srm/levy.hpp"
#include "srm/measure.hpp"
#include "srm/rng.hpp"

namespace srm {

inline constexpr double kDefaultEps = 1e-6;
// Dropped small-jump mass may not exceed this fraction of the expected total.
inline constexpr double kMaxRemainderFraction = 0.1;

// Homogeneous Poisson process on [0, region_len): Poisson(rate * region_len)
// i.i.d. uniform locations.
std::vector<double> sample_poisson_pp(double rate, double region_len, RngStream& rng);

struct JumpDraw {
  std::vector<double> sizes;    // in decreasing order
  double remainder_bound = 0.0;  // intensity * integral_0^eps x rho(dx); 0 for finite activity
};

// Jumps of a Poisson process on (0, inf) with mean measure intensity * half,
// generated largest first through the inverse tail. For infinite activity
// only jumps >= eps are produced. Throws TruncationTooCoarse when the dropped
// mean mass exceeds kMaxRemainderFraction of the expected total.
JumpDraw sample_jumps(const HalfLineMeasure& half, double intensity, double eps, RngStream& rng);

using LocationSampler = std::function<double(RngStream&)>;

struct MeasureDraw {
  SignedAtomicMeasure measure;
  double remainder_bound = 0.0;
};

// Atoms of a Poisson process on S x (R \ {0}) with mean measure
// intensity * G(ds) rho(dw), where locations are drawn from G. Positive and
// negative halves use independent child streams.
MeasureDraw sample_ordinary(const WeightMeasure& weight, double intensity,
                            const LocationSampler& location, double eps, RngStream& rng);

// Nonnegative CRM on [0, T) with Levy measure base_rate * ds * rho(dw).
// Throws SupportViolation when rho charges negative jumps.
MeasureDraw sample_crm(const LevySpec& spec, double eps, RngStream& rng);

struct FixedAtomSpec {
  double location = 0.0;
  WeightDistribution weight = WeightDistribution::normal(0.0, 0.0);
};

// Fixed atoms with independent weights + drift density + ordinary jumps.
MeasureDraw sample_crsm(const CharacteristicPair& pair, const std::vector<FixedAtomSpec>& fixed,
                        double eps, RngStream& rng);

// Difference of independent unit-mark Poisson processes on [0, T).
SignedAtomicMeasure sample_skellam_pp(double mu1_rate, double mu2_rate, RngStream& rng,
                                      double domain_length = 1.0);

// P(N1 - N2 = k) for independent N1 ~ Poisson(mu1), N2 ~ Poisson(mu2), by
// truncated convolution.
double skellam_pmf(long k, double mu1, double mu2);

// ---------------------------------------------------------------------------
// Gaussian random measure on a finite partition.

struct GrmKernelSpec {
  std::vector<Interval> partition;
  Eigen::MatrixXd cov;               // nu0(A_i, A_j)
  std::vector<double> mean_measure;  // mu(A_i) = E|xi(A_i)|
  double bound = std::numeric_limits<double>::infinity();  // k in sum_i sqrt(cov_ii) <= k
};

struct GrmKernelReport {
  bool pd = false;
  double sqrt_sum = 0.0;
  double min_eigenvalue = 0.0;
  bool within_bound = false;
};

GrmKernelReport check_grm_kernel(const GrmKernelSpec& spec);

// Uniform partition of [0, length) into n cells.
std::vector<Interval> uniform_partition(double length, std::size_t n);
// cov = m m^T with m_i = scale * |A_i|: xi(A) = Z * scale * |A| for one normal Z.
GrmKernelSpec rank_one_kernel(const std::vector<Interval>& partition, double scale = 1.0);
// cov = diag(variance_rate * |A_i|): Gaussian white noise.
GrmKernelSpec white_noise_kernel(const std::vector<Interval>& partition, double variance_rate = 1.0);

// Factorizes the kernel once (pivoted LDL^T); each call draws one vector of
// cell values with mean 0 and covariance cov. Throws NotPSD when a pivot is
// below -1e-12 times the largest pivot.
class GrmSampler {
 public:
  explicit GrmSampler(const GrmKernelSpec& spec);
  std::vector<double> operator()(RngStream& rng) const;
  const Eigen::MatrixXd& factor() const { return factor_; }

 private:
  Eigen::MatrixXd factor_;
};

std::vector<double> sample_grm(const GrmKernelSpec& spec, RngStream& rng);

}  // namespace srm

#include "srm/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "srm/errors.hpp"

namespace srm {

namespace {

double log_poisson_pmf(long n, double mu) {
  return static_cast<double>(n) * std::log(mu) - mu - std::lgamma(static_cast<double>(n) + 1.0);
}

double poisson_pmf(long n, double mu) {
  if (n < 0) return 0.0;
  if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(log_poisson_pmf(n, mu));
}

LocationSampler uniform_locations(double length) {
  return [length](RngStream& rng) { return length * rng.uniform(); };
}

}  // namespace

std::vector<double> sample_poisson_pp(double rate, double region_len, RngStream& rng) {
  if (!(rate >= 0.0) || !(region_len >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Poisson process rate and region length must be >= 0");
  }
  const auto count = rng.poisson(rate * region_len);
  std::vector<double> locations(count);
  for (auto& x : locations) x = region_len * rng.uniform();
  return locations;
}

JumpDraw sample_jumps(const HalfLineMeasure& half, double intensity, double eps, RngStream& rng) {
  JumpDraw draw;
  if (!(intensity > 0.0)) return draw;
  const double mass = half.total_mass();
  double threshold = mass;
  if (!std::isfinite(mass)) {
    if (!(eps > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "infinite activity sampling needs eps > 0");
    }
    threshold = half.tail(eps);
    draw.remainder_bound = intensity * half.moment_between(0.0, eps);
    const double expected = intensity * half.first_moment();
    if (draw.remainder_bound > kMaxRemainderFraction * expected) {
      std::ostringstream msg;
      msg << "dropped jumps below eps=" << eps << " carry mean mass " << draw.remainder_bound
          << ", more than " << kMaxRemainderFraction << " of the expected total " << expected;
      throw Error(ErrorKind::TruncationTooCoarse, msg.str());
    }
  }
  if (!std::isfinite(threshold)) {
    throw Error(ErrorKind::InvalidArgument, "jump measure has infinite tail mass above eps");
  }
  // Arrival times of a unit-rate Poisson process, rescaled to tail-mass
  // coordinates; each maps to one jump through the inverse tail.
  double arrival = 0.0;
  while (true) {
    arrival += rng.exponential();
    const double y = arrival / intensity;
    if (y > threshold) break;
    const double size = half.inverse_tail(y);
    if (size > 0.0) draw.sizes.push_back(size);
  }
  return draw;
}

MeasureDraw sample_ordinary(const WeightMeasure& weight, double intensity,
                            const LocationSampler& location, double eps, RngStream& rng) {
  MeasureDraw out;
  std::vector<Atom> atoms;
  const auto base = rng.fork();
  const auto add_half = [&](const HalfLinePtr& half, double sign, std::uint64_t stream) {
    if (!half) return;
    auto sub = base.split(stream);
    auto jumps = sample_jumps(*half, intensity, eps, sub);
    out.remainder_bound += jumps.remainder_bound;
    for (double size : jumps.sizes) atoms.push_back({location(sub), sign * size});
  };
  add_half(weight.positive(), 1.0, 1);
  add_half(weight.negative(), -1.0, 2);
  out.measure = SignedAtomicMeasure(std::move(atoms));
  return out;
}

MeasureDraw sample_crm(const LevySpec& spec, double eps, RngStream& rng) {
  if (spec.weight.has_negative_support()) {
    throw Error(ErrorKind::SupportViolation, "CRM weight measure must live on (0, inf)");
  }
  return sample_ordinary(spec.weight, spec.base_rate * spec.domain_length,
                         uniform_locations(spec.domain_length), eps, rng);
}

MeasureDraw sample_crsm(const CharacteristicPair& pair, const std::vector<FixedAtomSpec>& fixed,
                        double eps, RngStream& rng) {
  const auto integrability = check_levy_integrability(pair.levy);
  if (!integrability.ok) {
    throw Error(ErrorKind::SpecValidation,
                "Levy measure fails the integrability condition (integral of min(1,|w|) is infinite)");
  }
  auto ordinary = sample_ordinary(pair.levy.weight, pair.levy.base_rate * pair.levy.domain_length,
                                  uniform_locations(pair.levy.domain_length), eps, rng);
  std::vector<Atom> atoms = ordinary.measure.atoms();
  auto fixed_rng = rng.fork();
  for (const auto& f : fixed) atoms.push_back({f.location, f.weight.sample(fixed_rng)});
  return {SignedAtomicMeasure(std::move(atoms), pair.drift), ordinary.remainder_bound};
}

SignedAtomicMeasure sample_skellam_pp(double mu1_rate, double mu2_rate, RngStream& rng,
                                      double domain_length) {
  if (!(mu1_rate >= 0.0) || !(mu2_rate >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Skellam rates must be >= 0");
  }
  const auto base = rng.fork();
  auto up_rng = base.split(1);
  auto down_rng = base.split(2);
  const auto up = sample_poisson_pp(mu1_rate, domain_length, up_rng);
  const auto down = sample_poisson_pp(mu2_rate, domain_length, down_rng);
  std::vector<Atom> atoms;
  atoms.reserve(up.size() + down.size());
  for (double x : up) atoms.push_back({x, 1.0});
  for (double x : down) atoms.push_back({x, -1.0});
  return SignedAtomicMeasure(std::move(atoms));
}

double skellam_pmf(long k, double mu1, double mu2) {
  if (!(mu1 >= 0.0) || !(mu2 >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Skellam means must be >= 0");
  }
  if (mu2 == 0.0) return poisson_pmf(k, mu1);
  if (mu1 == 0.0) return poisson_pmf(-k, mu2);
  // Summand in n peaks where (n + k + 1)(n + 1) = mu1 mu2.
  const double kd = static_cast<double>(k);
  const double peak = 0.5 * (-(kd + 2.0) + std::sqrt(kd * kd + 4.0 * mu1 * mu2));
  const long start = std::max(0L, -k);
  double total = 0.0;
  for (long n = start; n < start + 100000; ++n) {
    const double term = std::exp(log_poisson_pmf(n + k, mu1) + log_poisson_pmf(n, mu2));
    total += term;
    if (static_cast<double>(n) > peak && term <= 1e-12 * total) break;
  }
  return total;
}

// ---------------------------------------------------------------------------

GrmKernelReport check_grm_kernel(const GrmKernelSpec& spec) {
  const auto n = spec.cov.rows();
  if (spec.cov.cols() != n || static_cast<std::size_t>(n) != spec.partition.size()) {
    throw Error(ErrorKind::InvalidArgument, "kernel matrix must be square with one row per cell");
  }
  if (!spec.mean_measure.empty() && spec.mean_measure.size() != spec.partition.size()) {
    throw Error(ErrorKind::InvalidArgument, "mean measure needs one value per cell");
  }
  GrmKernelReport report;
  for (Eigen::Index i = 0; i < n; ++i) report.sqrt_sum += std::sqrt(std::max(spec.cov(i, i), 0.0));
  report.within_bound = report.sqrt_sum <= spec.bound;
  if (n == 0) {
    report.pd = true;
    return report;
  }
  const bool symmetric = spec.cov.isApprox(spec.cov.transpose(), 1e-12) ||
                         (spec.cov - spec.cov.transpose()).cwiseAbs().maxCoeff() == 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(spec.cov, Eigen::EigenvaluesOnly);
  const auto& eigenvalues = solver.eigenvalues();
  report.min_eigenvalue = eigenvalues.minCoeff();
  const double scale = std::max(eigenvalues.cwiseAbs().maxCoeff(), 0.0);
  report.pd = symmetric && report.min_eigenvalue >= -1e-10 * scale;
  return report;
}

std::vector<Interval> uniform_partition(double length, std::size_t n) {
  std::vector<Interval> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = length * static_cast<double>(i) / static_cast<double>(n);
    const double hi = length * static_cast<double>(i + 1) / static_cast<double>(n);
    cells.emplace_back(lo, hi);
  }
  return cells;
}

GrmKernelSpec rank_one_kernel(const std::vector<Interval>& partition, double scale) {
  const auto n = static_cast<Eigen::Index>(partition.size());
  Eigen::VectorXd m(n);
  for (Eigen::Index i = 0; i < n; ++i) m(i) = scale * partition[static_cast<std::size_t>(i)].length();
  GrmKernelSpec spec;
  spec.partition = partition;
  spec.cov = m * m.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    spec.mean_measure.push_back(std::sqrt(2.0 / std::numbers::pi) * std::abs(m(i)));
  }
  return spec;
}

GrmKernelSpec white_noise_kernel(const std::vector<Interval>& partition, double variance_rate) {
  const auto n = static_cast<Eigen::Index>(partition.size());
  GrmKernelSpec spec;
  spec.partition = partition;
  spec.cov = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    spec.cov(i, i) = variance_rate * partition[static_cast<std::size_t>(i)].length();
    spec.mean_measure.push_back(std::sqrt(2.0 / std::numbers::pi * spec.cov(i, i)));
  }
  return spec;
}

GrmSampler::GrmSampler(const GrmKernelSpec& spec) {
  const auto n = spec.cov.rows();
  if (spec.cov.cols() != n) throw Error(ErrorKind::InvalidArgument, "kernel matrix must be square");
  if (n == 0) return;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(spec.cov);
  Eigen::VectorXd pivots = ldlt.vectorD();
  const double largest = std::max(pivots.cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(pivots(i)) || pivots(i) < -1e-12 * std::max(largest, 1.0)) {
      throw Error(ErrorKind::NotPSD, "kernel matrix is not positive semidefinite");
    }
    pivots(i) = std::sqrt(std::max(pivots(i), 0.0));
  }
  Eigen::MatrixXd lower = ldlt.matrixL();
  Eigen::MatrixXd scaled = lower * pivots.asDiagonal();
  factor_ = ldlt.transpositionsP().transpose() * scaled;
}

std::vector<double> GrmSampler::operator()(RngStream& rng) const {
  const auto n = factor_.rows();
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  const Eigen::VectorXd x = factor_ * z;
  return {x.data(), x.data() + n};
}

std::vector<double> sample_grm(const GrmKernelSpec& spec, RngStream& rng) {
  return GrmSampler(spec)(rng);
}

}  // namespace srm

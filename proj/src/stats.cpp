#include "srm/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "srm/errors.hpp"

namespace srm::stats {

TestResult chi_square_gof(std::span<const long> draws, const std::function<double(long)>& pmf,
                          double min_expected) {
  if (draws.empty()) throw Error(ErrorKind::InvalidArgument, "chi-square test needs draws");
  std::map<long, long> observed;
  for (long d : draws) ++observed[d];
  const double n = static_cast<double>(draws.size());

  // Grow the central range outward from the mode while bins stay well filled.
  long mode = observed.begin()->first;
  double best = -1.0;
  for (long k = observed.begin()->first; k <= observed.rbegin()->first; ++k) {
    const double p = pmf(k);
    if (p > best) {
      best = p;
      mode = k;
    }
  }
  long lo = mode;
  long hi = mode;
  while (n * pmf(lo - 1) >= min_expected) --lo;
  while (n * pmf(hi + 1) >= min_expected) ++hi;

  double central_prob = 0.0;
  double statistic = 0.0;
  long central_count = 0;
  int bins = 0;
  for (long k = lo; k <= hi; ++k) {
    const double expected = n * pmf(k);
    const auto it = observed.find(k);
    const double obs = it == observed.end() ? 0.0 : static_cast<double>(it->second);
    statistic += (obs - expected) * (obs - expected) / expected;
    central_prob += pmf(k);
    central_count += static_cast<long>(obs);
    ++bins;
  }
  // Tails: pooled left of lo and right of hi. The pmf mass there is split by
  // summing the left tail explicitly.
  double left_prob = 0.0;
  for (long k = lo - 1;; --k) {
    const double p = pmf(k);
    left_prob += p;
    if (p < 1e-16 * std::max(left_prob, 1e-300) || p == 0.0 || k < lo - 100000) break;
  }
  const double right_prob = std::max(0.0, 1.0 - central_prob - left_prob);
  long left_count = 0;
  for (const auto& [k, c] : observed) {
    if (k < lo) left_count += c;
  }
  const long right_count = static_cast<long>(draws.size()) - central_count - left_count;
  for (const auto& [prob, count] :
       {std::pair{left_prob, left_count}, std::pair{right_prob, right_count}}) {
    const double expected = n * prob;
    if (expected > 0.0) {
      statistic += (static_cast<double>(count) - expected) * (static_cast<double>(count) - expected) /
                   expected;
      ++bins;
    } else if (count > 0) {
      return {std::numeric_limits<double>::infinity(), 0.0, bins};
    }
  }
  TestResult result;
  result.statistic = statistic;
  result.dof = std::max(bins - 1, 1);
  boost::math::chi_squared dist(result.dof);
  result.p_value = boost::math::cdf(boost::math::complement(dist, statistic));
  return result;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double total = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    total += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw Error(ErrorKind::InvalidArgument, "KS test needs a sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d), 0};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::InvalidArgument, "KS test needs two samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Advance past every copy of the smaller value so ties never open a gap.
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d), 0};
}

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double total = 0.0;
  for (double v : x) total += v;
  return total / static_cast<double>(x.size());
}

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "covariance needs two samples of equal size >= 2");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += (x[i] - mx) * (y[i] - my);
  return total / static_cast<double>(x.size() - 1);
}

double variance(std::span<const double> x) { return covariance(x, x); }

double correlation(std::span<const double> x, std::span<const double> y) {
  const double sx = variance(x);
  const double sy = variance(y);
  if (sx <= 0.0 || sy <= 0.0) return 0.0;
  return covariance(x, y) / std::sqrt(sx * sy);
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  const double vx = variance(x);
  if (vx <= 0.0) throw Error(ErrorKind::InvalidArgument, "slope needs distinct x values");
  return covariance(x, y) / vx;
}

}  // namespace srm::stats

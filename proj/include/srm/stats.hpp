#pragma once

// Goodness-of-fit and summary statistics used by the Monte Carlo checks and
// the CLI analyzer.

#include <functional>
#include <map>
#include <span>
#include <vector>

namespace srm::stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
  int dof = 0;
};

// Pearson chi-square test of integer-valued draws against pmf. Outcomes are
// binned one per integer over the central range where the expected count is
// at least min_expected; everything beyond is pooled into two tail bins.
TestResult chi_square_gof(std::span<const long> draws, const std::function<double(long)>& pmf,
                          double min_expected = 5.0);

// Kolmogorov distribution survival function Q(lambda) = P(K > lambda).
double kolmogorov_survival(double lambda);

// One-sample Kolmogorov-Smirnov test against a continuous cdf (asymptotic p).
TestResult ks_one_sample(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov test (asymptotic p with the effective sample size).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double covariance(std::span<const double> x, std::span<const double> y);
double correlation(std::span<const double> x, std::span<const double> y);

// Least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace srm::stats

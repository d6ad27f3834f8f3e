#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace zeroone {

/// Pairwise (cascade) summation with a fixed reduction tree, so the result
/// does not depend on how the inputs were produced.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);
/// Unbiased sample variance.
double variance(std::span<const double> values);
double covariance(std::span<const double> x, std::span<const double> y);

/// Standard error of the sample covariance: sd of the centred products over sqrt(n).
double covariance_stderr(std::span<const double> x, std::span<const double> y);

/// Standard error of the sample variance from the fourth central moment,
/// sqrt((m4 - s^4) / n); no distributional assumption.
double variance_stderr(std::span<const double> values);

/// Standard error of the sample variance assuming a Gaussian population.
double variance_stderr_gaussian(double var, std::size_t n);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

/// Kolmogorov limiting survival function Q(l) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 l^2).
double kolmogorov_q(double lambda);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double dof = 0.0;  // chi-square only
};

/// One-sample KS against a continuous CDF; p-value with Stephens' small-n correction.
TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Two-sample KS; p-value with the effective sample size n m / (n + m).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Chi-square goodness of fit of integer counts against Poisson(mean). Tail
/// cells are pooled so every expected count is at least `min_expected`.
TestResult chi_square_poisson(std::span<const std::uint64_t> counts, double mean, double min_expected = 5.0);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Runs fn(i) for i in [0, n) on up to `workers` threads (0 = hardware
/// concurrency). Callers write into per-index slots, so results do not depend
/// on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned workers = 0);

}  // namespace zeroone

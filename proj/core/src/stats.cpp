#include "zeroone/stats.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "zeroone/errors.hpp"

namespace zeroone {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double variance(std::span<const double> values) {
  return covariance(values, values);
}

double covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "covariance of unequal-length samples");
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  return pairwise_sum(prod) / static_cast<double>(n - 1);
}

double covariance_stderr(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 3) return 0.0;
  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (x[i] - mx) * (y[i] - my);
  return std::sqrt(variance(prod) / static_cast<double>(n));
}

double variance_stderr(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double m = mean(values);
  std::vector<double> sq(n);
  std::vector<double> quad(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = values[i] - m;
    sq[i] = c * c;
    quad[i] = sq[i] * sq[i];
  }
  const double m2 = pairwise_sum(sq) / static_cast<double>(n);
  const double m4 = pairwise_sum(quad) / static_cast<double>(n);
  return std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n));
}

double variance_stderr_gaussian(double var, std::size_t n) {
  if (n < 2) return 0.0;
  return var * std::sqrt(2.0 / static_cast<double>(n - 1));
}

double normal_cdf(double x, double mean, double sd) {
  return 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "KS test on an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d), 0.0};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "KS test on an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d), 0.0};
}

double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

TestResult chi_square_poisson(std::span<const std::uint64_t> counts, double mean, double min_expected) {
  if (counts.empty()) throw Error(ErrorCode::InvalidArgument, "chi-square test on an empty sample");
  if (!(mean > 0.0)) throw Error(ErrorCode::InvalidArgument, "Poisson mean must be positive");
  const double n = static_cast<double>(counts.size());
  const std::uint64_t kmax = *std::max_element(counts.begin(), counts.end());

  std::vector<double> observed(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (auto c : counts) observed[static_cast<std::size_t>(c)] += 1.0;

  // pmf by recurrence; the last cell absorbs the upper tail.
  std::vector<double> expected(observed.size(), 0.0);
  double p = std::exp(-mean);
  double cdf = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (k > 0) p *= mean / static_cast<double>(k);
    expected[k] = n * p;
    cdf += p;
  }
  expected.back() += n * std::max(0.0, 1.0 - cdf);

  // Pool cells left to right until each has enough expected mass, then fold
  // an undersized remainder into the previous cell.
  std::vector<double> obs_cells;
  std::vector<double> exp_cells;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    o_acc += observed[k];
    e_acc += expected[k];
    if (e_acc >= min_expected) {
      obs_cells.push_back(o_acc);
      exp_cells.push_back(e_acc);
      o_acc = 0.0;
      e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_cells.empty()) {
      obs_cells.push_back(o_acc);
      exp_cells.push_back(e_acc);
    } else {
      obs_cells.back() += o_acc;
      exp_cells.back() += e_acc;
    }
  }
  double stat = 0.0;
  for (std::size_t c = 0; c < obs_cells.size(); ++c) {
    const double diff = obs_cells[c] - exp_cells[c];
    stat += diff * diff / exp_cells[c];
  }
  const double dof = static_cast<double>(obs_cells.size()) - 1.0;
  const double p_value = dof > 0.0 ? gamma_q(dof / 2.0, stat / 2.0) : 1.0;
  return {stat, p_value, dof};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned workers) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

}  // namespace zeroone

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "error_code.hpp"
#include "zeroone/levy_noise.hpp"
#include "zeroone/serialization.hpp"
#include "zeroone/stats.hpp"

using namespace zeroone;
using zeroone::testing::code_of;

namespace {

Region square(double x0, double x1, double y0, double y1) { return Region::from_box({{x0, x1}, {y0, y1}}); }

Region side(double area) { return square(0.0, std::sqrt(area), 0.0, std::sqrt(area)); }

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

std::vector<double> column(const NoiseModel& model, std::size_t index, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t r = 0; r < n; ++r) out[r] = model.region_values(r)[index];
  return out;
}

std::vector<std::uint64_t> counts(const std::vector<double>& v) {
  std::vector<std::uint64_t> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(static_cast<std::uint64_t>(std::llround(x)));
  return out;
}

// E g(Z) for Z ~ Normal(0, var) by the trapezoid rule on +-12 sd.
double normal_expectation(const std::function<double(double)>& g, double var) {
  const double sd = std::sqrt(var);
  const int n = 20000;
  const double h = 24.0 / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double z = -12.0 + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * g(sd * z) * std::exp(-0.5 * z * z);
  }
  return acc * h / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST(Noise, DeterministicIsExact) {
  const auto r = realize(NoiseSpec::deterministic(1.0), {square(0, 1, 0, 1)});
  EXPECT_EQ(r.value(0), 1.0);
  const auto r2 = realize(NoiseSpec::deterministic(2.5), {side(4.0), square(0, 1, 0, 1)});
  EXPECT_NEAR(r2.value(0), 10.0, 1e-12);
  EXPECT_NEAR(r2.value(1), 2.5, 1e-12);
}

TEST(Noise, AdditivityIsExactForEveryKind) {
  const Region a = square(0, 1, 0, 1);
  const Region b = square(1, 2, 0, 1);
  const Region c = square(3, 4, 0, 0.5);
  const Region ab({a.pieces()[0], b.pieces()[0]}, true);
  const Region abc({a.pieces()[0], b.pieces()[0], c.pieces()[0]}, true);
  for (const auto& spec : {NoiseSpec::gaussian(), NoiseSpec::poisson(3.0), NoiseSpec::deterministic(0.7)}) {
    const NoiseModel model(spec, {a, b, c, ab, abc});
    for (std::uint64_t rep = 0; rep < 200; ++rep) {
      const auto v = model.region_values(rep);
      EXPECT_EQ(v[3], v[0] + v[1]) << to_string(spec.kind);
      // Same atom values, possibly summed in another order.
      EXPECT_NEAR(v[4], v[0] + v[1] + v[2], 4e-16 * (std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2])))
          << to_string(spec.kind);
    }
  }
}

TEST(Noise, GaussianMarginalsKs) {
  for (double area : {0.25, 1.0, 4.0}) {
    const NoiseModel model(NoiseSpec::gaussian(), {side(area)}, {{}, 31, std::nullopt});
    const auto v = column(model, 0, 10000);
    const double sd = std::sqrt(area);
    EXPECT_GT(ks_one_sample(v, [sd](double x) { return normal_cdf(x, 0.0, sd); }).p_value, 0.01) << area;
  }
}

TEST(Noise, PoissonMarginalsChiSquare) {
  for (double intensity : {1.0, 3.0}) {
    for (double area : {0.25, 1.0, 4.0}) {
      const NoiseModel model(NoiseSpec::poisson(intensity), {side(area)}, {{}, 32, std::nullopt});
      const auto v = counts(column(model, 0, 10000));
      EXPECT_GT(chi_square_poisson(v, intensity * area).p_value, 0.01) << intensity << " " << area;
    }
  }
}

TEST(Noise, PoissonPointsAreUniform) {
  const NoiseModel model(NoiseSpec::poisson(5.0), {square(0, 2, 0, 1)});
  std::vector<double> xs;
  for (std::uint64_t r = 0; r < 400; ++r) {
    for (const auto& p : model.realize(r).points) xs.push_back(p(0));
  }
  EXPECT_GT(ks_one_sample(xs, [](double x) { return std::clamp(x / 2.0, 0.0, 1.0); }).p_value, 0.01);
}

TEST(Noise, GaussianCovarianceMatchesOverlap) {
  const std::vector<Region> family{square(0, 1, 0, 1), square(0.5, 1.5, 0, 1), transform(rotation2(0.6), square(0, 1, 0, 1))};
  const NoiseModel model(NoiseSpec::gaussian(), family, {{400000, 5, 0}, 33, std::nullopt});
  const std::size_t n = 10000;
  const auto c0 = column(model, 0, n);
  const auto c1 = column(model, 1, n);
  const auto c2 = column(model, 2, n);
  const auto ov01 = intersection_volume(family[0], family[1], IntersectionMethod::AxisExact);
  EXPECT_NEAR(covariance(c0, c1), ov01.value, 3 * covariance_stderr(c0, c1));
  const auto ov02 = intersection_volume(family[0], family[2], IntersectionMethod::MonteCarlo, {400000, 6, 0});
  EXPECT_NEAR(covariance(c0, c2), ov02.value, 3 * std::hypot(covariance_stderr(c0, c2), ov02.std_err));
}

TEST(Noise, SemigroupCharacteristicFunction) {
  for (const auto& spec : {NoiseSpec::gaussian(), NoiseSpec::poisson(2.0), NoiseSpec::deterministic(1.5)}) {
    for (double u : {-2.0, -0.3, 0.7, 3.0}) {
      EXPECT_NEAR(std::abs(spec.characteristic(u, 0.0) - Complex(1.0)), 0.0, 1e-15);
      for (double s : {0.25, 1.0}) {
        for (double t : {0.5, 4.0}) {
          const Complex lhs = spec.characteristic(u, s) * spec.characteristic(u, t);
          EXPECT_NEAR(std::abs(lhs - spec.characteristic(u, s + t)), 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(Noise, SemigroupBySampling) {
  const double s = 0.7;
  const double t = 1.8;
  CounterRng rng(40, {0});
  std::vector<double> sum(10000), direct(10000);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum[i] = NoiseSpec::gaussian().sample(rng, s) + NoiseSpec::gaussian().sample(rng, t);
    direct[i] = NoiseSpec::gaussian().sample(rng, s + t);
  }
  EXPECT_GT(ks_two_sample(sum, direct).p_value, 0.01);
  std::vector<std::uint64_t> psum(10000);
  for (auto& x : psum) {
    x = static_cast<std::uint64_t>(NoiseSpec::poisson(3.0).sample(rng, s) + NoiseSpec::poisson(3.0).sample(rng, t));
  }
  EXPECT_GT(chi_square_poisson(psum, 3.0 * (s + t)).p_value, 0.01);
  EXPECT_EQ(NoiseSpec::deterministic(2.0).sample(rng, s) + NoiseSpec::deterministic(2.0).sample(rng, t),
            NoiseSpec::deterministic(2.0).sample(rng, s + t));
}

TEST(Transform, IdentityLeavesPoissonUnchanged) {
  const auto r = realize(NoiseSpec::poisson(4.0), {square(0, 1, 0, 1), square(0.5, 2, 0, 1)}, {{}, 7, std::nullopt}, 3);
  const auto same = apply_transform(Matrix::Identity(2, 2), r);
  EXPECT_EQ(same.region_values(), r.region_values());
  ASSERT_EQ(same.points.size(), r.points.size());
  for (std::size_t i = 0; i < r.points.size(); ++i) EXPECT_EQ(same.points[i], r.points[i]);
}

TEST(Transform, DiagonalMovesCountsExactly) {
  const Matrix g = diag2(2.0, 0.5);
  const Region b = square(0, 1, 0, 1);
  const Region gb = transform(g, b);
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    const auto r = realize(NoiseSpec::poisson(3.0), {b, gb}, {{}, 8, std::nullopt}, rep);
    const auto moved = apply_transform(g, r);
    EXPECT_EQ(moved.value(1), r.value(0));
  }
}

TEST(Transform, PoissonLawIsInvariant) {
  const Matrix g = shear2();
  const Region b = square(0, 1, 0, 1);
  const Region pre = transform(g.inverse(), b);
  RealizeOptions opts;
  opts.seed = 9;
  opts.window = Box{{-2, 2}, {-1, 2}};
  const NoiseModel model(NoiseSpec::poisson(3.0), {b, pre}, opts);
  std::vector<double> before(10000), after(10000);
  for (std::uint64_t r = 0; r < 10000; ++r) {
    before[r] = model.realize(r).value(0);
    after[r] = apply_transform(g, model.realize(r + 10000)).value(0);
  }
  EXPECT_GT(ks_two_sample(before, after).p_value, 0.01);
}

TEST(Transform, Errors) {
  const auto gauss = realize(NoiseSpec::gaussian(), {square(0, 1, 0, 1)});
  EXPECT_EQ(code_of([&] { apply_transform(Matrix::Identity(2, 2), gauss); }), ErrorCode::UnsupportedKind);
  const auto pois = realize(NoiseSpec::poisson(1.0), {square(0, 1, 0, 1)});
  EXPECT_EQ(code_of([&] { apply_transform(diag2(2.0, 1.0), pois); }), ErrorCode::InvalidGenerator);
  EXPECT_EQ(code_of([&] { (void)pois.value(5); }), ErrorCode::UnregisteredRegion);
  // After a shear the unit square is no longer inside the moved window.
  EXPECT_EQ(code_of([&] { (void)apply_transform(diag2(2.0, 0.5), pois).value(0); }), ErrorCode::UnregisteredRegion);
}

TEST(GaussHermite, Moments) {
  for (int n : {8, 16, 32}) {
    const auto q = gauss_hermite(n);
    ASSERT_EQ(q.nodes.size(), static_cast<std::size_t>(n));
    // int x^(2k) e^(-x^2) dx = Gamma(k + 1/2); odd moments vanish. Higher
    // degrees are exact in theory but lose digits to cancellation.
    for (int k = 0; k < std::min(n, 9); ++k) {
      double even = 0.0;
      double odd = 0.0;
      double odd_abs = 0.0;
      for (int i = 0; i < n; ++i) {
        even += q.weights[i] * std::pow(q.nodes[i], 2 * k);
        odd += q.weights[i] * std::pow(q.nodes[i], 2 * k + 1);
        odd_abs += std::abs(q.weights[i] * std::pow(q.nodes[i], 2 * k + 1));
      }
      const double exact = std::tgamma(k + 0.5);
      EXPECT_NEAR(even, exact, 1e-10 * exact) << n << " " << k;
      EXPECT_NEAR(odd, 0.0, 1e-12 * odd_abs);
    }
  }
}

TEST(Conditional, FullyMeasurable) {
  const Region c = square(0, 1, 0, 1);
  const Region b = square(-1, 2, -1, 2);
  ConditionalOptions o;
  o.seed = 3;
  const auto tanh_f = [](double x) { return std::tanh(x); };
  const auto cs = conditional_expectation_gaussian(tanh_f, c, b, o);
  EXPECT_NEAR(cs.remainder.value, 0.0, 1e-12);
  const double ef = normal_expectation(tanh_f, 1.0);
  const double var = normal_expectation([&](double x) { return std::pow(std::tanh(x) - ef, 2); }, 1.0);
  EXPECT_NEAR(variance(cs.values), var, 3 * variance_stderr(cs.values));
}

TEST(Conditional, Independent) {
  const auto cs = conditional_expectation_gaussian([](double x) { return x > 0 ? 1.0 : 0.0; }, square(0, 1, 0, 1),
                                                   square(2, 3, 0, 1));
  for (double v : cs.values) EXPECT_NEAR(v, 0.5, 1e-9);
  EXPECT_NEAR(variance(cs.values), 0.0, 1e-15);
}

TEST(Conditional, IdentityGivesOverlapVariance) {
  const Region c = square(0, 1, 0, 1);
  const Region b = square(0.7, 2, 0, 1);
  ConditionalOptions o;
  o.seed = 4;
  o.samples = 20000;
  const auto cs = conditional_expectation_gaussian([](double x) { return x; }, c, b, o);
  EXPECT_NEAR(cs.overlap.value, 0.3, 1e-12);
  EXPECT_NEAR(cs.remainder.value, 0.7, 1e-12);
  EXPECT_NEAR(variance(cs.values), 0.3, 3 * variance_stderr(cs.values));
  EXPECT_GT(ks_one_sample(cs.values, [](double x) { return normal_cdf(x, 0.0, std::sqrt(0.3)); }).p_value, 0.01);
}

TEST(Conditional, QuadratureMatchesTrapezoid) {
  // At v = 0 with r = 1 the conditional mean of indicator_pos and clip1 have closed forms.
  const Region c = square(0, 1, 0, 1);
  const Region b = square(5, 6, 0, 1);
  const auto clip = [](double x) { return std::clamp(x, -1.0, 1.0); };
  const auto cs = conditional_expectation_gaussian([](double x) { return x * x; }, c, b);
  EXPECT_NEAR(cs.values.front(), 1.0, 1e-12);
  const auto cc = conditional_expectation_gaussian(clip, c, b);
  EXPECT_NEAR(cc.values.front(), normal_expectation(clip, 1.0), 1e-9);
}

TEST(Conditional, WorkerIndependenceAndErrors) {
  const Region c = square(0, 1, 0, 1);
  const Region b = square(0.5, 1.5, 0, 1);
  ConditionalOptions o1;
  o1.workers = 1;
  o1.seed = 11;
  ConditionalOptions o4 = o1;
  o4.workers = 4;
  const auto f = [](double x) { return std::tanh(x); };
  EXPECT_EQ(conditional_expectation_gaussian(f, c, b, o1).values, conditional_expectation_gaussian(f, c, b, o4).values);
  ConditionalOptions few;
  few.quad_nodes = 4;
  EXPECT_EQ(code_of([&] { conditional_expectation_gaussian(f, c, b, few); }), ErrorCode::InvalidArgument);
  const NoiseModel pois(NoiseSpec::poisson(1.0), {c, b});
  EXPECT_EQ(code_of([&] { conditional_expectation_gaussian(pois, f, 0, 1); }), ErrorCode::NonGaussian);
}

TEST(Noise, RealizationJson) {
  const auto r = realize(NoiseSpec::poisson(2.0), {square(0, 1, 0, 1)}, {{}, 5, std::nullopt}, 1);
  const auto j = to_json(r);
  EXPECT_EQ(j["spec"]["kind"], "poisson");
  EXPECT_EQ(j["points"].size(), r.points.size());
  const auto g = to_json(realize(NoiseSpec::gaussian(), {square(0, 1, 0, 1)}));
  EXPECT_TRUE(g.contains("atoms"));
  EXPECT_EQ(g["atom_values"].size(), 1u);
}

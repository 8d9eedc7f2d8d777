#include <cmath>
#include <vector>

#include "doctest.h"
#include "skewflect/metrics.hpp"
#include "skewflect/rng.hpp"

using namespace skewflect;

namespace {

std::vector<double> uniform_sample(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<double> out(n);
  for (auto& v : out) v = rng.uniform();
  return out;
}

}  // namespace

TEST_CASE("w1_1d equal-size oracles") {
  CHECK(w1_1d({0, 1}, {1, 2}) == 1.0);
  CHECK(w1_1d({0, 1, 2}, {2, 1, 0}) == 0.0);  // order independent
  CHECK(w1_1d({0, 2}, {1, 1}) == 1.0);
  CHECK(w1_1d({5}, {3}) == 2.0);
}

TEST_CASE("w1_1d unequal-size quantile-grid oracle") {
  // m = 3, grid p = {1/6, 1/2, 5/6}; quantiles of {0,1}: 0, 0, 1;
  // of {0,0,3}: 0, 0, 3 -> diffs 0, 0, 2 -> mean 2/3.
  CHECK(w1_1d({0, 1}, {0, 0, 3}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w1_1d({0, 0, 3}, {0, 1}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("w1_1d translation and scaling are exact on dyadic data") {
  const std::vector<double> a{0.0, 0.25, 0.5, 1.25};
  std::vector<double> shifted = a;
  for (auto& v : shifted) v += 0.5;
  CHECK(w1_1d(a, shifted) == 0.5);

  std::vector<double> doubled = a, b{0.25, 0.5, 0.75, 2.0}, doubled_b = b;
  for (auto& v : doubled) v *= 2.0;
  for (auto& v : doubled_b) v *= 2.0;
  CHECK(w1_1d(doubled, doubled_b) == 2.0 * w1_1d(a, b));
}

TEST_CASE("w1_1d is symmetric and obeys the triangle inequality") {
  const auto a = uniform_sample(400, 1);
  auto b = uniform_sample(400, 2);
  for (auto& v : b) v = 2.0 * v - 0.3;
  auto c = uniform_sample(400, 3);
  for (auto& v : c) v += 0.7;
  CHECK(w1_1d(a, b) == w1_1d(b, a));
  CHECK(w1_1d(a, c) <= w1_1d(a, b) + w1_1d(b, c) + 1e-12);
  CHECK(w1_1d(a, a) == 0.0);

  const auto u = uniform_sample(300, 4);  // unequal sizes stay symmetric
  CHECK(w1_1d(a, u) == w1_1d(u, a));
}

TEST_CASE("w1_1d between independent uniform samples is small") {
  CHECK(w1_1d(uniform_sample(10000, 5), uniform_sample(10000, 6)) < 0.02);
  CHECK_THROWS_AS(w1_1d({}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(w1_1d({1.0}, {}), std::invalid_argument);
}

TEST_CASE("w1_per_dim treats columns independently") {
  Mat A(4, 2), B(4, 2);
  A.col(0) << 0, 1, 2, 3;
  B.col(0) << 3, 2, 1, 0;  // same empirical law
  A.col(1) << 0, 0.25, 0.5, 1.25;
  B.col(1) << 0.5, 0.75, 1.0, 1.75;  // shifted by 0.5
  const auto rep = w1_per_dim(A, B);
  CHECK(rep.per_dimension[0] == 0.0);
  CHECK(rep.per_dimension[1] == 0.5);
  CHECK(rep.size_a == 4);
  CHECK(rep.size_b == 4);
  CHECK_THROWS_AS(w1_per_dim(Mat::Zero(2, 2), Mat::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("mse_trace matches the naive residual average") {
  const auto ds = generate_linreg(200, 8);
  ChainTrace trace;
  CounterRng rng(9, 0);
  for (int s = 0; s < 3; ++s) {
    Mat S(5, 2);
    for (Eigen::Index c = 0; c < 5; ++c)
      for (int i = 0; i < 2; ++i) S(c, i) = rng.normal();
    trace.states.push_back(S);
  }
  const auto fast = mse_trace(trace, ds);
  REQUIRE(fast.size() == 3);
  for (std::size_t s = 0; s < 3; ++s) {
    double naive = 0.0;
    for (Eigen::Index c = 0; c < 5; ++c) {
      const Vec x = trace.states[s].row(c).transpose();
      naive += (ds.labels - ds.features * x).squaredNorm() / static_cast<double>(ds.n());
    }
    naive /= 5.0;
    CHECK(fast[s] == doctest::Approx(naive).epsilon(1e-10));
  }
}

TEST_CASE("mse_trace oracles on a noiseless dataset") {
  Dataset ds;  // labels = a1 + a2 exactly
  const auto base = generate_linreg(100, 4);
  ds.features = base.features;
  ds.labels = base.features.col(0) + base.features.col(1);

  ChainTrace at_star;
  Mat S(3, 2);
  S.setOnes();  // every chain at x_star = [1,1]
  at_star.states.push_back(S);
  CHECK(mse_trace(at_star, ds)[0] < 1e-9);

  ChainTrace at_zero;
  at_zero.states.push_back(Mat::Zero(2, 2));
  const double mean_y2 = ds.labels.squaredNorm() / static_cast<double>(ds.n());
  CHECK(mse_trace(at_zero, ds)[0] == doctest::Approx(mean_y2).epsilon(1e-12));

  ChainTrace bad;
  bad.states.push_back(Mat::Zero(2, 3));
  CHECK_THROWS_AS(mse_trace(bad, ds), std::invalid_argument);
}

TEST_CASE("mse_trace is invariant to dataset row order") {
  const auto ds = generate_linreg(50, 12);
  Dataset rev;
  rev.features = ds.features.colwise().reverse();
  rev.labels = ds.labels.reverse();
  ChainTrace trace;
  Mat S(2, 2);
  S << 0.3, -0.2, 1.1, 0.7;
  trace.states.push_back(S);
  CHECK(mse_trace(trace, ds)[0] == doctest::Approx(mse_trace(trace, rev)[0]).epsilon(1e-9));
}

TEST_CASE("accuracy oracles") {
  Dataset ds;
  ds.features.resize(3, 2);
  ds.features << 1, 0, -1, 0, 2, 0;
  ds.labels.resize(3);
  ds.labels << 1, 0, 1;

  // beta = 0 -> z = 0 everywhere -> every point predicts class 1.
  CHECK(accuracy(Vec::Zero(2), ds) == doctest::Approx(2.0 / 3.0));
  Vec flip = ds.labels;
  Dataset flipped = ds;
  flipped.labels = Vec::Ones(3) - flip;
  CHECK(accuracy(Vec::Zero(2), flipped) == doctest::Approx(1.0 / 3.0));

  Vec sep(2);
  sep << 1, 0;  // sign(x1) separates perfectly (labels 1,0,1 for x1 = 1,-1,2)
  CHECK(accuracy(sep, ds) == 1.0);
  CHECK(accuracy(2.0 * sep, ds) == accuracy(sep, ds));  // scale invariant
  CHECK(accuracy(-sep, ds) == doctest::Approx(0.0));

  CHECK_THROWS_AS(accuracy(Vec::Zero(3), ds), std::invalid_argument);
}

TEST_CASE("fit_exp_rate recovers exact exponentials") {
  std::vector<double> t, v;
  for (int i = 0; i < 20; ++i) {
    t.push_back(0.05 * i);
    v.push_back(std::exp(-3.0 * 0.05 * i));
  }
  const auto fit = fit_exp_rate(v, t);
  CHECK(fit.rate == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_exp_rate on constants reports zero rate and perfect fit") {
  const std::vector<double> t{0, 1, 2, 3}, v{0.7, 0.7, 0.7, 0.7};
  const auto fit = fit_exp_rate(v, t);
  CHECK(fit.rate == 0.0);
  CHECK(fit.r2 == 1.0);  // sll == 0 convention
}

TEST_CASE("fit_exp_rate tolerates multiplicative noise") {
  CounterRng rng(10, 0);
  std::vector<double> t, v;
  for (int i = 0; i < 200; ++i) {
    t.push_back(0.01 * i);
    v.push_back(std::exp(-3.0 * 0.01 * i) * (1.0 + 0.01 * rng.normal()));
  }
  const auto fit = fit_exp_rate(v, t);
  CHECK(std::abs(fit.rate - 3.0) < 0.1);
  CHECK(fit.r2 > 0.99);
}

TEST_CASE("fit_exp_rate input validation and clipping") {
  CHECK_THROWS_AS(fit_exp_rate({1, 2}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(fit_exp_rate({1, 2, 3}, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(fit_exp_rate({1, 2, 3}, {1, 1, 1}), std::invalid_argument);
  const auto fit = fit_exp_rate({1.0, 0.0, 1.0}, {0, 1, 2});  // zero is clipped
  CHECK(std::isfinite(fit.rate));
  CHECK(std::isfinite(fit.r2));
}

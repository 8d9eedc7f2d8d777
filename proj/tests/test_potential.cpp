#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "skewflect/potential.hpp"
#include "skewflect/rng.hpp"

using namespace skewflect;

namespace {

std::shared_ptr<const Dataset> tiny_logreg() {
  auto ds = std::make_shared<Dataset>();
  ds->features.resize(1, 2);
  ds->features << 1, 0;
  ds->labels.resize(1);
  ds->labels << 1;
  return ds;
}

std::shared_ptr<const Dataset> random_dataset(Eigen::Index n, Eigen::Index d,
                                              bool classify, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  auto ds = std::make_shared<Dataset>();
  ds->features.resize(n, d);
  ds->labels.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) ds->features(j, i) = rng.normal();
    ds->labels[j] = classify ? static_cast<double>(rng.uniform() < 0.5) : rng.normal();
  }
  return ds;
}

Vec fd_gradient(const Potential& p, const Vec& x, double h = 1e-5) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec hi = x, lo = x;
    hi[i] += h;
    lo[i] -= h;
    g[i] = (p.value(hi) - p.value(lo)) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("gaussian standard potential at the minimum") {
  const auto p = Potential::gaussian_standard(3);
  CHECK(p.value(Vec::Zero(3)) == 0.0);
  CHECK(p.gradient(Vec::Zero(3)).norm() == 0.0);
  CHECK(p.lipschitz() == 1.0);
  CHECK_THROWS_AS(p.value(Vec::Zero(2)), std::invalid_argument);
}

TEST_CASE("quadratic potential oracle and linearity") {
  Mat H = Vec::LinSpaced(3, 1.0, 3.0).asDiagonal();
  const auto p = Potential::quadratic(H);
  CHECK(p.value(Vec::Ones(3)) == doctest::Approx(3.0));
  CHECK((p.gradient(Vec::Ones(3)) - Vec::LinSpaced(3, 1.0, 3.0)).norm() == 0.0);
  CHECK(p.lipschitz() == doctest::Approx(3.0));

  CounterRng rng(7, 0);
  for (int t = 0; t < 50; ++t) {
    Vec x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const double a = rng.normal(), b = rng.normal();
    CHECK((p.gradient(a * x + b * y) - a * p.gradient(x) - b * p.gradient(y)).norm() <=
          1e-12 * (1.0 + p.gradient(x).norm() + p.gradient(y).norm()));
  }

  Mat bad(2, 2);
  bad << 1, 2, 0, 1;
  CHECK_THROWS_AS(Potential::quadratic(bad), std::invalid_argument);
}

TEST_CASE("logistic potential single-datum oracle") {
  const auto p = Potential::logistic_regression(tiny_logreg());
  const Vec beta = Vec::Zero(2);
  // value = softplus(0) - 1*0 + log V_2 with V_2 = pi (uniform-ball prior constant)
  CHECK(p.value(beta) ==
        doctest::Approx(std::log(2.0) + std::log(std::numbers::pi)).epsilon(1e-12));
  const Vec g = p.gradient(beta);
  CHECK(g[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(g[1] == 0.0);
}

TEST_CASE("logistic potential is overflow-safe") {
  const auto p = Potential::logistic_regression(tiny_logreg());
  Vec beta(2);
  beta << 1000.0, 0.0;
  CHECK(std::isfinite(p.value(beta)));
  CHECK(std::isfinite(p.gradient(beta).norm()));
  beta << -1000.0, 0.0;
  CHECK(std::isfinite(p.value(beta)));
  CHECK(std::isfinite(p.gradient(beta).norm()));
}

TEST_CASE("gradients match central finite differences") {
  CounterRng rng(11, 0);
  Mat H(3, 3);
  H << 2, 0.5, 0, 0.5, 1, 0.25, 0, 0.25, 3;
  const Potential kinds[] = {
      Potential::gaussian_standard(3), Potential::quadratic(H),
      Potential::linear_regression(random_dataset(40, 3, false, 1)),
      Potential::logistic_regression(random_dataset(40, 3, true, 2))};
  for (const auto& p : kinds) {
    for (int t = 0; t < 50; ++t) {
      Vec x(3);
      for (int i = 0; i < 3; ++i) x[i] = 0.6 * rng.normal();
      const Vec g = p.gradient(x);
      const Vec fd = fd_gradient(p, x);
      CHECK((g - fd).norm() <= 1e-5 * (1.0 + g.norm()));
    }
  }
}

TEST_CASE("full batch stochastic gradient equals the exact gradient") {
  const auto ds = random_dataset(20, 3, false, 3);
  const auto p = Potential::linear_regression(ds);
  std::vector<Eigen::Index> all(20);
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  Vec x(3);
  x << 0.3, -0.2, 0.5;
  CHECK((p.stochastic_gradient(x, all) - p.gradient(x)).norm() <=
        1e-12 * (1.0 + p.gradient(x).norm()));
}

TEST_CASE("singleton batches average to the exact gradient") {
  for (const bool classify : {false, true}) {
    const auto ds = random_dataset(17, 3, classify, 4);
    const auto p = classify ? Potential::logistic_regression(ds)
                            : Potential::linear_regression(ds);
    Vec x(3);
    x << 0.1, 0.4, -0.3;
    Vec avg = Vec::Zero(3);
    for (Eigen::Index j = 0; j < 17; ++j) avg += p.stochastic_gradient(x, {j});
    avg /= 17.0;
    CHECK((avg - p.gradient(x)).norm() <= 1e-10 * (1.0 + p.gradient(x).norm()));
  }
}

TEST_CASE("two-point dataset singleton batch doubles the per-datum gradient") {
  auto ds = std::make_shared<Dataset>();
  ds->features.resize(2, 2);
  ds->features << 1, 2, -1, 0.5;
  ds->labels.resize(2);
  ds->labels << 3, -1;
  const auto p = Potential::linear_regression(ds);
  Vec x(2);
  x << 0.5, -0.5;
  // grad f_0 = (x.a_0 - y_0) a_0 with a_0 = [1,2], y_0 = 3
  const double r0 = (x[0] * 1 + x[1] * 2) - 3;
  Vec expect(2);
  expect << 2 * r0 * 1, 2 * r0 * 2;
  CHECK((p.stochastic_gradient(x, {0}) - expect).norm() <= 1e-12);
}

TEST_CASE("stochastic gradient input validation") {
  const auto p = Potential::linear_regression(random_dataset(5, 2, false, 5));
  const Vec x = Vec::Zero(2);
  CHECK_THROWS_AS(p.stochastic_gradient(x, {}), std::invalid_argument);
  CHECK_THROWS_AS(p.stochastic_gradient(x, {5}), std::out_of_range);
  CHECK_THROWS_AS(Potential::gaussian_standard(2).stochastic_gradient(x, {0}),
                  std::logic_error);
}

TEST_CASE("logistic value is invariant to dataset order") {
  const auto ds = random_dataset(30, 3, true, 6);
  auto shuffled = std::make_shared<Dataset>(*ds);
  std::vector<Eigen::Index> perm(30);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  CounterRng rng(8, 0);
  for (Eigen::Index i = 29; i > 0; --i)
    std::swap(perm[static_cast<std::size_t>(i)],
              perm[rng.uniform_below(static_cast<std::uint64_t>(i + 1))]);
  for (Eigen::Index j = 0; j < 30; ++j) {
    shuffled->features.row(j) = ds->features.row(perm[static_cast<std::size_t>(j)]);
    shuffled->labels[j] = ds->labels[perm[static_cast<std::size_t>(j)]];
  }
  const auto p1 = Potential::logistic_regression(ds);
  const auto p2 = Potential::logistic_regression(shuffled);
  Vec x(3);
  x << 0.2, -0.7, 0.4;
  CHECK(std::abs(p1.value(x) - p2.value(x)) < 1e-9);
}

TEST_CASE("draw_minibatch: full set, marginals, determinism, bounds") {
  CounterRng rng(13, 0);
  auto full = draw_minibatch(6, 6, rng);
  std::sort(full.begin(), full.end());
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(full[static_cast<std::size_t>(i)] == i);

  std::vector<int> hits(5, 0);
  for (int t = 0; t < 100000; ++t) {
    const auto batch = draw_minibatch(5, 2, rng);
    CHECK(batch[0] != batch[1]);
    for (const auto j : batch) ++hits[static_cast<std::size_t>(j)];
  }
  for (const int h : hits)
    CHECK(std::abs(h / 100000.0 - 0.4) < 0.01);  // hypergeometric marginal b/n

  CounterRng r1(99, 0), r2(99, 0);
  for (int t = 0; t < 100; ++t) CHECK(draw_minibatch(50, 7, r1) == draw_minibatch(50, 7, r2));

  CHECK_THROWS_AS(draw_minibatch(3, 4, rng), std::invalid_argument);
  CHECK_THROWS_AS(draw_minibatch(3, 0, rng), std::invalid_argument);
}

TEST_CASE("draw_minibatch batches are distinct and in range") {
  CounterRng rng(15, 0);
  for (int t = 0; t < 1000; ++t) {
    const auto batch = draw_minibatch(100, 10, rng);
    std::set<Eigen::Index> seen(batch.begin(), batch.end());
    CHECK(seen.size() == batch.size());
    CHECK(*seen.begin() >= 0);
    CHECK(*seen.rbegin() < 100);
  }
}

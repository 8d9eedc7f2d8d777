#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "skewflect/rng.hpp"
#include "skewflect/skew_field.hpp"

using namespace skewflect;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat random_antisym(int d, CounterRng& rng) {
  Mat J = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double u = -3.0 + 6.0 * rng.uniform();
      J(i, j) = u;
      J(j, i) = -u;
    }
  return J;
}

}  // namespace

TEST_CASE("tridiagonal skew matrix layout") {
  Mat expect(3, 3);
  expect << 0, 1, 0, -1, 0, 1, 0, -1, 0;
  CHECK((build_tridiagonal_skew(3, 1.0) - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK(build_tridiagonal_skew(3, 0.0).cwiseAbs().maxCoeff() == 0.0);
  Mat expect2(2, 2);
  expect2 << 0, 2, -2, 0;
  CHECK((build_tridiagonal_skew(2, 2.0) - expect2).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(build_tridiagonal_skew(1, 1.0), std::invalid_argument);
}

TEST_CASE("field constructors and metadata") {
  const auto zero = SkewField::zero(3);
  CHECK(zero.is_zero());
  CHECK(zero.sup_norm() == 0.0);
  CHECK(zero.delta0() == 1.0);
  CHECK(zero.lipschitz() == 0.0);

  const auto j1 = SkewField::tridiagonal(3, 1.0);
  CHECK(j1.sup_norm() == doctest::Approx(std::sqrt(2.0)));  // singular values {√2, √2, 0}
  CHECK(j1.delta0() == doctest::Approx(1.0 / std::sqrt(3.0)));

  Mat bad(2, 2);
  bad << 0, 1, 1, 0;
  CHECK_THROWS_AS(SkewField::constant(bad), std::invalid_argument);
  Mat good(2, 2);
  good << 0, 2, -2, 0;
  CHECK(SkewField::constant(good).sup_norm() == doctest::Approx(2.0));
}

TEST_CASE("skew normal: identity field, tridiagonal, 2-d oracle") {
  const Vec e1 = v3(1, 0, 0);
  CHECK(skew_normal(Mat::Zero(3, 3), e1) == e1);

  const Vec got = skew_normal(build_tridiagonal_skew(3, 1.0), e1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK((got - v3(inv_sqrt2, -inv_sqrt2, 0)).norm() < 1e-15);

  Mat J2(2, 2);
  J2 << 0, 2, -2, 0;
  const Vec got2 = skew_normal(J2, v2(0, 1));
  const double inv_sqrt5 = 1.0 / std::sqrt(5.0);
  CHECK((got2 - v2(2 * inv_sqrt5, inv_sqrt5)).norm() < 1e-15);

  CHECK_THROWS_AS(skew_normal(Mat::Zero(3, 3), v3(1, 1, 0)), std::invalid_argument);
  Mat notskew(3, 3);
  notskew.setOnes();
  CHECK_THROWS_AS(skew_normal(notskew, e1), std::invalid_argument);
}

TEST_CASE("skew normal properties over random fields") {
  CounterRng rng(41, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_below(9));
    const Mat J = random_antisym(d, rng);
    Vec nu(d);
    for (int i = 0; i < d; ++i) nu[i] = rng.normal();
    nu.normalize();
    const Vec nuJ = skew_normal(J, nu);
    CHECK(std::abs(nuJ.norm() - 1.0) <= 1e-10);
    const double ip = nuJ.dot(nu);
    CHECK(ip > 0.0);
    CHECK(ip == doctest::Approx(1.0 / std::sqrt(1.0 + (J * nu).squaredNorm())).epsilon(1e-10));
  }
}

TEST_CASE("skew reflect: interior fixed point, classical, rotated") {
  const auto ball = ConvexBody::ball(Vec::Zero(3), 1.0);
  const auto zero = SkewField::zero(3);
  const auto j1 = SkewField::tridiagonal(3, 1.0);

  const Vec inside = v3(0.2, -0.3, 0.1);
  CHECK(skew_reflect(ball, j1, inside) == inside);

  CHECK((skew_reflect(ball, zero, v3(2, 0, 0)) - v3(0, 0, 0)).norm() < 1e-15);
  CHECK((skew_reflect(ball, j1, v3(2, 0, 0)) - v3(0, 1, 0)).norm() < 1e-15);
}

TEST_CASE("skew project: trivial field, oblique hit, miss fallback") {
  const auto ball = ConvexBody::ball(Vec::Zero(3), 1.0);
  const auto [p0, fb0] = skew_project(ball, SkewField::zero(3), v3(2, 0, 0));
  CHECK((p0 - v3(1, 0, 0)).norm() == 0.0);
  CHECK_FALSE(fb0);

  const auto disk = ConvexBody::ball(Vec::Zero(2), 1.0);
  Mat J(2, 2);
  J << 0, 1, -1, 0;
  const auto field = SkewField::constant(J);

  const auto [p1, fb1] = skew_project(disk, field, v2(1.1, 0));
  CHECK_FALSE(fb1);
  CHECK(std::abs(p1.norm() - 1.0) < 1e-6);  // lands on the circle
  CHECK(p1[0] == doctest::Approx(0.9943).epsilon(2e-4));
  CHECK(p1[1] == doctest::Approx(0.1057).epsilon(2e-3));

  const auto [p2, fb2] = skew_project(disk, field, v2(2, 0));
  CHECK(fb2);  // ray misses: Euclidean fallback
  CHECK((p2 - v2(1, 0)).norm() == 0.0);
}

TEST_CASE("skew project with Zero field is bit-identical to project") {
  CounterRng rng(43, 0);
  const auto ball = ConvexBody::ball(Vec::Zero(3), 1.0);
  const auto box = ConvexBody::box(v3(-1, -1, -1), v3(1, 1, 1));
  const auto zero = SkewField::zero(3);
  for (const auto& body : {ball, box}) {
    int outside = 0;
    while (outside < 1000) {
      Vec x(3);
      for (int i = 0; i < 3; ++i) x[i] = -3.0 + 6.0 * rng.uniform();
      if (body.contains(x)) continue;
      ++outside;
      const auto [p, fb] = skew_project(body, zero, x);
      CHECK_FALSE(fb);
      REQUIRE(p == body.project(x));  // same floating-point result
    }
  }
}

TEST_CASE("skew project output stays in the body") {
  CounterRng rng(47, 0);
  const auto ball = ConvexBody::ball(Vec::Zero(3), 1.0);
  const auto box = ConvexBody::box(v3(-1, -1, -1), v3(1, 1, 1));
  const auto j2 = SkewField::tridiagonal(3, 2.0);
  for (const auto& body : {ball, box}) {
    for (int trial = 0; trial < 500; ++trial) {
      Vec x(3);
      for (int i = 0; i < 3; ++i) x[i] = -3.0 + 6.0 * rng.uniform();
      const auto [p, fb] = skew_project(body, j2, x);
      (void)fb;
      CHECK(body.contains(p));
    }
  }
}

TEST_CASE("resolvent symmetric part: identity, planar rotation, tridiagonal") {
  const auto r0 = resolvent_symmetric_part(Mat::Zero(3, 3));
  CHECK((r0.S - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(r0.c == doctest::Approx(1.0));
  CHECK(r0.C == doctest::Approx(1.0));

  Mat J(2, 2);
  J << 0, 2, -2, 0;
  const auto r2 = resolvent_symmetric_part(J);
  CHECK(r2.c == doctest::Approx(0.2).epsilon(1e-12));  // 1/(1+a^2), a=2
  CHECK(r2.C == doctest::Approx(0.2).epsilon(1e-12));

  const auto r1 = resolvent_symmetric_part(build_tridiagonal_skew(3, 1.0));
  CHECK(r1.eigenvalues[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r1.eigenvalues[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(r1.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resolvent eigenvalues match 1/(1+sigma^2) for each singular value") {
  CounterRng rng(53, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_below(9));
    const Mat J = random_antisym(d, rng);
    const auto res = resolvent_symmetric_part(J);
    CHECK((res.S - res.S.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(res.c > 0.0);
    CHECK(res.C <= 1.0 + 1e-10);
    Eigen::JacobiSVD<Mat> svd(J);
    for (int s = 0; s < d; ++s) {
      const double sigma = svd.singularValues()[s];
      if (sigma <= 1e-8) continue;
      const double want = 1.0 / (1.0 + sigma * sigma);
      double best = 1e9;
      for (int e = 0; e < d; ++e) best = std::min(best, std::abs(res.eigenvalues[e] - want));
      CHECK(best <= 1e-8);
    }
  }
}

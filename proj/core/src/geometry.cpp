#include "skewflect/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace skewflect {

ConvexBody ConvexBody::ball(Vec center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("ball radius must be positive");
  ConvexBody body;
  body.kind_ = Kind::Ball;
  body.dim_ = static_cast<int>(center.size());
  const double cnorm = center.norm();
  if (cnorm >= radius)
    throw std::invalid_argument("body does not contain the origin");
  body.r_ = radius - cnorm;
  body.R_ = radius + cnorm;
  body.a_ = std::move(center);
  body.radius_ = radius;
  return body;
}

ConvexBody ConvexBody::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size())
    throw std::invalid_argument("box bounds dimension mismatch");
  ConvexBody body;
  body.kind_ = Kind::AxisBox;
  body.dim_ = static_cast<int>(lower.size());
  double r = std::numeric_limits<double>::infinity();
  double R2 = 0.0;
  for (int i = 0; i < body.dim_; ++i) {
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("box requires lower < upper in every coordinate");
    if (!(lower[i] < 0.0 && upper[i] > 0.0))
      throw std::invalid_argument("body does not contain the origin");
    r = std::min(r, std::min(-lower[i], upper[i]));
    R2 += std::max(lower[i] * lower[i], upper[i] * upper[i]);
  }
  body.r_ = r;
  body.R_ = std::sqrt(R2);
  body.a_ = std::move(lower);
  body.b_ = std::move(upper);
  return body;
}

bool ConvexBody::contains(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("dimension mismatch");
  if (kind_ == Kind::Ball) return (x - a_).norm() <= radius_ + kMembershipTol;
  for (int i = 0; i < dim_; ++i) {
    if (x[i] < a_[i] - kMembershipTol || x[i] > b_[i] + kMembershipTol) return false;
  }
  return true;
}

Vec ConvexBody::project(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("dimension mismatch");
  if (contains(x)) return x;  // keep members bit-unchanged (same predicate as contains)
  if (kind_ == Kind::Ball) {
    const double dist = (x - a_).norm();
    return a_ + (radius_ / dist) * (x - a_);
  }
  return x.cwiseMax(a_).cwiseMin(b_);
}

Vec ConvexBody::inner_normal(const Vec& x) const {
  const Vec p = project(x);
  const double dist = (p - x).norm();
  if (dist <= kMembershipTol) throw std::invalid_argument("interior point");
  return (p - x) / dist;
}

std::optional<RayHit> ConvexBody::ray_entry(const Vec& origin, const Vec& direction) const {
  if (origin.size() != dim_ || direction.size() != dim_)
    throw std::invalid_argument("dimension mismatch");
  if (direction.norm() == 0.0) throw std::invalid_argument("zero direction");
  if (contains(origin)) throw std::invalid_argument("ray origin inside body");

  if (kind_ == Kind::Ball) {
    // |origin + t*dir - center|^2 = radius^2, smallest positive root.
    const Vec oc = origin - a_;
    const double A = direction.squaredNorm();
    const double B = 2.0 * oc.dot(direction);
    const double C = oc.squaredNorm() - radius_ * radius_;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return std::nullopt;
    const double t = (-B - std::sqrt(disc)) / (2.0 * A);
    if (t <= 0.0) return std::nullopt;  // body entirely behind the origin
    return RayHit{t, origin + t * direction};
  }

  // Slab clipping: entry is the max over axes of per-axis entry times.
  double tlo = 0.0;
  double thi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim_; ++i) {
    if (direction[i] == 0.0) {
      if (origin[i] < a_[i] || origin[i] > b_[i]) return std::nullopt;
      continue;
    }
    double t1 = (a_[i] - origin[i]) / direction[i];
    double t2 = (b_[i] - origin[i]) / direction[i];
    if (t1 > t2) std::swap(t1, t2);
    tlo = std::max(tlo, t1);
    thi = std::min(thi, t2);
  }
  if (tlo > thi || tlo <= 0.0) return std::nullopt;
  return RayHit{tlo, origin + tlo * direction};
}

Vec ConvexBody::sample_uniform(CounterRng& rng) const {
  if (kind_ == Kind::Ball) {
    Vec dir(dim_);
    double n2 = 0.0;
    do {
      for (int i = 0; i < dim_; ++i) dir[i] = rng.normal();
      n2 = dir.squaredNorm();
    } while (n2 < 1e-300);
    const double u = rng.uniform();
    const double scale = radius_ * std::pow(u, 1.0 / dim_) / std::sqrt(n2);
    return a_ + scale * dir;
  }
  Vec x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = a_[i] + rng.uniform() * (b_[i] - a_[i]);
  return x;
}

}  // namespace skewflect

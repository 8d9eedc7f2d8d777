#pragma once

// Bounded convex constraint bodies and the exact geometric primitives
// (membership, Euclidean projection, inner unit normal, ray-boundary entry)
// that the reflection/projection operators are built on.

#include <Eigen/Dense>
#include <optional>

#include "skewflect/rng.hpp"

namespace skewflect {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kMembershipTol = 1e-12;

struct RayHit {
  double t;   // smallest t > 0 with origin + t*direction in the closed body
  Vec point;  // the entry point (a boundary point)
};

class ConvexBody {
 public:
  enum class Kind { Ball, AxisBox };

  // Empty (dim 0) placeholder; build real bodies with ball()/box().
  ConvexBody() = default;

  // Ball {x : |x - center| <= radius}. Must contain the origin.
  static ConvexBody ball(Vec center, double radius);
  // Box {x : lower <= x <= upper} componentwise. Must contain the origin.
  static ConvexBody box(Vec lower, Vec upper);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double inner_radius() const { return r_; }   // origin ball of this radius fits inside
  double outer_radius() const { return R_; }   // body fits in origin ball of this radius

  const Vec& center() const { return a_; }  // Ball only
  double radius() const { return radius_; } // Ball only
  const Vec& lower() const { return a_; }   // AxisBox only
  const Vec& upper() const { return b_; }   // AxisBox only

  bool contains(const Vec& x) const;
  Vec project(const Vec& x) const;
  // Unit vector (project(x)-x)/|project(x)-x|; requires x strictly outside.
  Vec inner_normal(const Vec& x) const;
  // First entry of the ray origin + t*direction (t > 0) into the closed body.
  std::optional<RayHit> ray_entry(const Vec& origin, const Vec& direction) const;
  Vec sample_uniform(CounterRng& rng) const;

 private:
  Kind kind_ = Kind::Ball;
  int dim_ = 0;
  double r_ = 0.0, R_ = 0.0;
  Vec a_, b_;          // Ball: a_=center; AxisBox: a_=lower, b_=upper
  double radius_ = 0.0;
};

}  // namespace skewflect

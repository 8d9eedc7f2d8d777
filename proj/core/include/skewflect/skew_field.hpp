#pragma once

// Antisymmetric drift field J(x), the skew unit normal, skew-reflection,
// skew-projection (with Euclidean fallback on ray misses), and the
// resolvent symmetric part S = (I - J^2)^{-1}.

#include <Eigen/Dense>
#include <utility>

#include "skewflect/geometry.hpp"

namespace skewflect {

class SkewField {
 public:
  enum class Kind { Zero, Constant, Tridiagonal };

  // Empty (dim 0) placeholder; build real fields with the factories below.
  SkewField() = default;

  static SkewField zero(int d);
  // Validates antisymmetry (J + J^T = 0 entrywise to 1e-12).
  static SkewField constant(Mat J);
  // d x d matrix with +a on the superdiagonal, -a on the subdiagonal.
  static SkewField tridiagonal(int d, double a);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(J_.rows()); }
  // All supported fields are constant in x; the signature admits
  // state-dependent extensions.
  const Mat& at(const Vec& /*x*/) const { return J_; }
  double lipschitz() const { return 0.0; }
  double sup_norm() const { return sup_norm_; }       // spectral norm
  double delta0() const;                               // 1/sqrt(1+sup_norm^2)
  bool is_zero() const { return sup_norm_ == 0.0; }

 private:
  Kind kind_ = Kind::Zero;
  Mat J_;
  double sup_norm_ = 0.0;
};

// Convenience free function mirroring the tridiagonal constructor.
Mat build_tridiagonal_skew(int d, double a);

// nu^J = (I+J)nu / sqrt(|nu|^2 + |J nu|^2); requires |nu| = 1 (1e-10) and
// J antisymmetric.
Vec skew_normal(const Mat& J_at_point, const Vec& nu);

// R^J_C(x) = (I + J(x)) (P_C(x) - x) + P_C(x), J evaluated at x.
Vec skew_reflect(const ConvexBody& body, const SkewField& field, const Vec& x);

// Skew projection: ray-cast from x along nu^J(P_C(x)) to the first boundary
// entry. Returns (point, fallback); fallback=true means the ray missed and
// the Euclidean projection was used instead.
std::pair<Vec, bool> skew_project(const ConvexBody& body, const SkewField& field,
                                  const Vec& x);

struct ResolventSummary {
  Mat S;            // symmetric part of (I+J)^{-1}, equal to (I - J^2)^{-1}
  Vec eigenvalues;  // sorted ascending, all in (0, 1]
  double c;         // smallest eigenvalue
  double C;         // largest eigenvalue
};

// Computes S via a linear solve against (I - J^2), never by explicit inverse.
ResolventSummary resolvent_symmetric_part(const Mat& J);

}  // namespace skewflect

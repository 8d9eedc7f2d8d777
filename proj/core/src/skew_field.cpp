#include "skewflect/skew_field.hpp"

#include <cmath>
#include <stdexcept>

namespace skewflect {

namespace {

constexpr double kAntisymTol = 1e-12;

void check_antisymmetric(const Mat& J) {
  if (J.rows() != J.cols()) throw std::invalid_argument("J must be square");
  const double viol = (J + J.transpose()).cwiseAbs().maxCoeff();
  if (viol > kAntisymTol) throw std::invalid_argument("J is not antisymmetric");
}

double spectral_norm(const Mat& J) {
  if (J.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(J);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

}  // namespace

SkewField SkewField::zero(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  SkewField f;
  f.kind_ = Kind::Zero;
  f.J_ = Mat::Zero(d, d);
  f.sup_norm_ = 0.0;
  return f;
}

SkewField SkewField::constant(Mat J) {
  check_antisymmetric(J);
  SkewField f;
  f.kind_ = Kind::Constant;
  f.sup_norm_ = spectral_norm(J);
  f.J_ = std::move(J);
  return f;
}

SkewField SkewField::tridiagonal(int d, double a) {
  SkewField f;
  f.kind_ = Kind::Tridiagonal;
  f.J_ = build_tridiagonal_skew(d, a);
  f.sup_norm_ = spectral_norm(f.J_);
  return f;
}

double SkewField::delta0() const { return 1.0 / std::sqrt(1.0 + sup_norm_ * sup_norm_); }

Mat build_tridiagonal_skew(int d, double a) {
  if (d < 2) throw std::invalid_argument("tridiagonal skew field needs d >= 2");
  Mat J = Mat::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    J(i, i + 1) = a;
    J(i + 1, i) = -a;
  }
  return J;
}

Vec skew_normal(const Mat& J_at_point, const Vec& nu) {
  check_antisymmetric(J_at_point);
  if (std::abs(nu.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("nu must be a unit vector");
  const Vec Jnu = J_at_point * nu;
  return (nu + Jnu) / std::sqrt(nu.squaredNorm() + Jnu.squaredNorm());
}

Vec skew_reflect(const ConvexBody& body, const SkewField& field, const Vec& x) {
  const Vec p = body.project(x);
  const Vec diff = p - x;
  return diff + field.at(x) * diff + p;
}

std::pair<Vec, bool> skew_project(const ConvexBody& body, const SkewField& field,
                                  const Vec& x) {
  if (body.contains(x)) return {x, false};
  Vec p = body.project(x);
  const Vec nu = body.inner_normal(x);
  const Vec Jnu = field.at(p) * nu;
  // |J nu|^2 == 0 exactly: the skew ray is the Euclidean one; short-circuit
  // so the Zero field reproduces project() bit-for-bit.
  if (Jnu.squaredNorm() == 0.0) return {std::move(p), false};
  const Vec u = (nu + Jnu) / std::sqrt(nu.squaredNorm() + Jnu.squaredNorm());
  if (auto hit = body.ray_entry(x, u)) return {std::move(hit->point), false};
  return {std::move(p), true};
}

ResolventSummary resolvent_symmetric_part(const Mat& J) {
  check_antisymmetric(J);
  const int d = static_cast<int>(J.rows());
  // I - J^2 = I + J^T J is symmetric positive definite.
  Mat M = Mat::Identity(d, d) - J * J;
  M = 0.5 * (M + M.transpose());  // scrub rounding asymmetry
  ResolventSummary out;
  out.S = M.llt().solve(Mat::Identity(d, d));
  out.S = 0.5 * (out.S + out.S.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(out.S);
  out.eigenvalues = es.eigenvalues();  // ascending
  out.c = out.eigenvalues[0];
  out.C = out.eigenvalues[d - 1];
  return out;
}

}  // namespace skewflect

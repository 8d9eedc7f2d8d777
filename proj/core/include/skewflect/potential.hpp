#pragma once

// Negative log-densities f with exact gradients and conditionally unbiased
// minibatch stochastic gradients over a dataset.

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "skewflect/dataset.hpp"
#include "skewflect/rng.hpp"

namespace skewflect {

class Potential {
 public:
  enum class Kind { GaussianStandard, Quadratic, LinearRegression, LogisticRegression };

  // Empty (dim 0) placeholder; build real potentials with the factories below.
  Potential() = default;

  // f = |x|^2 / 2.
  static Potential gaussian_standard(int d);
  // f = x^T H x / 2 with symmetric H, so grad f = H x.
  static Potential quadratic(Mat H);
  // f = (1/2) sum_j (y_j - x.a_j)^2.
  static Potential linear_regression(std::shared_ptr<const Dataset> ds);
  // f = sum_j [softplus(beta.X_j) - y_j beta.X_j] + log V_d (uniform-ball
  // prior constant; zero gradient).
  static Potential logistic_regression(std::shared_ptr<const Dataset> ds);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  // Number of data terms f_j; 0 for potentials without a dataset.
  Eigen::Index data_size() const { return ds_ ? ds_->n() : 0; }
  const Dataset& dataset() const;
  double lipschitz() const { return lipschitz_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  // (n/b) * sum_{i in batch} grad f_i(x); unbiased for gradient() over
  // uniform batches.
  Vec stochastic_gradient(const Vec& x, const std::vector<Eigen::Index>& batch) const;

 private:
  Kind kind_ = Kind::GaussianStandard;
  int dim_ = 0;
  double lipschitz_ = 0.0;
  Mat H_;
  std::shared_ptr<const Dataset> ds_;
  double log_prior_const_ = 0.0;
};

// b distinct indices from {0..n-1}, uniform over size-b subsets
// (partial Fisher-Yates, sparse swap map).
std::vector<Eigen::Index> draw_minibatch(Eigen::Index n, Eigen::Index b, CounterRng& rng);

}  // namespace skewflect

#pragma once

// Evaluation: empirical per-dimension 1-Wasserstein distance, MSE and
// accuracy traces, and exponential-rate fitting.

#include <Eigen/Dense>
#include <vector>

#include "skewflect/dataset.hpp"
#include "skewflect/sampler.hpp"

namespace skewflect {

// Empirical W1 on the line. Equal sizes: mean |a_(i) - b_(i)| over sorted
// samples. Unequal: both quantile functions evaluated on the grid
// {(i-1/2)/m, i=1..m} with m = max size, averaged absolute differences.
double w1_1d(std::vector<double> a, std::vector<double> b);

struct W1Report {
  Vec per_dimension;
  Eigen::Index size_a = 0;
  Eigen::Index size_b = 0;
};

// Columnwise w1_1d; rows are samples.
W1Report w1_per_dim(const Mat& A, const Mat& B);

// MSE_k = (1/n) sum_j (y_j - x_k . a_j)^2 at each recorded iterate, averaged
// over chains.
std::vector<double> mse_trace(const ChainTrace& trace, const Dataset& ds);

// Fraction of j with 1{sigmoid(beta.X_j) >= 1/2} == y_j (ties predict 1).
double accuracy(const Vec& beta, const Dataset& ds);

struct ExpFit {
  double rate = 0.0;  // negated least-squares slope of log(values) vs times
  double r2 = 0.0;
};

// values are clipped at 1e-300 before the log; needs at least 3 points.
ExpFit fit_exp_rate(const std::vector<double>& values, const std::vector<double>& times);

}  // namespace skewflect

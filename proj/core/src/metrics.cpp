#include "skewflect/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skewflect {

namespace {

// Left-continuous empirical quantile: F^{-1}(p) = x_(ceil(n p)) on sorted x.
double quantile_sorted(const std::vector<double>& x, double p) {
  const auto n = static_cast<double>(x.size());
  auto idx = static_cast<std::ptrdiff_t>(std::ceil(n * p));
  idx = std::clamp<std::ptrdiff_t>(idx, 1, static_cast<std::ptrdiff_t>(x.size()));
  return x[static_cast<std::size_t>(idx - 1)];
}

}  // namespace

double w1_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() == b.size()) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
  }
  const std::size_t m = std::max(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(m);
    s += std::abs(quantile_sorted(a, p) - quantile_sorted(b, p));
  }
  return s / static_cast<double>(m);
}

W1Report w1_per_dim(const Mat& A, const Mat& B) {
  if (A.cols() != B.cols()) throw std::invalid_argument("dimension mismatch");
  W1Report rep;
  rep.size_a = A.rows();
  rep.size_b = B.rows();
  rep.per_dimension.resize(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    std::vector<double> a(A.col(j).data(), A.col(j).data() + A.rows());
    std::vector<double> b(B.col(j).data(), B.col(j).data() + B.rows());
    rep.per_dimension[j] = w1_1d(std::move(a), std::move(b));
  }
  return rep;
}

std::vector<double> mse_trace(const ChainTrace& trace, const Dataset& ds) {
  if (!trace.states.empty() && trace.states.front().cols() != ds.d())
    throw std::invalid_argument("dimension mismatch");
  // MSE(x) = (x.Gx - 2 h.x + y.y)/n with G = A^T A, h = A^T y.
  const Mat G = ds.features.transpose() * ds.features;
  const Vec h = ds.features.transpose() * ds.labels;
  const double yy = ds.labels.squaredNorm();
  const double n = static_cast<double>(ds.n());
  std::vector<double> out;
  out.reserve(trace.states.size());
  for (const Mat& S : trace.states) {
    double acc = 0.0;
    for (Eigen::Index c = 0; c < S.rows(); ++c) {
      const Vec x = S.row(c).transpose();
      acc += (x.dot(G * x) - 2.0 * h.dot(x) + yy) / n;
    }
    out.push_back(acc / static_cast<double>(S.rows()));
  }
  return out;
}

double accuracy(const Vec& beta, const Dataset& ds) {
  if (beta.size() != ds.d()) throw std::invalid_argument("dimension mismatch");
  const Vec z = ds.features * beta;
  Eigen::Index correct = 0;
  for (Eigen::Index j = 0; j < ds.n(); ++j) {
    // sigmoid(z) >= 1/2 iff z >= 0; the tie z == 0 predicts class 1
    const bool predict_one = z[j] >= 0.0;
    if (predict_one == (ds.labels[j] == 1.0)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.n());
}

ExpFit fit_exp_rate(const std::vector<double>& values, const std::vector<double>& times) {
  if (values.size() != times.size()) throw std::invalid_argument("length mismatch");
  if (values.size() < 3) throw std::invalid_argument("need at least 3 points");
  const auto n = static_cast<double>(values.size());
  double st = 0.0, sl = 0.0;
  std::vector<double> lw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    lw[i] = std::log(std::max(values[i], 1e-300));
    st += times[i];
    sl += lw[i];
  }
  const double tbar = st / n, lbar = sl / n;
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double dt = times[i] - tbar, dl = lw[i] - lbar;
    stt += dt * dt;
    stl += dt * dl;
    sll += dl * dl;
  }
  if (stt == 0.0) throw std::invalid_argument("degenerate times");
  const double slope = stl / stt;
  ExpFit fit;
  fit.rate = -slope;
  const double ss_res = sll - slope * stl;
  fit.r2 = (sll == 0.0) ? 1.0 : 1.0 - ss_res / sll;
  return fit;
}

}  // namespace skewflect

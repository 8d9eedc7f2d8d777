#include "skewflect/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace skewflect {

namespace {

double softplus(double z) {
  // log(1 + e^z) without overflow.
  return (z > 0.0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double spectral_norm_sym(const Mat& M) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// log volume of the unit ball in R^d.
double log_unit_ball_volume(int d) {
  return 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0);
}

}  // namespace

Potential Potential::gaussian_standard(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  Potential p;
  p.kind_ = Kind::GaussianStandard;
  p.dim_ = d;
  p.lipschitz_ = 1.0;
  return p;
}

Potential Potential::quadratic(Mat H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("H must be square");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("H must be symmetric");
  Potential p;
  p.kind_ = Kind::Quadratic;
  p.dim_ = static_cast<int>(H.rows());
  p.lipschitz_ = spectral_norm_sym(H);
  p.H_ = std::move(H);
  return p;
}

Potential Potential::linear_regression(std::shared_ptr<const Dataset> ds) {
  if (!ds || ds->n() < 1) throw std::invalid_argument("dataset required");
  Potential p;
  p.kind_ = Kind::LinearRegression;
  p.dim_ = static_cast<int>(ds->d());
  p.lipschitz_ = spectral_norm_sym(ds->features.transpose() * ds->features);
  p.ds_ = std::move(ds);
  return p;
}

Potential Potential::logistic_regression(std::shared_ptr<const Dataset> ds) {
  if (!ds || ds->n() < 1) throw std::invalid_argument("dataset required");
  Potential p;
  p.kind_ = Kind::LogisticRegression;
  p.dim_ = static_cast<int>(ds->d());
  // sigmoid' <= 1/4 gives Hessian <= X^T X / 4.
  p.lipschitz_ = 0.25 * spectral_norm_sym(ds->features.transpose() * ds->features);
  p.log_prior_const_ = log_unit_ball_volume(p.dim_);
  p.ds_ = std::move(ds);
  return p;
}

const Dataset& Potential::dataset() const {
  if (!ds_) throw std::logic_error("potential has no dataset");
  return *ds_;
}

double Potential::value(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("dimension mismatch");
  switch (kind_) {
    case Kind::GaussianStandard:
      return 0.5 * x.squaredNorm();
    case Kind::Quadratic:
      return 0.5 * x.dot(H_ * x);
    case Kind::LinearRegression:
      return 0.5 * (ds_->labels - ds_->features * x).squaredNorm();
    case Kind::LogisticRegression: {
      const Vec z = ds_->features * x;
      double v = log_prior_const_;
      for (Eigen::Index j = 0; j < z.size(); ++j)
        v += softplus(z[j]) - ds_->labels[j] * z[j];
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

Vec Potential::gradient(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("dimension mismatch");
  switch (kind_) {
    case Kind::GaussianStandard:
      return x;
    case Kind::Quadratic:
      return H_ * x;
    case Kind::LinearRegression:
      return ds_->features.transpose() * (ds_->features * x - ds_->labels);
    case Kind::LogisticRegression: {
      Vec z = ds_->features * x;
      for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = sigmoid(z[j]) - ds_->labels[j];
      return ds_->features.transpose() * z;
    }
  }
  throw std::logic_error("unreachable");
}

Vec Potential::stochastic_gradient(const Vec& x,
                                   const std::vector<Eigen::Index>& batch) const {
  if (x.size() != dim_) throw std::invalid_argument("dimension mismatch");
  if (!ds_) throw std::logic_error("stochastic gradient needs a dataset potential");
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const Eigen::Index n = ds_->n();
  Vec g = Vec::Zero(dim_);
  for (const Eigen::Index j : batch) {
    if (j < 0 || j >= n) throw std::out_of_range("batch index out of range");
    const double z = ds_->features.row(j).dot(x);
    const double w = (kind_ == Kind::LinearRegression)
                         ? (z - ds_->labels[j])
                         : (sigmoid(z) - ds_->labels[j]);
    g.noalias() += w * ds_->features.row(j).transpose();
  }
  const double scale = static_cast<double>(n) / static_cast<double>(batch.size());
  return scale * g;
}

std::vector<Eigen::Index> draw_minibatch(Eigen::Index n, Eigen::Index b, CounterRng& rng) {
  if (b < 1 || b > n) throw std::invalid_argument("batch size must satisfy 1 <= b <= n");
  // Partial Fisher-Yates over a virtual identity array: only displaced
  // entries are stored.
  std::unordered_map<Eigen::Index, Eigen::Index> moved;
  moved.reserve(static_cast<std::size_t>(2 * b));
  std::vector<Eigen::Index> out(static_cast<std::size_t>(b));
  for (Eigen::Index k = 0; k < b; ++k) {
    const auto r = k + static_cast<Eigen::Index>(
                           rng.uniform_below(static_cast<std::uint64_t>(n - k)));
    const auto it_r = moved.find(r);
    const Eigen::Index val_r = (it_r == moved.end()) ? r : it_r->second;
    const auto it_k = moved.find(k);
    const Eigen::Index val_k = (it_k == moved.end()) ? k : it_k->second;
    out[static_cast<std::size_t>(k)] = val_r;
    moved[r] = val_k;
  }
  return out;
}

}  // namespace skewflect

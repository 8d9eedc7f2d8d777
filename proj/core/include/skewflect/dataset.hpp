#pragma once

// Dataset ingestion, synthetic generators, preprocessing (Titanic pipeline,
// z-scoring), train/test splitting, and a bit-exact CSV round trip.

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "skewflect/geometry.hpp"

namespace skewflect {

struct Dataset {
  Mat features;  // n x d
  Vec labels;    // length n; {0,1} for classification
  std::vector<std::string> feature_names;

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index d() const { return features.cols(); }
};

// a_j ~ N(0, I_2), delta_j ~ N(0, 0.25), y_j = x_star . a_j + delta_j with
// x_star = [1, 1].
Dataset generate_linreg(Eigen::Index n, std::uint64_t seed);

// X_j ~ N(0, 2 I_d), p_j ~ U(0,1), y_j = 1{p_j <= sigmoid(beta_true . X_j)}.
Dataset generate_logreg(Eigen::Index n, const Vec& beta_true, std::uint64_t seed);

// MAGIC telescope: 10 numeric columns + class column; class g -> 1, h -> 0.
Dataset load_telescope(const std::string& path);

// Kaggle-format Titanic train.csv -> n=891, d=8 features
// [Pclass, Sex, Age, SibSp, Parch, Fare, Embarked_Q, Embarked_S];
// Sex male->1/female->0; missing Age -> median of observed; Embarked one-hot
// with C (and missing) as baseline; label = Survived.
Dataset preprocess_titanic(const std::string& path);

struct StandardizeResult {
  Dataset ds;
  Vec means;
  Vec stds;  // columns with std < 1e-12 are centered but not scaled
};

StandardizeResult standardize(const Dataset& ds);

// Seeded uniform permutation; train gets ceil(n*(1-test_fraction)) rows.
std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

// Canonical format: header row (feature names then "label"), then one row
// per datum with shortest round-trip number formatting. Reload is bit-exact.
void save_csv(const Dataset& ds, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace skewflect

#pragma once

// Declarative experiment configuration. Files are JSON; unspecified fields
// fall back to the per-experiment defaults applied by the harness.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "skewflect/geometry.hpp"
#include "skewflect/skew_field.hpp"

namespace skewflect {

// Raised for malformed or inconsistent configs (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;  // toy_gaussian | bayes_linreg | bayes_logreg | theory_check

  // Body: {"kind":"ball","center":[...],"radius":..} or
  // {"kind":"box","lower":[...],"upper":[...]}; absent -> experiment default.
  std::optional<ConvexBody> body;

  // Skew field: {"kind":"zero"} | {"kind":"tridiagonal","a":..} |
  // {"kind":"constant","matrix":[[..]]}. Dimension is resolved by the harness.
  std::string skew_kind = "tridiagonal";
  std::optional<double> skew_a;
  std::optional<Mat> skew_matrix;

  // Sampler parameters.
  std::optional<double> eta;
  std::optional<std::int64_t> iterations;
  std::optional<int> chains;
  std::optional<Eigen::Index> batch_size;
  std::optional<std::int64_t> record_every;
  std::optional<Vec> initial;   // "initial": [..] fixed start point
  bool initial_uniform = false;  // "initial": "uniform" given explicitly
  int workers = 0;

  // Data block.
  std::string data_kind;  // linreg | logreg | telescope | titanic | ""
  std::optional<Eigen::Index> data_n;
  std::optional<Vec> beta_true;
  std::string data_path;
  std::optional<std::uint64_t> data_seed;
  std::optional<double> test_fraction;
  std::optional<bool> standardize_features;

  std::vector<std::uint64_t> seeds;  // defaults to {1,2,3}
  std::string output_dir = "out";
  std::optional<Eigen::Index> reference_count;  // toy rejection sample size
  bool emit_svg = false;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig parse_experiment_config_file(const std::string& path);

}  // namespace skewflect

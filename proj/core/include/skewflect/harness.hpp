#pragma once

// The four experiment drivers. Each runs its protocol, writes CSV report
// files into cfg.output_dir, and returns an in-memory report so callers
// (CLI, acceptance tests) can inspect the numbers directly.

#include <cstdint>
#include <string>
#include <vector>

#include "skewflect/config.hpp"
#include "skewflect/dataset.hpp"
#include "skewflect/metrics.hpp"
#include "skewflect/potential.hpp"
#include "skewflect/sampler.hpp"

namespace skewflect {

struct ToyGaussianReport {
  struct Curve {
    std::string algorithm;  // "SRNLMC" | "PLMC"
    std::uint64_t seed = 0;
    std::vector<std::int64_t> iterations;
    std::vector<Vec> w1;  // per recorded iteration, per dimension
    Vec final_w1;
    Vec pooled_mean, pooled_var;  // post-burn-in pooled moments (20% discard)
    std::int64_t boundary_events = 0;
    std::int64_t fallback_count = 0;
    // Cumulative correction per unit physical time on [0,T/2] and [T/2,T].
    double corr_rate_first_half = 0.0;
    double corr_rate_second_half = 0.0;
  };
  std::vector<Curve> curves;
  Vec ref_mean, ref_var;  // rejection reference moments (last seed's reference)
};

ToyGaussianReport cmd_toy_gaussian(const ExperimentConfig& cfg);

struct LinregReport {
  struct Curve {
    std::string algorithm;  // "SRNSGLD" | "PSGLD"
    std::uint64_t seed = 0;
    std::vector<std::int64_t> iterations;
    std::vector<double> mse;
  };
  std::vector<Curve> curves;
};

LinregReport cmd_bayes_linreg(const ExperimentConfig& cfg);

struct LogregReport {
  std::vector<std::int64_t> iterations;
  struct Series {  // aggregated across seeds
    std::string algorithm;  // "SRNSGLD" | "PSGLD"
    std::string split;      // "train" | "test"
    std::vector<double> mean, stddev;
  };
  std::vector<Series> series;
  struct SeedCurve {  // per-seed train accuracy (speed comparisons)
    std::string algorithm;
    std::uint64_t seed = 0;
    std::vector<double> train_acc;
  };
  std::vector<SeedCurve> seed_curves;
  Vec oracle_beta;  // projected-gradient-descent optimum of f on the body
  double oracle_train_acc = 0.0;
  double oracle_test_acc = 0.0;
};

LogregReport cmd_bayes_logreg(const ExperimentConfig& cfg);

struct TheoryReport {
  struct Row {
    std::string label;  // "0" | "J1" | "J2"
    double predicted_rate = 0.0;  // 2 lambda_min(H) / C
    double fitted_rate = 0.0;
    double r2 = 0.0;
  };
  std::vector<Row> rows;
  std::int64_t sweep_trials = 0;
  std::int64_t sweep_violations = 0;
};

TheoryReport cmd_theory_check(const ExperimentConfig& cfg);

// Projected gradient descent on f over the body (step 1/L), run to
// displacement tolerance; the constrained-optimum oracle for accuracy checks.
Vec constrained_optimum_pgd(const Potential& p, const ConvexBody& body,
                            double tol = 1e-11, std::int64_t max_iters = 50000);

}  // namespace skewflect

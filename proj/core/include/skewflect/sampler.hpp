#pragma once

// Discrete-time samplers: SRNLMC, PLMC, SRNSGLD, PSGLD, the rejection
// reference, and the synchronously coupled pair for the quadratic
// contraction check. Chains run on a counter-based RNG keyed
// (seed, chain, step), so any degree of parallelism is bit-reproducible.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "skewflect/geometry.hpp"
#include "skewflect/potential.hpp"
#include "skewflect/skew_field.hpp"

namespace skewflect {

enum class Method {
  SkewReflected,      // SRNLMC / SRNSGLD
  ProjectedBaseline,  // PLMC / PSGLD (independent code path, ignores the field)
};

struct SamplerConfig {
  ConvexBody body;
  SkewField field;
  Potential potential;
  double eta = 1e-4;
  std::int64_t iterations = 0;
  int chains = 1;
  std::optional<Vec> initial;              // absent: uniform prior draw per chain
  std::optional<Eigen::Index> batch_size;  // present: stochastic-gradient variant
  std::uint64_t seed = 0;
  std::int64_t record_every = 50;
  Method method = Method::SkewReflected;
  int workers = 0;  // 0: hardware concurrency
};

// Throws std::invalid_argument on inconsistent configs (initial point outside
// the body, b > n, nonpositive eta/iterations, dimension mismatches).
void validate(const SamplerConfig& cfg);

struct StepResult {
  Vec x_next;
  double correction = 0.0;  // |x_tilde - x_next|, the discrete local-time proxy
  bool fallback = false;    // skew ray missed, Euclidean projection used
};

// x_tilde = x - eta (I + J(x)) grad f(x) + sqrt(2 eta) xi; x_next = skew proj.
StepResult srnlmc_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi);
// Reversible baseline: J = 0 drift, Euclidean projection.
StepResult plmc_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi);
// As srnlmc_step with the (n/b)-scaled minibatch gradient.
StepResult srnsgld_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi,
                        const std::vector<Eigen::Index>& batch);
// Baseline stochastic variant.
StepResult psgld_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi,
                      const std::vector<Eigen::Index>& batch);

struct ChainTrace {
  std::vector<std::int64_t> record_steps;  // iterations at which states were kept
  std::vector<Mat> states;                 // per record: chains x d
  Mat final_states;                        // chains x d
  // Per-step |x_tilde - x_next| summed over chains, and its running total.
  std::vector<double> correction_step;
  std::vector<double> correction_cum;
  std::int64_t boundary_events = 0;  // steps whose proposal left the body
  std::int64_t fallback_count = 0;   // skew-ray misses among those
  std::uint64_t rng_seed = 0;
};

ChainTrace run_chains(const SamplerConfig& cfg);

// count i.i.d. draws from the standard normal conditioned on the body.
// Throws after 1e8 proposals (body with negligible Gaussian mass).
Mat rejection_sample_truncated_gaussian(const ConvexBody& body, Eigen::Index count,
                                        std::uint64_t seed,
                                        std::int64_t* proposals_out = nullptr);

// Two SRNLMC chains driven by the same noise; returns the weighted squared
// distances w_k = v_k^T (I - J^2)^{-1} v_k, v_k = x_k - x_tilde_k, k = 0..K.
std::vector<double> coupled_pair_run(const Mat& H, const SkewField& field,
                                     const ConvexBody& body, double eta,
                                     std::int64_t K, std::uint64_t seed,
                                     const Vec& x0, const Vec& x0_tilde);

}  // namespace skewflect

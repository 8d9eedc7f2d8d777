#include "skewflect/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace skewflect {

namespace {

// Stream tags; chain streams start high so they never collide with the
// fixed-purpose streams used elsewhere.
enum : std::uint64_t {
  kRejectionStream = 202,
  kCoupledStream = 203,
  kChainStreamBase = 1ULL << 20,
};

constexpr int kChainBlock = 64;  // fixed reduction granularity, not a thread count

}  // namespace

void validate(const SamplerConfig& cfg) {
  const int d = cfg.body.dim();
  if (cfg.field.dim() != d) throw std::invalid_argument("field/body dimension mismatch");
  if (cfg.potential.dim() != d)
    throw std::invalid_argument("potential/body dimension mismatch");
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (cfg.chains < 1) throw std::invalid_argument("chains must be >= 1");
  if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (cfg.initial) {
    if (cfg.initial->size() != d) throw std::invalid_argument("initial point dimension mismatch");
    if (!cfg.body.contains(*cfg.initial))
      throw std::invalid_argument("initial point outside the body");
  }
  if (cfg.batch_size) {
    const Eigen::Index n = cfg.potential.data_size();
    if (n == 0) throw std::invalid_argument("batch_size requires a dataset potential");
    if (*cfg.batch_size < 1 || *cfg.batch_size > n)
      throw std::invalid_argument("batch size must satisfy 1 <= b <= n");
  }
}

StepResult srnlmc_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi) {
  const Mat& J = cfg.field.at(x);
  const Vec g = cfg.potential.gradient(x);
  const Vec drift = g + J * g;
  const Vec xt = x - cfg.eta * drift + std::sqrt(2.0 * cfg.eta) * xi;
  auto [xn, fb] = skew_project(cfg.body, cfg.field, xt);
  const double corr = (xt - xn).norm();
  return {std::move(xn), corr, fb};
}

StepResult plmc_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi) {
  const Vec g = cfg.potential.gradient(x);
  const Vec xt = x - cfg.eta * g + std::sqrt(2.0 * cfg.eta) * xi;
  Vec xn = cfg.body.project(xt);
  const double corr = (xt - xn).norm();
  return {std::move(xn), corr, false};
}

StepResult srnsgld_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi,
                        const std::vector<Eigen::Index>& batch) {
  const Mat& J = cfg.field.at(x);
  const Vec g = cfg.potential.stochastic_gradient(x, batch);
  const Vec drift = g + J * g;
  const Vec xt = x - cfg.eta * drift + std::sqrt(2.0 * cfg.eta) * xi;
  auto [xn, fb] = skew_project(cfg.body, cfg.field, xt);
  const double corr = (xt - xn).norm();
  return {std::move(xn), corr, fb};
}

StepResult psgld_step(const SamplerConfig& cfg, const Vec& x, const Vec& xi,
                      const std::vector<Eigen::Index>& batch) {
  const Vec g = cfg.potential.stochastic_gradient(x, batch);
  const Vec xt = x - cfg.eta * g + std::sqrt(2.0 * cfg.eta) * xi;
  Vec xn = cfg.body.project(xt);
  const double corr = (xt - xn).norm();
  return {std::move(xn), corr, false};
}

ChainTrace run_chains(const SamplerConfig& cfg) {
  validate(cfg);
  const int d = cfg.body.dim();
  const std::int64_t K = cfg.iterations;
  const bool stochastic = cfg.batch_size.has_value();
  const Eigen::Index n_data = cfg.potential.data_size();

  ChainTrace trace;
  trace.rng_seed = cfg.seed;
  for (std::int64_t k = cfg.record_every; k <= K; k += cfg.record_every)
    trace.record_steps.push_back(k);
  if (K >= 1 && (trace.record_steps.empty() || trace.record_steps.back() != K))
    trace.record_steps.push_back(K);
  // step -> record slot (or -1)
  std::vector<std::int64_t> slot_of_step(static_cast<std::size_t>(K) + 1, -1);
  for (std::size_t s = 0; s < trace.record_steps.size(); ++s)
    slot_of_step[static_cast<std::size_t>(trace.record_steps[s])] =
        static_cast<std::int64_t>(s);

  trace.states.assign(trace.record_steps.size(), Mat(cfg.chains, d));
  trace.final_states.resize(cfg.chains, d);
  trace.correction_step.assign(static_cast<std::size_t>(K), 0.0);
  trace.correction_cum.assign(static_cast<std::size_t>(K), 0.0);

  const int n_blocks = (cfg.chains + kChainBlock - 1) / kChainBlock;
  std::vector<std::vector<double>> block_corr(static_cast<std::size_t>(n_blocks));
  std::vector<std::int64_t> block_boundary(static_cast<std::size_t>(n_blocks), 0);
  std::vector<std::int64_t> block_fallback(static_cast<std::size_t>(n_blocks), 0);
  std::vector<std::exception_ptr> block_error(static_cast<std::size_t>(n_blocks));

  auto run_block = [&](int blk) {
    auto& corr = block_corr[static_cast<std::size_t>(blk)];
    corr.assign(static_cast<std::size_t>(K), 0.0);
    const int c_begin = blk * kChainBlock;
    const int c_end = std::min(cfg.chains, c_begin + kChainBlock);
    for (int c = c_begin; c < c_end; ++c) {
      CounterRng chain_rng(cfg.seed, kChainStreamBase + static_cast<std::uint64_t>(c));
      Vec x;
      if (cfg.initial) {
        x = *cfg.initial;
      } else {
        auto init_rng = chain_rng.substream(0);
        x = cfg.body.sample_uniform(init_rng);
      }
      Vec xi(d);
      std::int64_t step = 0;
      try {
        for (std::int64_t k = 1; k <= K; ++k) {
          step = k;
          auto sr = chain_rng.substream(static_cast<std::uint64_t>(k));
          for (int i = 0; i < d; ++i) xi[i] = sr.normal();
          StepResult res;
          if (stochastic) {
            const auto batch = draw_minibatch(n_data, *cfg.batch_size, sr);
            res = (cfg.method == Method::SkewReflected)
                      ? srnsgld_step(cfg, x, xi, batch)
                      : psgld_step(cfg, x, xi, batch);
          } else {
            res = (cfg.method == Method::SkewReflected) ? srnlmc_step(cfg, x, xi)
                                                        : plmc_step(cfg, x, xi);
          }
          x = std::move(res.x_next);
          if (res.correction > 0.0) {
            corr[static_cast<std::size_t>(k - 1)] += res.correction;
            ++block_boundary[static_cast<std::size_t>(blk)];
          }
          if (res.fallback) ++block_fallback[static_cast<std::size_t>(blk)];
          if (const auto s = slot_of_step[static_cast<std::size_t>(k)]; s >= 0)
            trace.states[static_cast<std::size_t>(s)].row(c) = x.transpose();
        }
      } catch (const std::exception& e) {
        throw std::runtime_error("chain " + std::to_string(c) + " step " +
                                 std::to_string(step) + ": " + e.what());
      }
      trace.final_states.row(c) = x.transpose();
    }
  };

  int workers = cfg.workers > 0
                    ? cfg.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n_blocks));

  if (workers == 1) {
    for (int blk = 0; blk < n_blocks; ++blk) run_block(blk);
  } else {
    std::atomic<int> next_block{0};
    auto worker = [&]() {
      for (;;) {
        const int blk = next_block.fetch_add(1);
        if (blk >= n_blocks) return;
        try {
          run_block(blk);
        } catch (...) {
          block_error[static_cast<std::size_t>(blk)] = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& err : block_error)
      if (err) std::rethrow_exception(err);
  }

  // Reduce per-block partials in block order: bitwise independent of the
  // worker count.
  double running = 0.0;
  for (std::int64_t k = 0; k < K; ++k) {
    double s = 0.0;
    for (int blk = 0; blk < n_blocks; ++blk)
      s += block_corr[static_cast<std::size_t>(blk)][static_cast<std::size_t>(k)];
    trace.correction_step[static_cast<std::size_t>(k)] = s;
    running += s;
    trace.correction_cum[static_cast<std::size_t>(k)] = running;
  }
  for (int blk = 0; blk < n_blocks; ++blk) {
    trace.boundary_events += block_boundary[static_cast<std::size_t>(blk)];
    trace.fallback_count += block_fallback[static_cast<std::size_t>(blk)];
  }
  return trace;
}

Mat rejection_sample_truncated_gaussian(const ConvexBody& body, Eigen::Index count,
                                        std::uint64_t seed,
                                        std::int64_t* proposals_out) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  constexpr std::int64_t kCap = 100000000;  // 1e8 proposal safety cap
  const int d = body.dim();
  Mat out(count, d);
  CounterRng rng(seed, kRejectionStream);
  Vec x(d);
  std::int64_t proposals = 0;
  for (Eigen::Index i = 0; i < count;) {
    if (++proposals > kCap)
      throw std::runtime_error(
          "rejection sampling exceeded 1e8 proposals; the body has negligible "
          "Gaussian mass");
    for (int j = 0; j < d; ++j) x[j] = rng.normal();
    if (body.contains(x)) {
      out.row(i) = x.transpose();
      ++i;
    }
  }
  if (proposals_out) *proposals_out = proposals;
  return out;
}

std::vector<double> coupled_pair_run(const Mat& H, const SkewField& field,
                                     const ConvexBody& body, double eta,
                                     std::int64_t K, std::uint64_t seed,
                                     const Vec& x0, const Vec& x0_tilde) {
  if (!body.contains(x0) || !body.contains(x0_tilde))
    throw std::invalid_argument("coupled pair must start inside the body");
  SamplerConfig cfg;
  cfg.body = body;
  cfg.field = field;
  cfg.potential = Potential::quadratic(H);
  cfg.eta = eta;
  cfg.iterations = K;
  validate(cfg);

  const int d = body.dim();
  const Mat& J = field.at(x0);
  Mat M = Mat::Identity(d, d) - J * J;
  M = 0.5 * (M + M.transpose());
  const Eigen::LLT<Mat> llt(M);  // weighted norm via solves against I - J^2

  auto weighted = [&](const Vec& v) { return v.dot(llt.solve(v)); };

  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(K) + 1);
  Vec x = x0, xt = x0_tilde, xi(d);
  w.push_back(weighted(x - xt));
  CounterRng base(seed, kCoupledStream);
  for (std::int64_t k = 1; k <= K; ++k) {
    auto sr = base.substream(static_cast<std::uint64_t>(k));
    for (int i = 0; i < d; ++i) xi[i] = sr.normal();
    x = srnlmc_step(cfg, x, xi).x_next;   // same xi: synchronous coupling
    xt = srnlmc_step(cfg, xt, xi).x_next;
    w.push_back(weighted(x - xt));
  }
  return w;
}

}  // namespace skewflect

#include "skewflect/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>

#include "num_format.hpp"

namespace skewflect {

using detail::format_double;

namespace {

enum : std::uint64_t { kBetaTrueStream = 104, kSweepStream = 301 };

std::ofstream open_report(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

// ---- minimal SVG polyline plotter (optional output) ----

struct SvgSeries {
  std::string label;
  std::vector<double> xs, ys;
};

void svg_plot(const ExperimentConfig& cfg, const std::string& name,
              const std::string& title, const std::vector<SvgSeries>& series) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#ff7f0e", "#9467bd", "#8c564b"};
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double x : s.xs) { xmin = std::min(xmin, x); xmax = std::max(xmax, x); }
    for (double y : s.ys) { ymin = std::min(ymin, y); ymax = std::max(ymax, y); }
  }
  if (!std::isfinite(xmin)) { xmin = 0.0; ymin = 0.0; }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double W = 800, H = 500, L = 60, B = 40, T = 30, R = 20;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - B - T); };
  auto out = open_report(cfg, name);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << title << "</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
      << H - B << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    out << "<polyline fill=\"none\" stroke=\"" << kColors[i % 6] << "\" points=\"";
    for (std::size_t k = 0; k < s.xs.size(); ++k)
      out << px(s.xs[k]) << ',' << py(s.ys[k]) << ' ';
    out << "\"/>\n<text x=\"" << W - R - 150 << "\" y=\"" << T + 18 * (i + 1)
        << "\" fill=\"" << kColors[i % 6] << "\" font-family=\"sans-serif\" font-size=\"13\">"
        << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

// ---- shared experiment plumbing ----

SkewField make_field(const ExperimentConfig& cfg, int d, double default_a) {
  if (cfg.skew_kind == "zero") return SkewField::zero(d);
  if (cfg.skew_kind == "constant") {
    if (!cfg.skew_matrix) throw ConfigError("constant skew field needs a matrix");
    if (cfg.skew_matrix->rows() != d)
      throw ConfigError("skew matrix dimension mismatch");
    return SkewField::constant(*cfg.skew_matrix);
  }
  return SkewField::tridiagonal(d, cfg.skew_a.value_or(default_a));
}

SamplerConfig base_sampler_config(const ExperimentConfig& cfg, ConvexBody body,
                                  SkewField field, Potential potential) {
  SamplerConfig sc;
  sc.body = std::move(body);
  sc.field = std::move(field);
  sc.potential = std::move(potential);
  sc.workers = cfg.workers;
  return sc;
}

Vec pooled_mean(const std::vector<const Mat*>& blocks) {
  Vec m = Vec::Zero(blocks.front()->cols());
  double rows = 0.0;
  for (const Mat* b : blocks) {
    m += b->colwise().sum().transpose();
    rows += static_cast<double>(b->rows());
  }
  return m / rows;
}

Vec pooled_var(const std::vector<const Mat*>& blocks, const Vec& mean) {
  Vec v = Vec::Zero(mean.size());
  double rows = 0.0;
  for (const Mat* b : blocks) {
    v += (b->rowwise() - mean.transpose()).array().square().colwise().sum().matrix().transpose();
    rows += static_cast<double>(b->rows());
  }
  return v / rows;
}

}  // namespace

Vec constrained_optimum_pgd(const Potential& p, const ConvexBody& body, double tol,
                            std::int64_t max_iters) {
  const double gamma = 1.0 / std::max(p.lipschitz(), 1e-12);
  Vec x = Vec::Zero(body.dim());  // bodies contain the origin by construction
  for (std::int64_t it = 0; it < max_iters; ++it) {
    Vec xn = body.project(x - gamma * p.gradient(x));
    const double move = (xn - x).norm();
    x = std::move(xn);
    if (move <= tol) break;
  }
  return x;
}

// ---- toy truncated Gaussian ----

ToyGaussianReport cmd_toy_gaussian(const ExperimentConfig& cfg) {
  ConvexBody body = cfg.body ? *cfg.body : ConvexBody::ball(Vec::Zero(3), 1.0);
  const int d = body.dim();
  const bool is_box = body.kind() == ConvexBody::Kind::AxisBox;
  SkewField field = make_field(cfg, d, is_box ? 2.0 : 1.0);

  SamplerConfig sc = base_sampler_config(cfg, body, field, Potential::gaussian_standard(d));
  sc.eta = cfg.eta.value_or(1e-4);
  sc.iterations = cfg.iterations.value_or(5000);
  sc.chains = cfg.chains.value_or(3000);
  sc.record_every = cfg.record_every.value_or(50);
  if (cfg.initial) {
    sc.initial = *cfg.initial;
  } else if (!cfg.initial_uniform) {
    if (d != 3) throw ConfigError("default toy initial point needs d=3; give initial");
    Vec x0(3);
    if (is_box) x0 << 0.5, -0.2, 0.8; else x0 << 0.3, 0.6, -0.4;
    sc.initial = x0;
  }

  const Eigen::Index ref_count = cfg.reference_count.value_or(3000);
  ToyGaussianReport rep;

  auto w1_csv = open_report(cfg, "w1_curve.csv");
  w1_csv << "iteration,algorithm,dim,w1,seed\n";
  auto summary_csv = open_report(cfg, "final_summary.csv");
  summary_csv << "algorithm,dim,mean,var,seed\n";

  for (const std::uint64_t seed : cfg.seeds) {
    const Mat reference = rejection_sample_truncated_gaussian(body, ref_count, seed);
    rep.ref_mean = reference.colwise().mean().transpose();
    rep.ref_var =
        (reference.rowwise() - rep.ref_mean.transpose()).array().square().colwise().sum()
            .matrix().transpose() / static_cast<double>(reference.rows());

    const std::pair<const char*, Method> kAlgs[] = {
        {"SRNLMC", Method::SkewReflected}, {"PLMC", Method::ProjectedBaseline}};
    for (const auto& [alg, method] : kAlgs) {
      SamplerConfig run_cfg = sc;
      run_cfg.method = method;
      run_cfg.seed = seed;
      const ChainTrace trace = run_chains(run_cfg);

      ToyGaussianReport::Curve curve;
      curve.algorithm = alg;
      curve.seed = seed;
      curve.iterations = trace.record_steps;
      curve.boundary_events = trace.boundary_events;
      curve.fallback_count = trace.fallback_count;
      for (std::size_t i = 0; i < trace.states.size(); ++i) {
        const auto w1 = w1_per_dim(trace.states[i], reference).per_dimension;
        curve.w1.push_back(w1);
        for (Eigen::Index dim = 0; dim < d; ++dim) {
          w1_csv << trace.record_steps[i] << ',' << alg << ',' << dim + 1 << ','
                 << format_double(w1[dim]) << ',' << seed << '\n';
        }
      }
      curve.final_w1 = curve.w1.back();

      // post-burn-in pooling (drop the first 20% of iterations)
      const auto burn = static_cast<std::int64_t>(0.2 * static_cast<double>(sc.iterations));
      std::vector<const Mat*> kept;
      for (std::size_t i = 0; i < trace.states.size(); ++i)
        if (trace.record_steps[i] > burn) kept.push_back(&trace.states[i]);
      curve.pooled_mean = pooled_mean(kept);
      curve.pooled_var = pooled_var(kept, curve.pooled_mean);

      // local-time halves diagnostic (physical time T = K eta)
      const std::size_t K = trace.correction_cum.size();
      if (K >= 2) {
        const double half_T = 0.5 * static_cast<double>(K) * sc.eta;
        const double first = trace.correction_cum[K / 2 - 1];
        const double second = trace.correction_cum[K - 1] - first;
        curve.corr_rate_first_half = first / half_T;
        curve.corr_rate_second_half = second / half_T;
      }

      const Vec fmean = trace.final_states.colwise().mean().transpose();
      for (Eigen::Index dim = 0; dim < d; ++dim) {
        const double var =
            (trace.final_states.col(dim).array() - fmean[dim]).square().sum() /
            static_cast<double>(trace.final_states.rows());
        summary_csv << alg << ',' << dim + 1 << ',' << format_double(fmean[dim]) << ','
                    << format_double(var) << ',' << seed << '\n';
      }
      rep.curves.push_back(std::move(curve));
    }
  }

  if (cfg.emit_svg) {
    std::vector<SvgSeries> series;
    for (const auto& c : rep.curves) {
      if (c.seed != cfg.seeds.front()) continue;
      for (Eigen::Index dim = 0; dim < d; ++dim) {
        SvgSeries s;
        s.label = c.algorithm + " dim " + std::to_string(dim + 1);
        for (std::size_t i = 0; i < c.iterations.size(); ++i) {
          s.xs.push_back(static_cast<double>(c.iterations[i]));
          s.ys.push_back(c.w1[i][dim]);
        }
        series.push_back(std::move(s));
      }
    }
    svg_plot(cfg, "w1_curve.svg", "per-dimension W1 vs rejection reference", series);
  }
  return rep;
}

// ---- Bayesian linear regression on the unit disk ----

LinregReport cmd_bayes_linreg(const ExperimentConfig& cfg) {
  const auto n = cfg.data_n.value_or(10000);
  const std::uint64_t data_seed = cfg.data_seed.value_or(9001);
  auto ds = std::make_shared<const Dataset>(generate_linreg(n, data_seed));

  ConvexBody body = cfg.body ? *cfg.body : ConvexBody::ball(Vec::Zero(2), 1.0);
  const int d = body.dim();
  SkewField field = make_field(cfg, d, 2.0);

  SamplerConfig sc = base_sampler_config(cfg, body, field, Potential::linear_regression(ds));
  sc.eta = cfg.eta.value_or(1e-4);
  sc.iterations = cfg.iterations.value_or(600);
  sc.chains = cfg.chains.value_or(200);
  sc.record_every = cfg.record_every.value_or(1);
  sc.batch_size = cfg.batch_size.value_or(50);
  if (cfg.initial) sc.initial = *cfg.initial;  // default: uniform prior

  LinregReport rep;
  auto mse_csv = open_report(cfg, "mse_curve.csv");
  mse_csv << "iteration,algorithm,mse,seed\n";
  auto scatter_csv = open_report(cfg, "posterior_scatter.csv");
  scatter_csv << "algorithm,seed,chain";
  for (int i = 0; i < d; ++i) scatter_csv << ",x" << i + 1;
  scatter_csv << '\n';

  for (const std::uint64_t seed : cfg.seeds) {
    const std::pair<const char*, Method> kAlgs[] = {
        {"SRNSGLD", Method::SkewReflected}, {"PSGLD", Method::ProjectedBaseline}};
    for (const auto& [alg, method] : kAlgs) {
      SamplerConfig run_cfg = sc;
      run_cfg.method = method;
      run_cfg.seed = seed;
      const ChainTrace trace = run_chains(run_cfg);

      LinregReport::Curve curve;
      curve.algorithm = alg;
      curve.seed = seed;
      curve.iterations = trace.record_steps;
      curve.mse = mse_trace(trace, *ds);
      for (std::size_t i = 0; i < curve.mse.size(); ++i)
        mse_csv << curve.iterations[i] << ',' << alg << ',' << format_double(curve.mse[i])
                << ',' << seed << '\n';
      for (Eigen::Index c = 0; c < trace.final_states.rows(); ++c) {
        scatter_csv << alg << ',' << seed << ',' << c;
        for (int i = 0; i < d; ++i)
          scatter_csv << ',' << format_double(trace.final_states(c, i));
        scatter_csv << '\n';
      }
      rep.curves.push_back(std::move(curve));
    }
  }

  if (cfg.emit_svg) {
    std::vector<SvgSeries> series;
    for (const auto& c : rep.curves) {
      if (c.seed != cfg.seeds.front()) continue;
      SvgSeries s;
      s.label = c.algorithm;
      for (std::size_t i = 0; i < c.iterations.size(); ++i) {
        s.xs.push_back(static_cast<double>(c.iterations[i]));
        s.ys.push_back(c.mse[i]);
      }
      series.push_back(std::move(s));
    }
    svg_plot(cfg, "mse_curve.svg", "MSE trace", series);
  }
  return rep;
}

// ---- Bayesian logistic regression on the unit ball ----

LogregReport cmd_bayes_logreg(const ExperimentConfig& cfg) {
  const std::string kind = cfg.data_kind.empty() ? "logreg" : cfg.data_kind;
  const std::uint64_t data_seed = cfg.data_seed.value_or(9001);

  Dataset full;
  std::int64_t default_iters = 1000;
  Eigen::Index default_batch = 50;
  double default_a = 2.0;
  bool default_standardize = false;
  if (kind == "logreg") {
    Vec beta_true;
    if (cfg.beta_true) {
      beta_true = *cfg.beta_true;
    } else {
      const int d0 = 3;
      CounterRng rng(data_seed, kBetaTrueStream);
      beta_true = ConvexBody::ball(Vec::Zero(d0), 1.0).sample_uniform(rng);
    }
    full = generate_logreg(cfg.data_n.value_or(2000), beta_true, data_seed);
  } else if (kind == "telescope") {
    full = load_telescope(cfg.data_path);
    default_batch = 100;
    default_a = 1.5;
    default_standardize = true;
  } else if (kind == "titanic") {
    full = preprocess_titanic(cfg.data_path);
    default_iters = 1500;
    default_a = 2.0;
    default_standardize = true;
  } else {
    throw ConfigError("bayes_logreg needs data kind logreg, telescope, or titanic");
  }

  if (cfg.standardize_features.value_or(default_standardize))
    full = standardize(full).ds;
  auto [train_d, test_d] =
      train_test_split(full, cfg.test_fraction.value_or(0.2), data_seed);
  auto train = std::make_shared<const Dataset>(std::move(train_d));
  auto test = std::make_shared<const Dataset>(std::move(test_d));

  const int d = static_cast<int>(train->d());
  ConvexBody body = cfg.body ? *cfg.body : ConvexBody::ball(Vec::Zero(d), 1.0);
  SkewField field = make_field(cfg, d, default_a);
  Potential pot = Potential::logistic_regression(train);

  SamplerConfig sc = base_sampler_config(cfg, body, field, pot);
  sc.eta = cfg.eta.value_or(1e-4);
  sc.iterations = cfg.iterations.value_or(default_iters);
  sc.chains = cfg.chains.value_or(50);
  sc.record_every = cfg.record_every.value_or(10);
  sc.batch_size = cfg.batch_size.value_or(default_batch);
  if (cfg.initial) sc.initial = *cfg.initial;  // default: uniform prior

  LogregReport rep;
  rep.oracle_beta = constrained_optimum_pgd(pot, body);
  rep.oracle_train_acc = accuracy(rep.oracle_beta, *train);
  rep.oracle_test_acc = accuracy(rep.oracle_beta, *test);

  // acc[alg][split][seed][record]
  const std::array<std::string, 2> algs = {"SRNSGLD", "PSGLD"};
  const std::array<std::string, 2> splits = {"train", "test"};
  std::vector<std::vector<std::vector<std::vector<double>>>> acc(
      2, std::vector<std::vector<std::vector<double>>>(
             2, std::vector<std::vector<double>>(cfg.seeds.size())));

  for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
    for (int ai = 0; ai < 2; ++ai) {
      SamplerConfig run_cfg = sc;
      run_cfg.method = (ai == 0) ? Method::SkewReflected : Method::ProjectedBaseline;
      run_cfg.seed = cfg.seeds[si];
      const ChainTrace trace = run_chains(run_cfg);
      if (rep.iterations.empty()) rep.iterations = trace.record_steps;

      LogregReport::SeedCurve sc_curve;
      sc_curve.algorithm = algs[static_cast<std::size_t>(ai)];
      sc_curve.seed = cfg.seeds[si];
      for (const Mat& S : trace.states) {
        double mean_train = 0.0, mean_test = 0.0;
        for (Eigen::Index c = 0; c < S.rows(); ++c) {
          const Vec beta = S.row(c).transpose();
          mean_train += accuracy(beta, *train);
          mean_test += accuracy(beta, *test);
        }
        mean_train /= static_cast<double>(S.rows());
        mean_test /= static_cast<double>(S.rows());
        acc[static_cast<std::size_t>(ai)][0][si].push_back(mean_train);
        acc[static_cast<std::size_t>(ai)][1][si].push_back(mean_test);
        sc_curve.train_acc.push_back(mean_train);
      }
      rep.seed_curves.push_back(std::move(sc_curve));
    }
  }

  auto acc_csv = open_report(cfg, "accuracy_curve.csv");
  acc_csv << "iteration,algorithm,split,mean,std,seeds\n";
  const auto n_seeds = static_cast<double>(cfg.seeds.size());
  for (std::size_t ai = 0; ai < 2; ++ai) {
    for (std::size_t pi = 0; pi < 2; ++pi) {
      LogregReport::Series series;
      series.algorithm = algs[ai];
      series.split = splits[pi];
      for (std::size_t r = 0; r < rep.iterations.size(); ++r) {
        double m = 0.0;
        for (std::size_t si = 0; si < cfg.seeds.size(); ++si) m += acc[ai][pi][si][r];
        m /= n_seeds;
        double sd = 0.0;
        if (cfg.seeds.size() > 1) {
          for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
            sd += (acc[ai][pi][si][r] - m) * (acc[ai][pi][si][r] - m);
          sd = std::sqrt(sd / (n_seeds - 1.0));  // sample std across seeds
        }
        series.mean.push_back(m);
        series.stddev.push_back(sd);
        acc_csv << rep.iterations[r] << ',' << series.algorithm << ',' << series.split
                << ',' << format_double(m) << ',' << format_double(sd) << ','
                << cfg.seeds.size() << '\n';
      }
      rep.series.push_back(std::move(series));
    }
  }

  if (cfg.emit_svg) {
    std::vector<SvgSeries> series;
    for (const auto& s : rep.series) {
      SvgSeries sv;
      sv.label = s.algorithm + " " + s.split;
      for (std::size_t r = 0; r < rep.iterations.size(); ++r) {
        sv.xs.push_back(static_cast<double>(rep.iterations[r]));
        sv.ys.push_back(s.mean[r]);
      }
      series.push_back(std::move(sv));
    }
    svg_plot(cfg, "accuracy_curve.svg", "mean accuracy across seeds", series);
  }
  return rep;
}

// ---- matrix lemma sweep + quadratic contraction table ----

namespace {

// Real eigenvector of A whose eigenvalue has the smallest real part among the
// (numerically) real eigenvalues; the slowest pure-decay mode of v' = -A v.
Vec slowest_real_mode(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A);
  int best = -1;
  double best_re = std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.rows(); ++i) {
    const auto lam = es.eigenvalues()[i];
    if (std::abs(lam.imag()) < 1e-9 && lam.real() < best_re) {
      best_re = lam.real();
      best = i;
    }
  }
  if (best < 0) throw std::logic_error("no real eigenvalue found");
  Vec v = es.eigenvectors().col(best).real();
  v.normalize();
  return v;
}

}  // namespace

TheoryReport cmd_theory_check(const ExperimentConfig& cfg) {
  TheoryReport rep;

  // (i) eigenvalue sweep of S over random antisymmetric J, d in {2..10}
  CounterRng sweep_rng(cfg.seeds.front(), kSweepStream);
  rep.sweep_trials = 1000;
  for (std::int64_t t = 0; t < rep.sweep_trials; ++t) {
    const int d = 2 + static_cast<int>(t % 9);
    Mat J = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double u = -3.0 + 6.0 * sweep_rng.uniform();
        J(i, j) = u;
        J(j, i) = -u;
      }
    }
    const auto res = resolvent_symmetric_part(J);
    if (res.c <= 0.0 || res.C > 1.0 + 1e-10) ++rep.sweep_violations;
  }

  // (ii) coupled-pair contraction on H = diag(1,2,3), radius-5 ball
  Mat H = Vec::LinSpaced(3, 1.0, 3.0).asDiagonal();
  const ConvexBody body = ConvexBody::ball(Vec::Zero(3), 5.0);
  const double eta = cfg.eta.value_or(1e-4);
  const std::int64_t K = cfg.iterations.value_or(20000);
  const double lambda_min = 1.0;

  auto table_csv = open_report(cfg, "contraction_table.csv");
  table_csv << "J,predicted_rate,fitted_rate,r2\n";
  auto sweep_csv = open_report(cfg, "matrix_sweep.csv");
  sweep_csv << "trials,violations\n"
            << rep.sweep_trials << ',' << rep.sweep_violations << '\n';

  const std::pair<const char*, SkewField> kRows[] = {
      {"0", SkewField::zero(3)},
      {"J1", SkewField::tridiagonal(3, 1.0)},
      {"J2", SkewField::tridiagonal(3, 2.0)}};
  for (const auto& [label, field] : kRows) {
    const auto res = resolvent_symmetric_part(field.at(Vec::Zero(3)));
    const double predicted = 2.0 * lambda_min / res.C;

    const Vec v = slowest_real_mode((Mat::Identity(3, 3) + field.at(Vec::Zero(3))) * H);
    const std::vector<double> w =
        coupled_pair_run(H, field, body, eta, K, cfg.seeds.front(), 0.5 * v, -0.5 * v);
    std::vector<double> times(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) times[k] = static_cast<double>(k) * eta;
    const ExpFit fit = fit_exp_rate(w, times);

    rep.rows.push_back({label, predicted, fit.rate, fit.r2});
    table_csv << label << ',' << format_double(predicted) << ','
              << format_double(fit.rate) << ',' << format_double(fit.r2) << '\n';
  }
  return rep;
}

}  // namespace skewflect

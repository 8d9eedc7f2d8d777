#include "skewflect/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace skewflect {

namespace {

using nlohmann::json;

Vec to_vec(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw ConfigError(what + " must be an array");
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ConfigError(what + " must be numeric");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

Mat to_mat(const json& arr, const std::string& what) {
  if (!arr.is_array() || arr.empty()) throw ConfigError(what + " must be a matrix");
  const std::size_t rows = arr.size();
  const std::size_t cols = arr[0].is_array() ? arr[0].size() : 0;
  if (cols == 0) throw ConfigError(what + " must be a matrix");
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!arr[i].is_array() || arr[i].size() != cols)
      throw ConfigError(what + " rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = arr[i][j].get<double>();
  }
  return m;
}

ConvexBody parse_body(const json& b) {
  const std::string kind = b.value("kind", "");
  if (kind == "ball") {
    if (!b.contains("radius")) throw ConfigError("ball body needs a radius");
    const double radius = b["radius"].get<double>();
    Vec center;
    if (b.contains("center")) {
      center = to_vec(b["center"], "body.center");
    } else if (b.contains("dim")) {
      center = Vec::Zero(b["dim"].get<int>());
    } else {
      throw ConfigError("ball body needs center or dim");
    }
    return ConvexBody::ball(std::move(center), radius);
  }
  if (kind == "box") {
    if (!b.contains("lower") || !b.contains("upper"))
      throw ConfigError("box body needs lower and upper");
    return ConvexBody::box(to_vec(b["lower"], "body.lower"), to_vec(b["upper"], "body.upper"));
  }
  throw ConfigError("unknown body kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  if (!j.contains("experiment") || !j["experiment"].is_string())
    throw ConfigError("config needs an 'experiment' string");
  cfg.experiment = j["experiment"].get<std::string>();
  static const char* kKnown[] = {"toy_gaussian", "bayes_linreg", "bayes_logreg",
                                 "theory_check"};
  if (std::find(std::begin(kKnown), std::end(kKnown), cfg.experiment) == std::end(kKnown))
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");

  try {
    if (j.contains("body")) cfg.body = parse_body(j["body"]);

    if (j.contains("skew")) {
      const json& s = j["skew"];
      cfg.skew_kind = s.value("kind", "tridiagonal");
      if (cfg.skew_kind != "zero" && cfg.skew_kind != "tridiagonal" &&
          cfg.skew_kind != "constant")
        throw ConfigError("unknown skew kind '" + cfg.skew_kind + "'");
      if (s.contains("a")) cfg.skew_a = s["a"].get<double>();
      if (s.contains("matrix")) cfg.skew_matrix = to_mat(s["matrix"], "skew.matrix");
      if (cfg.skew_kind == "constant" && !cfg.skew_matrix)
        throw ConfigError("constant skew field needs a matrix");
    }

    if (j.contains("sampler")) {
      const json& s = j["sampler"];
      if (s.contains("eta")) cfg.eta = s["eta"].get<double>();
      if (s.contains("iterations")) cfg.iterations = s["iterations"].get<std::int64_t>();
      if (s.contains("chains")) cfg.chains = s["chains"].get<int>();
      if (s.contains("batch_size"))
        cfg.batch_size = s["batch_size"].get<Eigen::Index>();
      if (s.contains("record_every"))
        cfg.record_every = s["record_every"].get<std::int64_t>();
      if (s.contains("workers")) cfg.workers = s["workers"].get<int>();
    }

    if (j.contains("initial")) {
      const json& ini = j["initial"];
      if (ini.is_string()) {
        if (ini.get<std::string>() != "uniform")
          throw ConfigError("initial must be an array or \"uniform\"");
        cfg.initial_uniform = true;
      } else {
        cfg.initial = to_vec(ini, "initial");
      }
    }

    if (j.contains("data")) {
      const json& d = j["data"];
      cfg.data_kind = d.value("kind", "");
      if (d.contains("n")) cfg.data_n = d["n"].get<Eigen::Index>();
      if (d.contains("beta_true")) cfg.beta_true = to_vec(d["beta_true"], "data.beta_true");
      cfg.data_path = d.value("path", "");
      if (d.contains("seed")) cfg.data_seed = d["seed"].get<std::uint64_t>();
      if (d.contains("test_fraction")) cfg.test_fraction = d["test_fraction"].get<double>();
      if (d.contains("standardize")) cfg.standardize_features = d["standardize"].get<bool>();
      static const char* kData[] = {"linreg", "logreg", "telescope", "titanic", ""};
      if (std::find(std::begin(kData), std::end(kData), cfg.data_kind) == std::end(kData))
        throw ConfigError("unknown data kind '" + cfg.data_kind + "'");
      if ((cfg.data_kind == "telescope" || cfg.data_kind == "titanic")) {
        if (cfg.data_path.empty())
          throw ConfigError(cfg.data_kind + " data needs a path");
        if (!std::filesystem::exists(cfg.data_path))
          throw ConfigError("data path does not exist: " + cfg.data_path);
      }
    }

    if (j.contains("seeds")) {
      for (const auto& s : j["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
    }
    if (cfg.seeds.empty()) cfg.seeds = {1, 2, 3};
    cfg.output_dir = j.value("output_dir", std::string("out"));
    if (j.contains("reference_count"))
      cfg.reference_count = j["reference_count"].get<Eigen::Index>();
    cfg.emit_svg = j.value("emit_svg", false);
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace skewflect

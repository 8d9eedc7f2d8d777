#include "skewflect/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "num_format.hpp"
#include "skewflect/rng.hpp"

namespace skewflect {

using detail::format_double;

namespace {

// Stream tags so every generator draws from its own key space.
enum : std::uint64_t { kLinregStream = 101, kLogregStream = 102, kSplitStream = 103 };

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Splits one CSV line honoring double quotes (Titanic Name fields contain
// commas). Quotes are stripped; "" inside quotes is an escaped quote.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

double parse_double(const std::string& tok, std::size_t line_no) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw std::runtime_error("malformed numeric field '" + tok + "' at line " +
                             std::to_string(line_no));
  }
  return v;
}

}  // namespace

Dataset generate_linreg(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  CounterRng rng(seed, kLinregStream);
  Dataset ds;
  ds.features.resize(n, 2);
  ds.labels.resize(n);
  ds.feature_names = {"a1", "a2"};
  for (Eigen::Index j = 0; j < n; ++j) {
    auto row = rng.substream(static_cast<std::uint64_t>(j));
    const double a1 = row.normal();
    const double a2 = row.normal();
    const double delta = 0.5 * row.normal();  // Var = 0.25
    ds.features(j, 0) = a1;
    ds.features(j, 1) = a2;
    ds.labels[j] = a1 + a2 + delta;  // x_star = [1,1]
  }
  return ds;
}

Dataset generate_logreg(Eigen::Index n, const Vec& beta_true, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const Eigen::Index d = beta_true.size();
  CounterRng rng(seed, kLogregStream);
  Dataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  ds.feature_names.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) ds.feature_names[i] = "x" + std::to_string(i + 1);
  const double sqrt2 = std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto row = rng.substream(static_cast<std::uint64_t>(j));
    double z = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double x = sqrt2 * row.normal();  // N(0, 2)
      ds.features(j, i) = x;
      z += beta_true[i] * x;
    }
    const double p = row.uniform();
    ds.labels[j] = (p <= sigmoid(z)) ? 1.0 : 0.0;
  }
  return ds;
}

Dataset load_telescope(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Dataset ds;
  std::vector<std::array<double, 10>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto toks = split_csv_line(line);
    if (toks.size() != 11)
      throw std::runtime_error("malformed row (expected 11 fields) at line " +
                               std::to_string(line_no));
    std::array<double, 10> row;
    for (int i = 0; i < 10; ++i) row[i] = parse_double(toks[i], line_no);
    const std::string& cls = toks[10];
    double y;
    if (cls == "g") {
      y = 1.0;
    } else if (cls == "h") {
      y = 0.0;
    } else {
      throw std::runtime_error("unknown class token '" + cls + "' at line " +
                               std::to_string(line_no));
    }
    rows.push_back(row);
    labels.push_back(y);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  ds.features.resize(n, 10);
  ds.labels.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int i = 0; i < 10; ++i) ds.features(j, i) = rows[j][i];
    ds.labels[j] = labels[j];
  }
  ds.feature_names = {"fLength", "fWidth",  "fSize",  "fConc", "fConc1",
                      "fAsym",   "fM3Long", "fM3Trans", "fAlpha", "fDist"};
  return ds;
}

Dataset preprocess_titanic(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file " + path);
  const auto header = split_csv_line(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("missing required column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_survived = col("Survived"), c_pclass = col("Pclass");
  const std::size_t c_sex = col("Sex"), c_age = col("Age"), c_sibsp = col("SibSp");
  const std::size_t c_parch = col("Parch"), c_fare = col("Fare");
  const std::size_t c_embarked = col("Embarked");

  struct Row {
    double survived, pclass, sex, sibsp, parch, fare, emb_q, emb_s;
    double age;
    bool age_missing;
  };
  std::vector<Row> rows;
  std::vector<double> ages;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto toks = split_csv_line(line);
    if (toks.size() != header.size())
      throw std::runtime_error("malformed row at line " + std::to_string(line_no));
    Row r{};
    r.survived = parse_double(toks[c_survived], line_no);
    r.pclass = parse_double(toks[c_pclass], line_no);
    if (toks[c_sex] == "male") {
      r.sex = 1.0;
    } else if (toks[c_sex] == "female") {
      r.sex = 0.0;
    } else {
      throw std::runtime_error("unknown Sex token at line " + std::to_string(line_no));
    }
    r.age_missing = toks[c_age].empty();
    if (!r.age_missing) {
      r.age = parse_double(toks[c_age], line_no);
      ages.push_back(r.age);
    }
    r.sibsp = parse_double(toks[c_sibsp], line_no);
    r.parch = parse_double(toks[c_parch], line_no);
    r.fare = parse_double(toks[c_fare], line_no);
    r.emb_q = (toks[c_embarked] == "Q") ? 1.0 : 0.0;
    r.emb_s = (toks[c_embarked] == "S") ? 1.0 : 0.0;  // C and missing -> baseline
    rows.push_back(r);
  }
  if (ages.empty()) throw std::runtime_error("no observed Age values in " + path);
  std::sort(ages.begin(), ages.end());
  const std::size_t m = ages.size();
  const double median =
      (m % 2 == 1) ? ages[m / 2] : 0.5 * (ages[m / 2 - 1] + ages[m / 2]);

  Dataset ds;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  ds.features.resize(n, 8);
  ds.labels.resize(n);
  ds.feature_names = {"Pclass", "Sex",  "Age",        "SibSp",
                      "Parch",  "Fare", "Embarked_Q", "Embarked_S"};
  for (Eigen::Index j = 0; j < n; ++j) {
    const Row& r = rows[j];
    ds.features(j, 0) = r.pclass;
    ds.features(j, 1) = r.sex;
    ds.features(j, 2) = r.age_missing ? median : r.age;
    ds.features(j, 3) = r.sibsp;
    ds.features(j, 4) = r.parch;
    ds.features(j, 5) = r.fare;
    ds.features(j, 6) = r.emb_q;
    ds.features(j, 7) = r.emb_s;
    ds.labels[j] = r.survived;
  }
  return ds;
}

StandardizeResult standardize(const Dataset& ds) {
  const Eigen::Index n = ds.n(), d = ds.d();
  if (n < 1) throw std::invalid_argument("empty dataset");
  StandardizeResult out;
  out.ds = ds;
  out.means = ds.features.colwise().mean();
  out.stds.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double var =
        (ds.features.col(i).array() - out.means[i]).square().sum() / static_cast<double>(n);
    out.stds[i] = std::sqrt(var);
    out.ds.features.col(i).array() -= out.means[i];
    if (out.stds[i] >= 1e-12) out.ds.features.col(i).array() /= out.stds[i];
  }
  return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must lie in (0,1)");
  const Eigen::Index n = ds.n();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  CounterRng rng(seed, kSplitStream);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng.uniform_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  const auto n_train = static_cast<Eigen::Index>(
      std::ceil(static_cast<double>(n) * (1.0 - test_fraction)));
  auto take = [&](Eigen::Index begin, Eigen::Index count) {
    Dataset part;
    part.features.resize(count, ds.d());
    part.labels.resize(count);
    part.feature_names = ds.feature_names;
    for (Eigen::Index k = 0; k < count; ++k) {
      part.features.row(k) = ds.features.row(perm[static_cast<std::size_t>(begin + k)]);
      part.labels[k] = ds.labels[perm[static_cast<std::size_t>(begin + k)]];
    }
    return part;
  };
  return {take(0, n_train), take(n_train, n - n_train)};
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index i = 0; i < ds.d(); ++i) {
    out << (i < static_cast<Eigen::Index>(ds.feature_names.size())
                ? ds.feature_names[static_cast<std::size_t>(i)]
                : "f" + std::to_string(i + 1))
        << ',';
  }
  out << "label\n";
  for (Eigen::Index j = 0; j < ds.n(); ++j) {
    for (Eigen::Index i = 0; i < ds.d(); ++i) out << format_double(ds.features(j, i)) << ',';
    out << format_double(ds.labels[j]) << '\n';
  }
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file " + path);
  auto names = split_csv_line(line);
  if (names.empty() || names.back() != "label")
    throw std::runtime_error("canonical CSV must end with a 'label' column");
  names.pop_back();
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto toks = split_csv_line(line);
    if (toks.size() != names.size() + 1)
      throw std::runtime_error("malformed row at line " + std::to_string(line_no));
    std::vector<double> vals(toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) vals[i] = parse_double(toks[i], line_no);
    rows.push_back(std::move(vals));
  }
  Dataset ds;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(names.size());
  ds.features.resize(n, d);
  ds.labels.resize(n);
  ds.feature_names = std::move(names);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < d; ++i)
      ds.features(j, i) = rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    ds.labels[j] = rows[static_cast<std::size_t>(j)].back();
  }
  return ds;
}

}  // namespace skewflect

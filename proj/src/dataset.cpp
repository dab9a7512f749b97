#include "lassoeq/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "lassoeq/errors.hpp"

namespace lassoeq {

namespace {

// RFC-4180 record splitter. Quoted fields may contain separators and doubled
// quotes; embedded newlines inside quotes are not supported.
std::vector<std::string> split_record(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError(row, fields.size() + 1, "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

std::string_view to_string(Task task) {
  return task == Task::Regression ? "regression" : "classification";
}

Task task_from_string(std::string_view name) {
  if (name == "regression") return Task::Regression;
  if (name == "classification") return Task::Classification;
  throw InputError("unknown task '" + std::string(name) + "' (expected regression or classification)");
}

void validate(const Dataset& d) {
  if (d.n() < 2) throw TooFewSamples("dataset needs at least 2 samples");
  if (d.p() < 1) throw InputError("dataset needs at least 1 predictor");
  if (d.y.size() != d.n()) throw DimensionMismatch("target length does not match row count");
  if (static_cast<Eigen::Index>(d.column_names.size()) != d.p())
    throw DimensionMismatch("column name count does not match column count");
  if (!d.X.allFinite() || !d.y.allFinite()) throw InputError("dataset contains non-finite values");
  if (d.task == Task::Classification) {
    Eigen::Index ones = 0;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      if (d.y[i] != 0.0 && d.y[i] != 1.0) throw NonBinaryTarget("classification target must be 0/1");
      if (d.y[i] == 1.0) ++ones;
    }
    if (ones == 0 || ones == d.n()) throw ConstantTarget("classification target has a single class");
  }
}

Dataset load_csv(const std::filesystem::path& path, std::string_view target_column, Task task) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, 1, "missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_record(line, 1);
  for (auto& h : header) h = trim(h);

  auto target_it = std::find(header.begin(), header.end(), target_column);
  if (target_it == header.end())
    throw MissingColumn("target column '" + std::string(target_column) + "' not found in header");
  const auto target_idx = static_cast<std::size_t>(target_it - header.begin());

  Dataset d;
  d.task = task;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (j != target_idx) d.column_names.push_back(header[j]);

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_targets;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_record(line, row);
    if (fields.size() != header.size())
      throw ParseError(row, std::min(fields.size(), header.size()) + 1,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    std::vector<double> values;
    values.reserve(header.size() - 1);
    for (std::size_t j = 0; j < fields.size(); ++j) {
      std::string f = trim(fields[j]);
      if (j == target_idx) {
        raw_targets.push_back(f);
        continue;
      }
      double v;
      if (!parse_double(f, v)) throw ParseError(row, j + 1, "'" + f + "' is not a finite number");
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(d.column_names.size());
  d.X.resize(n, p);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = rows[i][j];

  if (task == Task::Regression) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double v;
      if (!parse_double(raw_targets[i], v))
        throw ParseError(static_cast<std::size_t>(i) + 2, target_idx + 1,
                         "'" + raw_targets[i] + "' is not a finite number");
      d.y[i] = v;
    }
    if (n >= 1 && (d.y.array() == d.y[0]).all()) throw ConstantTarget("regression target is constant");
  } else {
    // Numeric 0/1 targets keep their meaning; any other labels map by first occurrence.
    bool numeric01 = std::all_of(raw_targets.begin(), raw_targets.end(), [](const std::string& s) {
      double v;
      return parse_double(s, v) && (v == 0.0 || v == 1.0);
    });
    if (numeric01) {
      d.class_labels = {"0", "1"};
      for (Eigen::Index i = 0; i < n; ++i) {
        double v;
        parse_double(raw_targets[i], v);
        d.y[i] = v;
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        const std::string& s = raw_targets[i];
        auto it = std::find(d.class_labels.begin(), d.class_labels.end(), s);
        if (it == d.class_labels.end()) {
          if (d.class_labels.size() == 2)
            throw NonBinaryTarget("classification target has more than two labels ('" + s + "')");
          d.class_labels.push_back(s);
          it = d.class_labels.end() - 1;
        }
        d.y[i] = static_cast<double>(it - d.class_labels.begin());
      }
    }
  }
  validate(d);
  return d;
}

std::pair<Dataset, StandardizationStats> standardize(const Dataset& d) {
  validate(d);
  const Eigen::Index n = d.n();
  StandardizationStats stats;
  std::vector<Eigen::Index> keep;
  std::vector<double> means, sds;
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    double mean = d.X.col(j).mean();
    double sd = std::sqrt((d.X.col(j).array() - mean).square().sum() / static_cast<double>(n - 1));
    // Relative threshold so that constant columns with rounding noise in the mean are dropped.
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      stats.dropped_columns.push_back(d.column_names[j]);
      continue;
    }
    keep.push_back(j);
    means.push_back(mean);
    sds.push_back(sd);
  }
  if (keep.empty()) throw AllColumnsConstant("every predictor column has zero variance");

  Dataset out;
  out.task = d.task;
  out.class_labels = d.class_labels;
  out.X.resize(n, static_cast<Eigen::Index>(keep.size()));
  stats.column_means.resize(out.X.cols());
  stats.column_sds.resize(out.X.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    out.X.col(c) = (d.X.col(keep[k]).array() - means[k]) / sds[k];
    out.column_names.push_back(d.column_names[keep[k]]);
    stats.column_means[c] = means[k];
    stats.column_sds[c] = sds[k];
  }
  if (d.task == Task::Regression) {
    stats.y_mean = d.y.mean();
    out.y = d.y.array() - stats.y_mean;
  } else {
    out.y = d.y;
  }
  return {std::move(out), std::move(stats)};
}

Dataset take_rows(const Dataset& d, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.task = d.task;
  out.column_names = d.column_names;
  out.class_labels = d.class_labels;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), d.p());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = d.X.row(rows[i]);
    out.y[static_cast<Eigen::Index>(i)] = d.y[rows[i]];
  }
  return out;
}

void deterministic_shuffle(std::vector<Eigen::Index>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    // Rejection sampling for an unbiased draw in [0, i).
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(v[i - 1], v[static_cast<std::size_t>(r % bound)]);
  }
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InputError("split fraction must lie in (0, 1)");
  std::vector<std::vector<Eigen::Index>> strata;
  if (d.task == Task::Classification) {
    strata.resize(2);
    for (Eigen::Index i = 0; i < d.n(); ++i) strata[d.y[i] == 1.0 ? 1 : 0].push_back(i);
    for (const auto& s : strata)
      if (s.size() < 2) throw TooFewSamples("each class needs at least 2 samples to split");
  } else {
    if (d.n() < 2) throw TooFewSamples("need at least 2 samples to split");
    strata.emplace_back(static_cast<std::size_t>(d.n()));
    std::iota(strata[0].begin(), strata[0].end(), Eigen::Index{0});
  }

  std::vector<Eigen::Index> first, second;
  for (std::size_t k = 0; k < strata.size(); ++k) {
    auto& s = strata[k];
    deterministic_shuffle(s, seed + 0x9E3779B97F4A7C15ULL * k);
    auto take = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(s.size())));
    take = std::clamp<std::size_t>(take, 1, s.size() - 1);
    first.insert(first.end(), s.begin(), s.begin() + static_cast<std::ptrdiff_t>(take));
    second.insert(second.end(), s.begin() + static_cast<std::ptrdiff_t>(take), s.end());
  }
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {take_rows(d, first), take_rows(d, second)};
}

std::vector<double> lambda_grid(double min_exponent, double max_exponent, double step_exponent) {
  if (!(step_exponent > 0.0) || !(min_exponent <= max_exponent) || !std::isfinite(max_exponent))
    throw EmptyGrid("lambda grid needs min <= max and step > 0");
  // Small slack so that (3 - -3) / 0.1 counts 60 steps, not 59.
  const auto steps = static_cast<long>(std::floor((max_exponent - min_exponent) / step_exponent + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps + 1));
  for (long k = 0; k <= steps; ++k)
    grid.push_back(std::pow(10.0, min_exponent + static_cast<double>(k) * step_exponent));
  return grid;
}

}  // namespace lassoeq

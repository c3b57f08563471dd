// Copyright (c) 2026 The rawnoise project authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rawnoise/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rawnoise/errors.hpp"

namespace rawnoise {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::map<std::string, std::string> read_keyvalue(const std::filesystem::path& path) {
  std::ifstream fh(path);
  if (!fh) throw DataError("cannot open: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(fh, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path.string() + ": malformed line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace

Moments noise_stats(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("noise_stats: need at least 2 values");

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double nd = static_cast<double>(n);
  Moments out;
  out.mean = mean;
  out.variance = m2 / (nd - 1.0);

  if (m2 <= 0.0 || n < 3) {
    out.skewness = kNan;
    out.kurtosis = kNan;
    return out;
  }
  const double g1 = (m3 / nd) / std::pow(m2 / nd, 1.5);
  out.skewness = g1 * std::sqrt(nd * (nd - 1.0)) / (nd - 2.0);
  if (n < 4) {
    out.kurtosis = kNan;
  } else {
    const double s2 = m2 / (nd - 1.0);
    out.kurtosis = (nd * (nd + 1.0) * m4) /
                       ((nd - 1.0) * (nd - 2.0) * (nd - 3.0) * s2 * s2) -
                   3.0 * (nd - 1.0) * (nd - 1.0) / ((nd - 2.0) * (nd - 3.0));
  }
  return out;
}

double ks_statistic(const std::vector<double>& samples, const FittedDistribution& dist) {
  if (samples.size() < 10)
    throw std::invalid_argument("ks_statistic: need at least 10 samples");
  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = dist.cdf(sorted[i]);
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

RowAutocorrelation row_autocorrelation(const SignalFrame& frame, int max_lag) {
  if (max_lag < 1) throw std::invalid_argument("row_autocorrelation: max_lag >= 1");
  if (frame.width <= max_lag)
    throw std::invalid_argument("row_autocorrelation: width must exceed max_lag");

  double global_mean = 0.0;
  for (double v : frame.values) global_mean += v;
  global_mean /= static_cast<double>(frame.pixel_count());

  RowAutocorrelation out;
  std::vector<double> sums(static_cast<std::size_t>(max_lag), 0.0);
  int included = 0;
  std::vector<double> centered(frame.width);
  for (int r = 0; r < frame.height; ++r) {
    for (int c = 0; c < frame.width; ++c)
      centered[c] = frame.at(r, c) - global_mean;
    double den = 0.0;
    for (double v : centered) den += v * v;
    if (den <= 0.0) {
      ++out.excluded_rows;
      continue;
    }
    ++included;
    for (int lag = 1; lag <= max_lag; ++lag) {
      double num = 0.0;
      for (int c = 0; c + lag < frame.width; ++c)
        num += centered[c] * centered[c + lag];
      sums[lag - 1] += num / den;
    }
  }
  if (included == 0) throw DataError("row_autocorrelation: every row has zero variance");
  for (int lag = 1; lag <= max_lag; ++lag)
    out.values.emplace_back(lag, sums[lag - 1] / included);
  return out;
}

void save_report(const std::filesystem::path& dir, const NoiseReport& report) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream fh(dir / "stats.txt");
    if (!fh) throw DataError("cannot write: " + (dir / "stats.txt").string());
    fh << "mean=" << fmt(report.moments.mean) << '\n';
    fh << "variance=" << fmt(report.moments.variance) << '\n';
    fh << "skewness=" << fmt(report.moments.skewness) << '\n';
    fh << "kurtosis=" << fmt(report.moments.kurtosis) << '\n';
    fh << "sample_count=" << report.sample_count << '\n';
    if (report.ks) {
      fh << "ks_statistic=" << fmt(report.ks->first) << '\n';
      fh << "ks_reference=" << report.ks->second << '\n';
    }
    fh << "excluded_rows=" << report.row_autocorr.excluded_rows << '\n';
    if (report.ppcc) fh << "best_lambda=" << fmt(report.ppcc->best_lambda) << '\n';
  }
  {
    std::ofstream fh(dir / "autocorr.csv");
    fh << "lag,value\n";
    for (const auto& [lag, value] : report.row_autocorr.values)
      fh << lag << ',' << fmt(value) << '\n';
  }
  if (report.ppcc) {
    std::ofstream fh(dir / "ppcc.csv");
    fh << "lambda,ppcc\n";
    for (std::size_t i = 0; i < report.ppcc->lambda_grid.size(); ++i)
      fh << fmt(report.ppcc->lambda_grid[i]) << ',' << fmt(report.ppcc->ppcc_values[i])
         << '\n';
  }
}

NoiseReport load_report(const std::filesystem::path& dir) {
  NoiseReport report;
  const auto kv = read_keyvalue(dir / "stats.txt");
  auto get = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw DataError("stats.txt: missing key '" + std::string(key) + "'");
    return std::stod(it->second);
  };
  report.moments.mean = get("mean");
  report.moments.variance = get("variance");
  report.moments.skewness = get("skewness");
  report.moments.kurtosis = get("kurtosis");
  report.sample_count = static_cast<std::size_t>(get("sample_count"));
  if (kv.count("ks_statistic"))
    report.ks = {std::stod(kv.at("ks_statistic")), kv.count("ks_reference") ? kv.at("ks_reference") : ""};
  report.row_autocorr.excluded_rows = static_cast<int>(get("excluded_rows"));

  std::ifstream fh(dir / "autocorr.csv");
  if (!fh) throw DataError("cannot open: " + (dir / "autocorr.csv").string());
  std::string line;
  std::getline(fh, line);  // header
  while (std::getline(fh, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    report.row_autocorr.values.emplace_back(std::stoi(line.substr(0, comma)),
                                            std::stod(line.substr(comma + 1)));
  }

  if (std::filesystem::exists(dir / "ppcc.csv")) {
    PpccResult ppcc;
    std::ifstream pf(dir / "ppcc.csv");
    std::getline(pf, line);
    while (std::getline(pf, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      ppcc.lambda_grid.push_back(std::stod(line.substr(0, comma)));
      ppcc.ppcc_values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (kv.count("best_lambda")) ppcc.best_lambda = std::stod(kv.at("best_lambda"));
    report.ppcc = std::move(ppcc);
  }
  return report;
}

}  // namespace rawnoise

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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rawnoise/calibrate.hpp"
#include "rawnoise/frame.hpp"

namespace rawnoise {

/// Sample moments. skewness/kurtosis are NaN markers when undefined
/// (constant input, or fewer values than the estimator needs).
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess
};

/// Standard unbiased estimators (variance n-1, adjusted skewness/kurtosis).
/// Throws std::invalid_argument for fewer than 2 values.
Moments noise_stats(const std::vector<double>& values);

/// Sup-norm distance between the empirical CDF of samples and dist's CDF.
/// Needs >=10 samples.
double ks_statistic(const std::vector<double>& samples, const FittedDistribution& dist);

struct RowAutocorrelation {
  std::vector<std::pair<int, double>> values;  // (lag, mean within-row autocorr)
  int excluded_rows = 0;                       // zero-variance rows
};

/// Mean over rows of within-row autocorrelation at lags 1..max_lag, after
/// removing the global frame mean. Requires width > max_lag.
RowAutocorrelation row_autocorrelation(const SignalFrame& frame, int max_lag);

struct NoiseReport {
  Moments moments;
  std::size_t sample_count = 0;
  std::optional<std::pair<double, std::string>> ks;  // (statistic, reference name)
  RowAutocorrelation row_autocorr;
  std::optional<PpccResult> ppcc;
};

/// Writes stats.txt (key=value scalars) plus autocorr.csv / ppcc.csv curves.
void save_report(const std::filesystem::path& dir, const NoiseReport& report);
NoiseReport load_report(const std::filesystem::path& dir);

}  // namespace rawnoise

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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rawnoise/distributions.hpp"
#include "rawnoise/frame.hpp"

namespace rawnoise {

/// Photon transfer calibration: variance = gain * mean + intercept over
/// flat-field levels. gain is the total (analog x digital) gain in DN per
/// photoelectron; intercept estimates the signal-independent variance floor.
struct PhotonTransferFit {
  double gain = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (mean DN, variance DN^2)
};

/// Each stack is >=2 frames of one illumination level; >=3 levels required.
/// Per-pixel temporal mean/variance are averaged spatially after black
/// subtraction, then fitted by least squares across levels.
PhotonTransferFit photon_transfer_fit(const std::vector<std::vector<BayerFrame>>& stacks);

/// Pooled variance of black-subtracted dark-frame pixels (per-frame means).
double estimate_read_variance(const std::vector<BayerFrame>& dark_frames);

/// Shared per-row noise sigma (output-referred DN) from dark frames, via the
/// variance of row means: var(row mean) = sigma_row^2 (1 - 1/W) + var_all / W.
double estimate_row_sigma(const std::vector<BayerFrame>& dark_frames);

struct PpccResult {
  std::vector<double> lambda_grid;
  std::vector<double> ppcc_values;
  double best_lambda = 0.0;
};

/// Grid for the PPCC shape search when the caller has no preference.
std::vector<double> default_lambda_grid();  // [-1, 1] step 0.01

/// Probability plot correlation coefficient over the Tukey Lambda family,
/// using Filliben's median plotting positions. Needs >=100 samples.
PpccResult ppcc_tukey_lambda(const std::vector<double>& samples,
                             const std::vector<double>& lambda_grid);

struct CensoredFitOptions {
  int restarts = 3;
  double rel_tol = 1e-8;
  int max_iter = 5000;
};

/// Maximum-likelihood fit of one family to bin-censored data: an observed
/// value x contributes the probability mass of its bin [x - q/2, x + q/2].
/// Throws DataError when no restart converges.
FittedDistribution fit_family_censored(const std::vector<double>& samples, double q,
                                       DistFamily family,
                                       const CensoredFitOptions& options = {});

struct FamilyFitResult {
  DistFamily family;
  std::optional<FittedDistribution> fit;  // empty when the fit failed
  double ks = 0.0;                        // valid when fit is set
  std::string diagnostic;
};

struct DistributionSetFit {
  FittedDistribution best;
  std::vector<FamilyFitResult> per_family;  // fixed family order
};

/// Fits all five families to quantized noise values and selects the one with
/// the smallest KS distance against the empirical CDF. Needs >=1000 samples.
DistributionSetFit fit_distribution_set(const std::vector<double>& samples, double q,
                                        const CensoredFitOptions& options = {});

}  // namespace rawnoise

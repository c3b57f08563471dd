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

#include <cstdint>
#include <optional>

#include "rawnoise/distributions.hpp"
#include "rawnoise/frame.hpp"

namespace rawnoise {

/// CDF(x + q/2) - CDF(x - q/2): the probability mass the fitted continuous
/// distribution assigns to the quantization bin around x.
double bin_mass(const FittedDistribution& dist, double x, double q);

/// Draws values from a fitted continuous distribution conditioned on a
/// quantization bin. min_value/max_value, when set, mark the saturation
/// levels in the (black-subtracted) value space; their bins are resampled
/// one-sidedly over the interior half only.
struct BinSampler {
  FittedDistribution dist;
  double q = 1.0;
  std::optional<double> min_value;
  std::optional<double> max_value;

  double bin_lo(double x) const;
  double bin_hi(double x) const;
  double mass(double x) const { return dist.cdf(bin_hi(x)) - dist.cdf(bin_lo(x)); }

  /// Inverse-CDF draw from dist restricted to x's bin; u in (0, 1). Falls
  /// back to uniform-in-bin when the fitted mass is zero and reports it
  /// through *used_fallback. The result always stays strictly inside the
  /// bin, so re-quantizing recovers x exactly.
  double conditional_draw(double x, double u, bool* used_fallback = nullptr) const;
};

struct ReconstructResult {
  SignalFrame frame;
  std::size_t uniform_fallbacks = 0;  // bins with zero fitted mass
};

/// Replaces each quantized noise value with an independent draw from the
/// fitted distribution restricted to its bin. Deterministic given the seed;
/// per-pixel substreams make the result independent of row partitioning.
ReconstructResult reconstruct(const SignalFrame& frame_noise, const BinSampler& sampler,
                              std::uint64_t seed);

}  // namespace rawnoise

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

#include "rawnoise/highbit.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "rawnoise/parallel.hpp"
#include "rawnoise/rng.hpp"

namespace rawnoise {

double bin_mass(const FittedDistribution& dist, double x, double q) {
  if (q <= 0.0) throw std::invalid_argument("bin_mass: q must be positive");
  return dist.cdf(x + 0.5 * q) - dist.cdf(x - 0.5 * q);
}

double BinSampler::bin_lo(double x) const {
  double lo = x - 0.5 * q;
  // Saturation bins collect everything beyond the clamp level; only the
  // interior half is resampled.
  if (min_value && x <= *min_value + 0.25 * q) lo = x;
  return lo;
}

double BinSampler::bin_hi(double x) const {
  double hi = x + 0.5 * q;
  if (max_value && x >= *max_value - 0.25 * q) hi = x;
  return hi;
}

double BinSampler::conditional_draw(double x, double u, bool* used_fallback) const {
  const double lo = bin_lo(x);
  const double hi = bin_hi(x);
  if (used_fallback) *used_fallback = false;
  if (hi <= lo) return x;  // degenerate (clamped) bin

  const double cdf_lo = dist.cdf(lo);
  const double cdf_hi = dist.cdf(hi);
  const double mass = cdf_hi - cdf_lo;

  double value;
  if (mass <= 0.0) {
    if (used_fallback) *used_fallback = true;
    value = lo + u * (hi - lo);
  } else {
    value = dist.quantile(cdf_lo + u * mass);
  }
  // Keep draws strictly inside the bin so quantize() cannot flip them to a
  // neighbouring level; the margin is far below payload precision.
  const double margin = 1e-9 * q;
  if (!(value > lo + margin)) value = lo + margin;
  if (!(value < hi - margin)) value = hi - margin;
  return value;
}

ReconstructResult reconstruct(const SignalFrame& frame_noise, const BinSampler& sampler,
                              std::uint64_t seed) {
  if (sampler.q <= 0.0) throw std::invalid_argument("reconstruct: q must be positive");
  sampler.dist.validate();

  ReconstructResult result;
  result.frame = frame_noise;
  const std::uint64_t stream = derive_seed(seed, {kTagHighBit});
  std::atomic<std::size_t> fallbacks{0};

  parallel_for_rows(static_cast<std::size_t>(frame_noise.height),
                    [&](std::size_t row_begin, std::size_t row_end) {
    std::size_t local_fallbacks = 0;
    for (std::size_t r = row_begin; r < row_end; ++r) {
      for (int c = 0; c < frame_noise.width; ++c) {
        const double u = u01_open(stream, r, static_cast<std::uint64_t>(c));
        bool used_fallback = false;
        result.frame.at(static_cast<int>(r), c) = sampler.conditional_draw(
            frame_noise.at(static_cast<int>(r), c), u, &used_fallback);
        if (used_fallback) ++local_fallbacks;
      }
    }
    fallbacks += local_fallbacks;
  });
  result.uniform_fallbacks = fallbacks.load();
  return result;
}

}  // namespace rawnoise

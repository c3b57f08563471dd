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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <utility>
#include <vector>

#include "rawnoise/frame.hpp"

namespace rawnoise {

// Virtual sensor with known ground-truth parameters:
//   dn = quantize(K_d * (K_a * (P(I) + N1 + row + fpn) + N2) + black)
// N1 is the pre-analog-gain read noise (per pixel), the row draw is shared by
// all pixels of a row, fpn is a per-pixel offset constant across frames, N2
// is post-analog-gain read noise.

enum class ReadNoiseDist { Gaussian, TukeyLambda };

struct VirtualSensorParams {
  int width = 512;
  int height = 512;
  CfaPattern cfa = CfaPattern::RGGB;

  double k_analog = 1.0;
  double k_digital = 1.0;

  double read1_sigma = 0.0;
  ReadNoiseDist read1_dist = ReadNoiseDist::Gaussian;
  double read1_tl_lambda = 0.14;

  double read2_sigma = 0.0;
  // Per-CFA-channel multiplier on read2 (R, G1, G2, B).
  std::array<double, 4> channel_read_scale = {1.0, 1.0, 1.0, 1.0};

  double row_sigma = 0.0;

  std::uint64_t fpn_seed = 0;
  double fpn_amplitude = 0.0;

  int bit_depth = 14;
  double quant_step = 1.0;
  double black_level = 512.0;
  double white_level = 0.0;  // 0: defaults to (2^b - 1) * q

  std::map<int, std::pair<double, double>> iso_gains;  // iso -> (k_analog, k_digital)

  double total_gain() const { return k_analog * k_digital; }
  double effective_white() const;
  /// Output-referred signal-independent variance, excluding quantization.
  double dark_variance_dn() const;
  /// Copy with gains taken from the per-ISO table; throws if iso missing.
  VirtualSensorParams at_iso(int iso) const;
};

VirtualSensorParams load_sensor_params(const std::filesystem::path& path);
void save_sensor_params(const std::filesystem::path& path,
                        const VirtualSensorParams& params);

/// photon_map values are expected photon counts (>= 0 elementwise).
BayerFrame simulate_frame(const SignalFrame& photon_map,
                          const VirtualSensorParams& params, std::uint64_t seed);

/// n_frames independent frames of a constant photon map at `level`.
std::vector<BayerFrame> simulate_flat_stack(double level,
                                            const VirtualSensorParams& params,
                                            int n_frames, std::uint64_t seed);

BayerFrame simulate_dark_frame(const VirtualSensorParams& params, std::uint64_t seed);

}  // namespace rawnoise

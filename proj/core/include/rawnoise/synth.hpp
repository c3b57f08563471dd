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
#include <string>

#include "rawnoise/darkdb.hpp"
#include "rawnoise/frame.hpp"
#include "rawnoise/profile.hpp"

namespace rawnoise {

/// Signal-dependent layer: per pixel, K * P(Y / K). Expectation Y,
/// variance K * Y. Negative clean values (possible after black subtraction
/// of real data) clamp the Poisson mean at zero and carry the residual
/// additively, preserving the mean.
SignalFrame shot_noise(const SignalFrame& clean, double total_gain, std::uint64_t seed);

/// Poisson-Gaussian baseline: shot noise plus N(0, sqrt(beta2)) per pixel.
SignalFrame synth_pg(const SignalFrame& clean, double beta1, double beta2,
                     std::uint64_t seed);

enum class StripeAxis { Rows, Cols };

struct EldParams {
  double beta1 = 1.0;
  double tl_lambda = 0.14;
  double tl_scale = 0.0;   // per-pixel Tukey Lambda read noise scale
  double row_sigma = 0.0;  // shared per-line Gaussian sigma
  double quant_step = 0.0; // 0 disables the uniform quantization-noise term
  StripeAxis axis = StripeAxis::Rows;
};

/// ELD-style baseline: shot noise + TL(lambda) read noise + shared per-row
/// Gaussian + uniform quantization noise.
SignalFrame synth_eld_like(const SignalFrame& clean, const EldParams& params,
                           std::uint64_t seed);

enum class SynthMode { PG, ELD, RealPixelwise, RealPatch, RealPAP };

std::string to_string(SynthMode mode);
SynthMode synth_mode_from_string(const std::string& name);

struct SynthConfig {
  SynthMode mode = SynthMode::RealPAP;
  bool highbit = false;  // valid only with Real* modes
  ProfileDocument profile;
  std::string sensor_id;
  int iso = 0;
  std::uint64_t seed = 0;
  int patch_size = 512;    // dark patches tile the image in this step
  bool enable_shot = true; // disabling isolates the signal-independent layer
};

/// Full real-noise composition: shot-noise layer plus a signal-independent
/// layer sampled from the dark-frame database per config.mode (pattern-
/// aligned sampling targets the clean frame's phase at each tile origin),
/// optionally passed through high-bit reconstruction. The sum is re-offset
/// by the profile's black level, clipped to the white level, and quantized
/// to the sensor grid.
BayerFrame compose_real(const SignalFrame& clean, const DarkFrameDb& db,
                        const SynthConfig& config);

/// Dispatch across all five modes; db may be null for PG/ELD.
BayerFrame synthesize_raw(const SignalFrame& clean, const DarkFrameDb* db,
                          const SynthConfig& config);

/// Re-offset by black level, clip to white, quantize to the sensor grid.
BayerFrame finalize_to_raw(const SignalFrame& noisy_signal, const IsoProfile& iso_profile);

}  // namespace rawnoise

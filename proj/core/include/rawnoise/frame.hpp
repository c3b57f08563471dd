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
#include <vector>

#include "rawnoise/cfa.hpp"

namespace rawnoise {

/// A raw Bayer mosaic in digital numbers. Quantized frames hold samples
/// that are exact multiples of quant_step: sample = n * q with
/// 0 <= n <= 2^bit_depth - 1. High-bit frames hold arbitrary reals.
struct BayerFrame {
  int width = 0;
  int height = 0;
  std::vector<double> samples;  // row-major, size width * height
  CfaPattern cfa = CfaPattern::RGGB;
  int bit_depth = 0;
  double black_level = 0.0;
  double white_level = 0.0;
  double quant_step = 1.0;

  double& at(int row, int col) { return samples[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return samples[static_cast<std::size_t>(row) * width + col]; }
  std::size_t pixel_count() const { return samples.size(); }

  /// Throws DataError if any structural invariant fails (dimension parity,
  /// level ordering, quantized grid membership).
  void validate(bool expect_quantized = true) const;
};

/// Black-subtracted real-valued frame; values may be negative.
struct SignalFrame {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major
  CfaPattern cfa = CfaPattern::RGGB;

  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
  std::size_t pixel_count() const { return values.size(); }
};

SignalFrame make_signal_frame(int width, int height, CfaPattern cfa, double fill = 0.0);

/// samples - black_level, as reals; CFA preserved.
SignalFrame subtract_black(const BayerFrame& frame);

/// Maps each value + black_level to the nearest multiple of q (round half to
/// even at bin boundaries), clamped to [0, (2^b - 1) * q].
BayerFrame quantize(const SignalFrame& values, double black_level, double q, int b);

/// Same clamp/round rule for a single value; returns the step number n.
std::int64_t quantize_step_number(double dn_value, double q, int b);

/// Largest representable digital number, (2^b - 1) * q.
double max_digital_number(double q, int b);

}  // namespace rawnoise

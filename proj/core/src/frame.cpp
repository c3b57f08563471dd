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

#include "rawnoise/frame.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rawnoise/errors.hpp"

namespace rawnoise {

void BayerFrame::validate(bool expect_quantized) const {
  if (width <= 0 || height <= 0)
    throw DataError("frame dimensions must be positive");
  if (width % 2 != 0 || height % 2 != 0)
    throw DataError("frame dimensions must be even (whole CFA tiles), got " +
                    std::to_string(width) + "x" + std::to_string(height));
  if (samples.size() != static_cast<std::size_t>(width) * height)
    throw DataError("sample buffer size does not match dimensions");
  if (bit_depth < 1 || bit_depth > 30)
    throw DataError("bit depth out of range: " + std::to_string(bit_depth));
  if (quant_step <= 0.0) throw DataError("quant_step must be positive");
  const double max_dn = max_digital_number(quant_step, bit_depth);
  if (!(black_level < white_level) || white_level > max_dn + 1e-9)
    throw DataError("need black_level < white_level <= (2^b - 1) * q");
  if (expect_quantized) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double n = samples[i] / quant_step;
      const double nearest = std::floor(n + 0.5);
      if (std::abs(n - nearest) > 1e-6 || nearest < 0.0 ||
          nearest > max_dn / quant_step + 0.5)
        throw DataError("sample " + std::to_string(i) +
                        " is not on the quantization grid: " +
                        std::to_string(samples[i]));
    }
  }
}

SignalFrame make_signal_frame(int width, int height, CfaPattern cfa, double fill) {
  SignalFrame f;
  f.width = width;
  f.height = height;
  f.cfa = cfa;
  f.values.assign(static_cast<std::size_t>(width) * height, fill);
  return f;
}

SignalFrame subtract_black(const BayerFrame& frame) {
  SignalFrame out;
  out.width = frame.width;
  out.height = frame.height;
  out.cfa = frame.cfa;
  out.values.resize(frame.samples.size());
  for (std::size_t i = 0; i < frame.samples.size(); ++i)
    out.values[i] = frame.samples[i] - frame.black_level;
  return out;
}

double max_digital_number(double q, int b) {
  return (std::ldexp(1.0, b) - 1.0) * q;
}

std::int64_t quantize_step_number(double dn_value, double q, int b) {
  const double x = dn_value / q;
  double n = std::floor(x);
  const double frac = x - n;
  if (frac > 0.5) {
    n += 1.0;
  } else if (frac == 0.5) {
    // Round half to even so the quantization error stays symmetric.
    if (std::fmod(n, 2.0) != 0.0) n += 1.0;
  }
  const double n_max = std::ldexp(1.0, b) - 1.0;
  if (n < 0.0) n = 0.0;
  if (n > n_max) n = n_max;
  return static_cast<std::int64_t>(n);
}

BayerFrame quantize(const SignalFrame& values, double black_level, double q, int b) {
  if (q <= 0.0) throw std::invalid_argument("quantize: q must be positive");
  if (b < 1) throw std::invalid_argument("quantize: bit depth must be >= 1");
  BayerFrame out;
  out.width = values.width;
  out.height = values.height;
  out.cfa = values.cfa;
  out.bit_depth = b;
  out.black_level = black_level;
  out.white_level = max_digital_number(q, b);
  out.quant_step = q;
  out.samples.resize(values.values.size());
  for (std::size_t i = 0; i < values.values.size(); ++i) {
    const std::int64_t n = quantize_step_number(values.values[i] + black_level, q, b);
    out.samples[i] = static_cast<double>(n) * q;
  }
  return out;
}

}  // namespace rawnoise

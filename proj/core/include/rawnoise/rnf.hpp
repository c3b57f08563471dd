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

#include <filesystem>
#include <string>

#include "rawnoise/frame.hpp"

namespace rawnoise {

// RNF1 frame container: a text header followed by a row-major little-endian
// sample payload.
//
//   RNF1
//   width=<int>
//   height=<int>
//   bit_depth=<int>
//   quant_step=<real>
//   black_level=<real>
//   white_level=<real>
//   cfa=<RGGB|BGGR|GRBG|GBRG>
//   dtype=<u16|f32|f64>
//   <blank line>
//   <payload>
//
// u16 payloads store quantization step numbers n (sample = n * quant_step),
// which makes quantized round trips bit-exact for any quant_step. f32/f64
// payloads store sample values directly and carry high-bit frames.

inline constexpr const char* kRnfFormatVersion = "RNF1";

enum class RnfDtype { U16, F32, F64 };

std::string to_string(RnfDtype dtype);
RnfDtype rnf_dtype_from_string(const std::string& name);

void write_rnf(const std::filesystem::path& path, const BayerFrame& frame,
               RnfDtype dtype = RnfDtype::U16);

/// Reads a frame; the payload dtype is reported through *dtype when non-null.
BayerFrame read_rnf(const std::filesystem::path& path, RnfDtype* dtype = nullptr);

/// DN-referred frame -> black-subtracted signal values (alias of
/// subtract_black, here for symmetry with signal_to_dn_frame).
SignalFrame dn_frame_to_signal(const BayerFrame& frame);

/// Wraps signal values as a DN-referred frame (values + black_level), without
/// quantizing. Used to serialize clean images and high-bit noise.
BayerFrame signal_to_dn_frame(const SignalFrame& signal, double black_level,
                              double quant_step, int bit_depth,
                              double white_level);

}  // namespace rawnoise

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
#include <map>
#include <optional>
#include <string>

#include "rawnoise/distributions.hpp"

namespace rawnoise {

/// Calibrated parameters for one ISO setting.
struct IsoProfile {
  int iso = 0;
  double beta1 = 0.0;      // total gain, DN per photoelectron
  double beta2 = 0.0;      // signal-independent variance floor, DN^2
  double row_sigma = 0.0;  // per-row noise sigma, DN
  double tl_lambda = 0.14;
  double tl_scale = 0.0;  // 0: derive from beta2 when needed
  std::optional<FittedDistribution> fitted;
  double ptc_r_squared = 0.0;

  double quant_step = 1.0;
  int bit_depth = 14;
  double black_level = 0.0;
  double white_level = 0.0;

  /// tl_scale when fitted directly, else matched to sqrt(beta2).
  double effective_tl_scale() const;
};

/// Sensor profile document: one section per ISO, serialized as key=value
/// text with "[iso <n>]" section headers.
struct ProfileDocument {
  std::string sensor_id;
  std::map<int, IsoProfile> per_iso;

  /// Throws DataError naming the ISO when no section exists.
  const IsoProfile& require(int iso) const;
  IsoProfile& section(int iso);  // creates when absent
};

ProfileDocument load_profile(const std::filesystem::path& path);
void save_profile(const std::filesystem::path& path, const ProfileDocument& doc);

}  // namespace rawnoise

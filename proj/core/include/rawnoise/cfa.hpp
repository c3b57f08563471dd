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
#include <string>

namespace rawnoise {

/// The four cells of one Bayer tile. G1 is the green sharing a row with R,
/// G2 the green sharing a row with B.
enum class CfaChannel { R, G1, G2, B };

/// Canonical 2x2 Bayer layouts, named by their row-major cell order.
/// R and B always sit on opposite corners, so the R position alone
/// identifies the variant.
enum class CfaPattern { RGGB, BGGR, GRBG, GBRG };

inline constexpr std::array<CfaPattern, 4> kAllCfaPatterns = {
    CfaPattern::RGGB, CfaPattern::BGGR, CfaPattern::GRBG, CfaPattern::GBRG};

/// Color channel seen at pixel (row, col) of a frame with this pattern.
CfaChannel channel_at(CfaPattern pattern, long row, long col);

/// Pattern seen when the frame origin is shifted by (dr, dc). Periodic with
/// period 2 in each axis; negative shifts allowed.
CfaPattern cfa_phase(CfaPattern pattern, long dr, long dc);

/// Row/col parity of the shift mapping `from` onto `to`:
/// cfa_phase(from, dr, dc) == to for exactly the (dr, dc) with these
/// parities. Always solvable among the four variants.
struct PhaseShift {
  int row_parity;  // 0 or 1
  int col_parity;  // 0 or 1
};
PhaseShift phase_shift_between(CfaPattern from, CfaPattern to);

std::string to_string(CfaPattern pattern);
std::string to_string(CfaChannel channel);
CfaPattern cfa_pattern_from_string(const std::string& name);

/// Index 0..3 used for per-channel tallies (R, G1, G2, B).
int channel_index(CfaChannel channel);

}  // namespace rawnoise

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

#include "rawnoise/cfa.hpp"

#include "rawnoise/errors.hpp"

namespace rawnoise {

namespace {

constexpr int mod2(long v) { return static_cast<int>(((v % 2) + 2) % 2); }

// (row, col) of the R cell within the 2x2 tile.
constexpr std::array<int, 2> r_position(CfaPattern p) {
  switch (p) {
    case CfaPattern::RGGB: return {0, 0};
    case CfaPattern::BGGR: return {1, 1};
    case CfaPattern::GRBG: return {0, 1};
    case CfaPattern::GBRG: return {1, 0};
  }
  return {0, 0};
}

constexpr CfaPattern pattern_from_r_position(int row, int col) {
  if (row == 0 && col == 0) return CfaPattern::RGGB;
  if (row == 1 && col == 1) return CfaPattern::BGGR;
  if (row == 0 && col == 1) return CfaPattern::GRBG;
  return CfaPattern::GBRG;
}

}  // namespace

CfaChannel channel_at(CfaPattern pattern, long row, long col) {
  const auto [rr, rc] = r_position(pattern);
  const int pr = mod2(row);
  const int pc = mod2(col);
  if (pr == rr && pc == rc) return CfaChannel::R;
  if (pr == (rr ^ 1) && pc == (rc ^ 1)) return CfaChannel::B;
  // Greens: G1 shares the R row.
  return (pr == rr) ? CfaChannel::G1 : CfaChannel::G2;
}

CfaPattern cfa_phase(CfaPattern pattern, long dr, long dc) {
  // Pixel (r, c) of the shifted frame shows pixel (r + dr, c + dc) of the
  // original, so R lands at (r_pos - dr, r_pos - dc) mod 2.
  const auto [rr, rc] = r_position(pattern);
  return pattern_from_r_position(mod2(rr - dr), mod2(rc - dc));
}

PhaseShift phase_shift_between(CfaPattern from, CfaPattern to) {
  const auto [fr, fc] = r_position(from);
  const auto [tr, tc] = r_position(to);
  return PhaseShift{mod2(fr - tr), mod2(fc - tc)};
}

std::string to_string(CfaPattern pattern) {
  switch (pattern) {
    case CfaPattern::RGGB: return "RGGB";
    case CfaPattern::BGGR: return "BGGR";
    case CfaPattern::GRBG: return "GRBG";
    case CfaPattern::GBRG: return "GBRG";
  }
  return "RGGB";
}

std::string to_string(CfaChannel channel) {
  switch (channel) {
    case CfaChannel::R: return "R";
    case CfaChannel::G1: return "G1";
    case CfaChannel::G2: return "G2";
    case CfaChannel::B: return "B";
  }
  return "R";
}

CfaPattern cfa_pattern_from_string(const std::string& name) {
  for (CfaPattern p : kAllCfaPatterns)
    if (to_string(p) == name) return p;
  throw DataError("unknown CFA pattern name: '" + name + "'");
}

int channel_index(CfaChannel channel) { return static_cast<int>(channel); }

}  // namespace rawnoise

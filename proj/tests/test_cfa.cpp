#include <doctest.h>

#include "rawnoise/cfa.hpp"

using namespace rawnoise;

TEST_CASE("cfa_phase identity and named shifts") {
  CHECK(cfa_phase(CfaPattern::RGGB, 0, 0) == CfaPattern::RGGB);
  CHECK(cfa_phase(CfaPattern::RGGB, 1, 1) == CfaPattern::BGGR);
  CHECK(cfa_phase(CfaPattern::RGGB, 0, 1) == CfaPattern::GRBG);
  // Round trip of the column shift, enumerated by hand from the 2x2 tile.
  CHECK(cfa_phase(CfaPattern::GRBG, 0, 1) == CfaPattern::RGGB);
  CHECK(cfa_phase(CfaPattern::RGGB, 1, 0) == CfaPattern::GBRG);
}

TEST_CASE("cfa_phase is periodic and inverts under negated offsets") {
  for (CfaPattern p : kAllCfaPatterns) {
    for (long dr = -3; dr <= 3; ++dr) {
      for (long dc = -3; dc <= 3; ++dc) {
        CHECK(cfa_phase(p, dr, dc) == cfa_phase(p, dr + 2, dc));
        CHECK(cfa_phase(p, dr, dc) == cfa_phase(p, dr, dc - 2));
        CHECK(cfa_phase(cfa_phase(p, dr, dc), -dr, -dc) == p);
      }
    }
  }
}

TEST_CASE("each tile holds one R, one B, two G") {
  for (CfaPattern p : kAllCfaPatterns) {
    int reds = 0, blues = 0, greens = 0;
    for (long r = 0; r < 2; ++r) {
      for (long c = 0; c < 2; ++c) {
        switch (channel_at(p, r, c)) {
          case CfaChannel::R: ++reds; break;
          case CfaChannel::B: ++blues; break;
          default: ++greens; break;
        }
      }
    }
    CHECK(reds == 1);
    CHECK(blues == 1);
    CHECK(greens == 2);
  }
}

TEST_CASE("channel_at matches the shifted pattern") {
  for (CfaPattern p : kAllCfaPatterns)
    for (long dr = 0; dr < 2; ++dr)
      for (long dc = 0; dc < 2; ++dc)
        CHECK(channel_at(p, 10 + dr, 6 + dc) ==
              channel_at(cfa_phase(p, 10 + dr, 6 + dc), 0, 0));
}

TEST_CASE("phase_shift_between solves the alignment congruence") {
  for (CfaPattern from : kAllCfaPatterns) {
    for (CfaPattern to : kAllCfaPatterns) {
      const PhaseShift s = phase_shift_between(from, to);
      CHECK(cfa_phase(from, s.row_parity, s.col_parity) == to);
    }
  }
}

TEST_CASE("pattern names round-trip") {
  for (CfaPattern p : kAllCfaPatterns)
    CHECK(cfa_pattern_from_string(to_string(p)) == p);
  CHECK_THROWS(cfa_pattern_from_string("XYZW"));
}

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
#include <initializer_list>
#include <random>

namespace rawnoise {

// Every random routine in this library takes an explicit 64-bit seed and
// derives per-position substreams with derive_seed(seed, {tags...}).
// Substream derivation is position-based, never order-based, so results
// are identical regardless of how work is split across threads.

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives a substream seed from a master seed and a position path,
/// e.g. derive_seed(seed, {kTagShot, row}).
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t v : path) h = mix64(h ^ mix64(v));
  return h;
}

/// Engine seeded for a specific substream.
inline std::mt19937_64 make_engine(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path = {}) {
  return std::mt19937_64(derive_seed(seed, path));
}

/// Stateless uniform draw in the open interval (0, 1), keyed by position.
constexpr double u01_open(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t h = derive_seed(seed, {a, b});
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform in [0, 1) from an engine.
inline double u01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Fixed stream tags, one per independent noise component.
inline constexpr std::uint64_t kTagShot = 0x73686f74;       // "shot"
inline constexpr std::uint64_t kTagRead = 0x72656164;       // "read"
inline constexpr std::uint64_t kTagRow = 0x726f77;          // "row"
inline constexpr std::uint64_t kTagQuant = 0x7175616e;      // "quan"
inline constexpr std::uint64_t kTagFixedPattern = 0x66706e; // "fpn"
inline constexpr std::uint64_t kTagSample = 0x73616d70;     // "samp"
inline constexpr std::uint64_t kTagTile = 0x74696c65;       // "tile"
inline constexpr std::uint64_t kTagHighBit = 0x6862;        // "hb"
inline constexpr std::uint64_t kTagFrame = 0x6672616d;      // "fram"

}  // namespace rawnoise

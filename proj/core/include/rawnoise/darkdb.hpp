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
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rawnoise/frame.hpp"

namespace rawnoise {

struct DarkRecord {
  std::string id;        // "<sensor>/iso<iso>/<seq>"
  std::string rel_path;  // relative to the database root
  std::string sensor_id;
  int iso = 0;
  double exposure_seconds = 0.0;
  std::int64_t captured_at = 0;  // unix seconds
};

/// Dark frames persisted under <root>/<sensor>/iso<iso>/<seq>.rnf with a
/// line-per-record manifest.json index. The index is read-only after load;
/// ingestion assumes a single writer. Stored frames stay bit-exact as
/// captured; black subtraction happens at sample time.
class DarkFrameDb {
 public:
  static DarkFrameDb create(const std::filesystem::path& root);
  static DarkFrameDb open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }

  /// Stores the frame and appends it to the manifest; returns the record id.
  std::string ingest(const BayerFrame& frame, const std::string& sensor_id, int iso,
                     double exposure_seconds, std::int64_t captured_at = 0);

  bool has(const std::string& sensor_id, int iso) const;
  /// Records for one key, sorted by id; throws DataError naming the key when
  /// absent.
  const std::vector<DarkRecord>& records(const std::string& sensor_id, int iso) const;
  std::vector<std::string> sensors() const;
  std::vector<int> isos(const std::string& sensor_id) const;
  std::size_t record_count() const;

  /// Loads (and caches) a record's frame. Thread-safe.
  std::shared_ptr<const BayerFrame> load_frame(const DarkRecord& record) const;

 private:
  DarkFrameDb() = default;

  std::filesystem::path root_;
  std::map<std::pair<std::string, int>, std::vector<DarkRecord>> index_;

  struct FrameCache;
  std::shared_ptr<FrameCache> cache_;
};

/// `count` values drawn uniformly with replacement from the union of
/// black-subtracted pixels of all matching dark frames.
std::vector<double> sample_pixelwise(const DarkFrameDb& db, const std::string& sensor_id,
                                     int iso, std::size_t count, std::uint64_t seed);

/// Contiguous h x w crop at a uniformly random origin of a uniformly random
/// matching frame, black-subtracted. The patch CFA records the source phase
/// at the crop origin.
SignalFrame sample_patch(const DarkFrameDb& db, const std::string& sensor_id, int iso,
                         int h, int w, std::uint64_t seed);

/// Like sample_patch, but the origin is restricted so the crop's CFA phase
/// equals target_phase.
SignalFrame sample_patch_pattern_aligned(const DarkFrameDb& db,
                                         const std::string& sensor_id, int iso, int h,
                                         int w, CfaPattern target_phase,
                                         std::uint64_t seed);

}  // namespace rawnoise

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

#include "rawnoise/darkdb.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "rawnoise/errors.hpp"
#include "rawnoise/rnf.hpp"
#include "rawnoise/rng.hpp"

namespace rawnoise {

namespace {

std::string key_name(const std::string& sensor_id, int iso) {
  return "(" + sensor_id + ", iso " + std::to_string(iso) + ")";
}

std::filesystem::path manifest_path(const std::filesystem::path& root) {
  return root / "manifest.json";
}

}  // namespace

struct DarkFrameDb::FrameCache {
  std::mutex mutex;
  std::unordered_map<std::string, std::shared_ptr<const BayerFrame>> frames;
};

DarkFrameDb DarkFrameDb::create(const std::filesystem::path& root) {
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw DataError("cannot create database root: " + root.string());
  if (!std::filesystem::exists(manifest_path(root))) {
    std::ofstream fh(manifest_path(root));
    if (!fh) throw DataError("cannot write manifest: " + manifest_path(root).string());
  }
  return open(root);
}

DarkFrameDb DarkFrameDb::open(const std::filesystem::path& root) {
  DarkFrameDb db;
  db.root_ = root;
  db.cache_ = std::make_shared<FrameCache>();

  std::ifstream fh(manifest_path(root));
  if (!fh) throw DataError("cannot open manifest: " + manifest_path(root).string());
  std::string line;
  int lineno = 0;
  while (std::getline(fh, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      DarkRecord rec;
      rec.id = j.at("id").get<std::string>();
      rec.rel_path = j.at("path").get<std::string>();
      rec.sensor_id = j.at("sensor").get<std::string>();
      rec.iso = j.at("iso").get<int>();
      rec.exposure_seconds = j.at("exposure").get<double>();
      rec.captured_at = j.value("captured_at", std::int64_t{0});
      if (!std::filesystem::exists(root / rec.rel_path))
        throw DataError("manifest record '" + rec.id + "' points to missing file " +
                        (root / rec.rel_path).string());
      db.index_[{rec.sensor_id, rec.iso}].push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(manifest_path(root).string() + ":" + std::to_string(lineno) +
                      ": " + e.what());
    }
  }
  for (auto& [key, recs] : db.index_)
    std::sort(recs.begin(), recs.end(),
              [](const DarkRecord& a, const DarkRecord& b) { return a.id < b.id; });
  return db;
}

std::string DarkFrameDb::ingest(const BayerFrame& frame, const std::string& sensor_id,
                                int iso, double exposure_seconds,
                                std::int64_t captured_at) {
  if (iso <= 0) throw std::invalid_argument("ingest: iso must be positive");
  if (sensor_id.empty() || sensor_id.find('/') != std::string::npos)
    throw std::invalid_argument("ingest: bad sensor id '" + sensor_id + "'");
  frame.validate(true);

  const auto key = std::make_pair(sensor_id, iso);
  const std::size_t seq = index_.count(key) ? index_.at(key).size() + 1 : 1;
  std::ostringstream seq_name;
  seq_name.width(4);
  seq_name.fill('0');
  seq_name << seq;

  DarkRecord rec;
  rec.sensor_id = sensor_id;
  rec.iso = iso;
  rec.exposure_seconds = exposure_seconds;
  rec.captured_at = captured_at;
  rec.rel_path = sensor_id + "/iso" + std::to_string(iso) + "/" + seq_name.str() + ".rnf";
  rec.id = sensor_id + "/iso" + std::to_string(iso) + "/" + seq_name.str();

  const auto abs_path = root_ / rec.rel_path;
  if (std::filesystem::exists(abs_path))
    throw DataError("duplicate record id '" + rec.id + "': " + abs_path.string() +
                    " already exists");
  std::error_code ec;
  std::filesystem::create_directories(abs_path.parent_path(), ec);
  if (ec) throw DataError("cannot create " + abs_path.parent_path().string());

  write_rnf(abs_path, frame, RnfDtype::U16);

  nlohmann::json j;
  j["id"] = rec.id;
  j["path"] = rec.rel_path;
  j["sensor"] = rec.sensor_id;
  j["iso"] = rec.iso;
  j["exposure"] = rec.exposure_seconds;
  j["captured_at"] = rec.captured_at;
  std::ofstream fh(manifest_path(root_), std::ios::app);
  if (!fh) throw DataError("cannot append to manifest: " + manifest_path(root_).string());
  fh << j.dump() << '\n';
  if (!fh) throw DataError("manifest write failed: " + manifest_path(root_).string());

  index_[key].push_back(rec);
  return rec.id;
}

bool DarkFrameDb::has(const std::string& sensor_id, int iso) const {
  return index_.count({sensor_id, iso}) > 0;
}

const std::vector<DarkRecord>& DarkFrameDb::records(const std::string& sensor_id,
                                                    int iso) const {
  auto it = index_.find({sensor_id, iso});
  if (it == index_.end() || it->second.empty())
    throw DataError("dark-frame database has no records for " + key_name(sensor_id, iso));
  return it->second;
}

std::vector<std::string> DarkFrameDb::sensors() const {
  std::vector<std::string> out;
  for (const auto& [key, recs] : index_)
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  return out;
}

std::vector<int> DarkFrameDb::isos(const std::string& sensor_id) const {
  std::vector<int> out;
  for (const auto& [key, recs] : index_)
    if (key.first == sensor_id) out.push_back(key.second);
  return out;
}

std::size_t DarkFrameDb::record_count() const {
  std::size_t n = 0;
  for (const auto& [key, recs] : index_) n += recs.size();
  return n;
}

std::shared_ptr<const BayerFrame> DarkFrameDb::load_frame(const DarkRecord& record) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->frames.find(record.id);
    if (it != cache_->frames.end()) return it->second;
  }
  auto frame = std::make_shared<BayerFrame>(read_rnf(root_ / record.rel_path));
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->frames.emplace(record.id, std::move(frame)).first->second;
}

std::vector<double> sample_pixelwise(const DarkFrameDb& db, const std::string& sensor_id,
                                     int iso, std::size_t count, std::uint64_t seed) {
  const auto& recs = db.records(sensor_id, iso);
  std::vector<std::shared_ptr<const BayerFrame>> frames;
  frames.reserve(recs.size());
  std::vector<std::uint64_t> cumulative;  // pixel-count prefix sums
  std::uint64_t total = 0;
  for (const auto& rec : recs) {
    frames.push_back(db.load_frame(rec));
    total += frames.back()->pixel_count();
    cumulative.push_back(total);
  }

  auto eng = make_engine(seed, {kTagSample});
  std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t k = pick(eng);
    const std::size_t f =
        std::upper_bound(cumulative.begin(), cumulative.end(), k) - cumulative.begin();
    const std::uint64_t offset = k - (f == 0 ? 0 : cumulative[f - 1]);
    out.push_back(frames[f]->samples[offset] - frames[f]->black_level);
  }
  return out;
}

namespace {

SignalFrame crop_patch(const DarkFrameDb& db, const std::string& sensor_id, int iso,
                       int h, int w, std::uint64_t seed, const CfaPattern* target_phase) {
  if (h <= 0 || w <= 0) throw std::invalid_argument("patch dims must be positive");
  const auto& recs = db.records(sensor_id, iso);

  int min_h = recs.empty() ? 0 : INT32_MAX, min_w = min_h;
  std::vector<std::shared_ptr<const BayerFrame>> frames;
  frames.reserve(recs.size());
  for (const auto& rec : recs) {
    frames.push_back(db.load_frame(rec));
    min_h = std::min(min_h, frames.back()->height);
    min_w = std::min(min_w, frames.back()->width);
  }
  if (h > min_h || w > min_w)
    throw DataError("patch " + std::to_string(h) + "x" + std::to_string(w) +
                    " larger than the smallest dark frame (" + std::to_string(min_h) +
                    "x" + std::to_string(min_w) + ") for " + key_name(sensor_id, iso));

  auto eng = make_engine(seed, {kTagSample});
  std::uniform_int_distribution<std::size_t> pick_frame(0, frames.size() - 1);
  const auto& frame = *frames[pick_frame(eng)];

  int row = 0, col = 0;
  if (target_phase == nullptr) {
    row = static_cast<int>(
        std::uniform_int_distribution<int>(0, frame.height - h)(eng));
    col = static_cast<int>(std::uniform_int_distribution<int>(0, frame.width - w)(eng));
  } else {
    // Restrict the origin to the parity class that maps the source pattern
    // onto the requested phase.
    const PhaseShift shift = phase_shift_between(frame.cfa, *target_phase);
    const int max_kr = (frame.height - h - shift.row_parity) / 2;
    const int max_kc = (frame.width - w - shift.col_parity) / 2;
    if (max_kr < 0 || max_kc < 0)
      throw DataError("patch too large for pattern-aligned sampling from " +
                      key_name(sensor_id, iso));
    row = shift.row_parity + 2 * std::uniform_int_distribution<int>(0, max_kr)(eng);
    col = shift.col_parity + 2 * std::uniform_int_distribution<int>(0, max_kc)(eng);
  }

  SignalFrame out;
  out.width = w;
  out.height = h;
  out.cfa = cfa_phase(frame.cfa, row, col);
  out.values.resize(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      out.at(r, c) = frame.at(row + r, col + c) - frame.black_level;
  return out;
}

}  // namespace

SignalFrame sample_patch(const DarkFrameDb& db, const std::string& sensor_id, int iso,
                         int h, int w, std::uint64_t seed) {
  return crop_patch(db, sensor_id, iso, h, w, seed, nullptr);
}

SignalFrame sample_patch_pattern_aligned(const DarkFrameDb& db,
                                         const std::string& sensor_id, int iso, int h,
                                         int w, CfaPattern target_phase,
                                         std::uint64_t seed) {
  return crop_patch(db, sensor_id, iso, h, w, seed, &target_phase);
}

}  // namespace rawnoise

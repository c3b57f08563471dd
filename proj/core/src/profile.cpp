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

#include "rawnoise/profile.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rawnoise/errors.hpp"

namespace rawnoise {

double IsoProfile::effective_tl_scale() const {
  if (tl_scale > 0.0) return tl_scale;
  if (beta2 <= 0.0) return 0.0;
  return std::sqrt(beta2 / tukey_lambda_variance(tl_lambda));
}

const IsoProfile& ProfileDocument::require(int iso) const {
  auto it = per_iso.find(iso);
  if (it == per_iso.end())
    throw DataError("profile for sensor '" + sensor_id + "' has no section for iso " +
                    std::to_string(iso));
  return it->second;
}

IsoProfile& ProfileDocument::section(int iso) {
  auto& s = per_iso[iso];
  s.iso = iso;
  return s;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void save_profile(const std::filesystem::path& path, const ProfileDocument& doc) {
  std::ofstream fh(path);
  if (!fh) throw DataError("cannot write profile: " + path.string());
  fh << "sensor=" << doc.sensor_id << '\n';
  for (const auto& [iso, s] : doc.per_iso) {
    fh << '\n' << "[iso " << iso << "]\n";
    fh << "beta1=" << fmt(s.beta1) << '\n';
    fh << "beta2=" << fmt(s.beta2) << '\n';
    fh << "row_sigma=" << fmt(s.row_sigma) << '\n';
    fh << "tl_lambda=" << fmt(s.tl_lambda) << '\n';
    fh << "tl_scale=" << fmt(s.tl_scale) << '\n';
    fh << "ptc_r_squared=" << fmt(s.ptc_r_squared) << '\n';
    if (s.fitted) {
      fh << "family=" << to_string(s.fitted->family) << '\n';
      fh << "family_location=" << fmt(s.fitted->location) << '\n';
      fh << "family_scale=" << fmt(s.fitted->scale) << '\n';
      if (s.fitted->shape) fh << "family_shape=" << fmt(*s.fitted->shape) << '\n';
      fh << "family_ks=" << fmt(s.fitted->gof_statistic) << '\n';
    }
    fh << "quant_step=" << fmt(s.quant_step) << '\n';
    fh << "bit_depth=" << s.bit_depth << '\n';
    fh << "black_level=" << fmt(s.black_level) << '\n';
    fh << "white_level=" << fmt(s.white_level) << '\n';
  }
}

ProfileDocument load_profile(const std::filesystem::path& path) {
  std::ifstream fh(path);
  if (!fh) throw DataError("cannot open profile: " + path.string());

  ProfileDocument doc;
  IsoProfile* current = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(fh, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.rfind("[iso ", 0) != 0 || line.back() != ']')
        throw DataError(path.string() + ":" + std::to_string(lineno) +
                        ": bad section header '" + line + "'");
      const int iso = std::stoi(line.substr(5, line.size() - 6));
      current = &doc.section(iso);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": malformed line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "sensor") {
        doc.sensor_id = value;
        continue;
      }
      if (current == nullptr)
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": key '" + key +
                        "' before any [iso] section");
      IsoProfile& s = *current;
      if (key == "beta1") s.beta1 = std::stod(value);
      else if (key == "beta2") s.beta2 = std::stod(value);
      else if (key == "row_sigma") s.row_sigma = std::stod(value);
      else if (key == "tl_lambda") s.tl_lambda = std::stod(value);
      else if (key == "tl_scale") s.tl_scale = std::stod(value);
      else if (key == "ptc_r_squared") s.ptc_r_squared = std::stod(value);
      else if (key == "family") {
        FittedDistribution d;
        d.family = dist_family_from_string(value);
        if (s.fitted) d.location = s.fitted->location;
        s.fitted = d;
      } else if (key == "family_location") {
        if (!s.fitted) s.fitted = FittedDistribution{};
        s.fitted->location = std::stod(value);
      } else if (key == "family_scale") {
        if (!s.fitted) s.fitted = FittedDistribution{};
        s.fitted->scale = std::stod(value);
      } else if (key == "family_shape") {
        if (!s.fitted) s.fitted = FittedDistribution{};
        s.fitted->shape = std::stod(value);
      } else if (key == "family_ks") {
        if (!s.fitted) s.fitted = FittedDistribution{};
        s.fitted->gof_statistic = std::stod(value);
      } else if (key == "quant_step") s.quant_step = std::stod(value);
      else if (key == "bit_depth") s.bit_depth = std::stoi(value);
      else if (key == "black_level") s.black_level = std::stod(value);
      else if (key == "white_level") s.white_level = std::stod(value);
      else
        throw DataError(path.string() + ":" + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": bad value for '" + key + "'");
    }
  }
  for (auto& [iso, s] : doc.per_iso)
    if (s.fitted) s.fitted->validate();
  return doc;
}

}  // namespace rawnoise

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

#include "rawnoise/vsensor.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rawnoise/distributions.hpp"
#include "rawnoise/errors.hpp"
#include "rawnoise/parallel.hpp"
#include "rawnoise/rng.hpp"

namespace rawnoise {

double VirtualSensorParams::effective_white() const {
  return white_level > 0.0 ? white_level : max_digital_number(quant_step, bit_depth);
}

double VirtualSensorParams::dark_variance_dn() const {
  const double ka_kd = k_analog * k_digital;
  double mean_ch2 = 0.0;
  for (double s : channel_read_scale) mean_ch2 += s * s;
  mean_ch2 /= 4.0;
  return ka_kd * ka_kd * (read1_sigma * read1_sigma + row_sigma * row_sigma) +
         k_digital * k_digital * read2_sigma * read2_sigma * mean_ch2 +
         ka_kd * ka_kd * fpn_amplitude * fpn_amplitude;
}

VirtualSensorParams VirtualSensorParams::at_iso(int iso) const {
  auto it = iso_gains.find(iso);
  if (it == iso_gains.end())
    throw DataError("sensor params: no gain entry for iso " + std::to_string(iso));
  VirtualSensorParams p = *this;
  p.k_analog = it->second.first;
  p.k_digital = it->second.second;
  return p;
}

namespace {

// One unit-variance read1 draw.
double read1_unit_draw(const VirtualSensorParams& p, std::mt19937_64& eng,
                       std::normal_distribution<double>& gauss, double tl_unit_scale) {
  if (p.read1_dist == ReadNoiseDist::Gaussian) return gauss(eng);
  return tukey_lambda_quantile(u01(eng), p.read1_tl_lambda) * tl_unit_scale;
}

}  // namespace

BayerFrame simulate_frame(const SignalFrame& photon_map,
                          const VirtualSensorParams& params, std::uint64_t seed) {
  if (photon_map.width != params.width || photon_map.height != params.height)
    throw std::invalid_argument("simulate_frame: photon map dimensions mismatch");
  for (double v : photon_map.values)
    if (v < 0.0) throw std::invalid_argument("simulate_frame: photon map must be >= 0");

  BayerFrame out;
  out.width = params.width;
  out.height = params.height;
  out.cfa = params.cfa;
  out.bit_depth = params.bit_depth;
  out.quant_step = params.quant_step;
  out.black_level = params.black_level;
  out.white_level = params.effective_white();
  out.samples.resize(photon_map.pixel_count());

  const double q = params.quant_step;
  const std::int64_t n_white =
      static_cast<std::int64_t>(std::floor(out.white_level / q + 1e-9));
  const double tl_unit_scale =
      params.read1_dist == ReadNoiseDist::TukeyLambda
          ? 1.0 / std::sqrt(tukey_lambda_variance(params.read1_tl_lambda))
          : 0.0;

  parallel_for_rows(static_cast<std::size_t>(params.height),
                    [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
      auto eng = make_engine(seed, {static_cast<std::uint64_t>(r)});
      std::normal_distribution<double> gauss(0.0, 1.0);

      double row_offset = 0.0;
      if (params.row_sigma > 0.0) {
        auto row_eng = make_engine(seed, {kTagRow, static_cast<std::uint64_t>(r)});
        std::normal_distribution<double> row_gauss(0.0, params.row_sigma);
        row_offset = row_gauss(row_eng);
      }

      double prev_lambda = -1.0;
      std::poisson_distribution<long long> poisson;
      for (int c = 0; c < params.width; ++c) {
        const double lambda = photon_map.at(static_cast<int>(r), c);
        double electrons = 0.0;
        if (lambda > 0.0) {
          if (lambda != prev_lambda) {
            poisson = std::poisson_distribution<long long>(lambda);
            prev_lambda = lambda;
          }
          electrons = static_cast<double>(poisson(eng));
        }
        if (params.read1_sigma > 0.0)
          electrons += params.read1_sigma * read1_unit_draw(params, eng, gauss, tl_unit_scale);
        electrons += row_offset;
        if (params.fpn_amplitude > 0.0)
          electrons += params.fpn_amplitude *
                       gaussian_quantile(u01_open(
                           derive_seed(params.fpn_seed, {kTagFixedPattern}),
                           r, static_cast<std::uint64_t>(c)));

        double analog = params.k_analog * electrons;
        if (params.read2_sigma > 0.0) {
          const int ch = channel_index(channel_at(params.cfa, static_cast<long>(r), c));
          analog += params.read2_sigma * params.channel_read_scale[ch] * gauss(eng);
        }
        const double dn = params.k_digital * analog + params.black_level;
        std::int64_t n = quantize_step_number(dn, q, params.bit_depth);
        if (n > n_white) n = n_white;
        out.at(static_cast<int>(r), c) = static_cast<double>(n) * q;
      }
    }
  });
  return out;
}

std::vector<BayerFrame> simulate_flat_stack(double level,
                                            const VirtualSensorParams& params,
                                            int n_frames, std::uint64_t seed) {
  if (n_frames < 2)
    throw std::invalid_argument("simulate_flat_stack: need at least 2 frames");
  if (level < 0.0)
    throw std::invalid_argument("simulate_flat_stack: level must be >= 0");
  const SignalFrame photons =
      make_signal_frame(params.width, params.height, params.cfa, level);
  std::vector<BayerFrame> stack;
  stack.reserve(static_cast<std::size_t>(n_frames));
  for (int i = 0; i < n_frames; ++i)
    stack.push_back(simulate_frame(
        photons, params, derive_seed(seed, {kTagFrame, static_cast<std::uint64_t>(i)})));
  return stack;
}

BayerFrame simulate_dark_frame(const VirtualSensorParams& params, std::uint64_t seed) {
  const SignalFrame zeros =
      make_signal_frame(params.width, params.height, params.cfa, 0.0);
  return simulate_frame(zeros, params, seed);
}

namespace {

const char* to_string(ReadNoiseDist d) {
  return d == ReadNoiseDist::Gaussian ? "gaussian" : "tukey_lambda";
}

std::string fmt_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void save_sensor_params(const std::filesystem::path& path,
                        const VirtualSensorParams& p) {
  std::ofstream fh(path);
  if (!fh) throw DataError("cannot write: " + path.string());
  fh << "width=" << p.width << '\n';
  fh << "height=" << p.height << '\n';
  fh << "cfa=" << to_string(p.cfa) << '\n';
  fh << "k_analog=" << fmt_real(p.k_analog) << '\n';
  fh << "k_digital=" << fmt_real(p.k_digital) << '\n';
  fh << "read1_sigma=" << fmt_real(p.read1_sigma) << '\n';
  fh << "read1_dist=" << to_string(p.read1_dist) << '\n';
  fh << "read1_tl_lambda=" << fmt_real(p.read1_tl_lambda) << '\n';
  fh << "read2_sigma=" << fmt_real(p.read2_sigma) << '\n';
  fh << "channel_read_scale=" << fmt_real(p.channel_read_scale[0]) << ','
     << fmt_real(p.channel_read_scale[1]) << ',' << fmt_real(p.channel_read_scale[2])
     << ',' << fmt_real(p.channel_read_scale[3]) << '\n';
  fh << "row_sigma=" << fmt_real(p.row_sigma) << '\n';
  fh << "fpn_seed=" << p.fpn_seed << '\n';
  fh << "fpn_amplitude=" << fmt_real(p.fpn_amplitude) << '\n';
  fh << "bit_depth=" << p.bit_depth << '\n';
  fh << "quant_step=" << fmt_real(p.quant_step) << '\n';
  fh << "black_level=" << fmt_real(p.black_level) << '\n';
  fh << "white_level=" << fmt_real(p.white_level) << '\n';
  for (const auto& [iso, gains] : p.iso_gains)
    fh << "iso" << iso << "_gains=" << fmt_real(gains.first) << ','
       << fmt_real(gains.second) << '\n';
}

VirtualSensorParams load_sensor_params(const std::filesystem::path& path) {
  std::ifstream fh(path);
  if (!fh) throw DataError("cannot open: " + path.string());
  VirtualSensorParams p;
  std::string line;
  int lineno = 0;
  while (std::getline(fh, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": malformed line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "width") p.width = std::stoi(value);
      else if (key == "height") p.height = std::stoi(value);
      else if (key == "cfa") p.cfa = cfa_pattern_from_string(value);
      else if (key == "k_analog") p.k_analog = std::stod(value);
      else if (key == "k_digital") p.k_digital = std::stod(value);
      else if (key == "read1_sigma") p.read1_sigma = std::stod(value);
      else if (key == "read1_dist")
        p.read1_dist = value == "tukey_lambda" ? ReadNoiseDist::TukeyLambda
                                               : ReadNoiseDist::Gaussian;
      else if (key == "read1_tl_lambda") p.read1_tl_lambda = std::stod(value);
      else if (key == "read2_sigma") p.read2_sigma = std::stod(value);
      else if (key == "channel_read_scale") {
        std::istringstream ss(value);
        std::string item;
        for (int i = 0; i < 4; ++i) {
          if (!std::getline(ss, item, ','))
            throw DataError("channel_read_scale needs 4 comma-separated values");
          p.channel_read_scale[static_cast<std::size_t>(i)] = std::stod(item);
        }
      } else if (key == "row_sigma") p.row_sigma = std::stod(value);
      else if (key == "fpn_seed") p.fpn_seed = std::stoull(value);
      else if (key == "fpn_amplitude") p.fpn_amplitude = std::stod(value);
      else if (key == "bit_depth") p.bit_depth = std::stoi(value);
      else if (key == "quant_step") p.quant_step = std::stod(value);
      else if (key == "black_level") p.black_level = std::stod(value);
      else if (key == "white_level") p.white_level = std::stod(value);
      else if (key.rfind("iso", 0) == 0 && key.size() > 9 &&
               key.substr(key.size() - 6) == "_gains") {
        const int iso = std::stoi(key.substr(3, key.size() - 9));
        const auto comma = value.find(',');
        if (comma == std::string::npos)
          throw DataError("iso gains need 'k_analog,k_digital'");
        p.iso_gains[iso] = {std::stod(value.substr(0, comma)),
                            std::stod(value.substr(comma + 1))};
      } else {
        throw DataError(path.string() + ": unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": bad value for '" + key + "'");
    }
  }
  if (p.k_analog <= 0.0 || p.k_digital <= 0.0)
    throw DataError(path.string() + ": gains must be positive");
  return p;
}

}  // namespace rawnoise

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

#include "rawnoise/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "rawnoise/distributions.hpp"
#include "rawnoise/errors.hpp"
#include "rawnoise/highbit.hpp"
#include "rawnoise/parallel.hpp"
#include "rawnoise/rng.hpp"

namespace rawnoise {

SignalFrame shot_noise(const SignalFrame& clean, double total_gain, std::uint64_t seed) {
  if (!(total_gain > 0.0))
    throw std::invalid_argument("shot_noise: total gain must be positive");

  SignalFrame out = clean;
  parallel_for_rows(static_cast<std::size_t>(clean.height),
                    [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
      auto eng = make_engine(seed, {kTagShot, static_cast<std::uint64_t>(r)});
      double prev_lambda = -1.0;
      std::poisson_distribution<long long> poisson;
      for (int c = 0; c < clean.width; ++c) {
        const double y = clean.at(static_cast<int>(r), c);
        const double lambda = std::max(y, 0.0) / total_gain;
        double counts = 0.0;
        if (lambda > 0.0) {
          if (lambda != prev_lambda) {
            poisson = std::poisson_distribution<long long>(lambda);
            prev_lambda = lambda;
          }
          counts = static_cast<double>(poisson(eng));
        }
        // Negative residual carried additively to preserve the mean.
        out.at(static_cast<int>(r), c) = counts * total_gain + std::min(y, 0.0);
      }
    }
  });
  return out;
}

SignalFrame synth_pg(const SignalFrame& clean, double beta1, double beta2,
                     std::uint64_t seed) {
  if (!(beta1 > 0.0)) throw std::invalid_argument("synth_pg: beta1 must be positive");
  if (beta2 < 0.0) throw std::invalid_argument("synth_pg: beta2 must be >= 0");

  SignalFrame out = shot_noise(clean, beta1, seed);
  if (beta2 == 0.0) return out;
  const double sigma = std::sqrt(beta2);
  parallel_for_rows(static_cast<std::size_t>(clean.height),
                    [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
      auto eng = make_engine(seed, {kTagRead, static_cast<std::uint64_t>(r)});
      std::normal_distribution<double> gauss(0.0, sigma);
      for (int c = 0; c < clean.width; ++c) out.at(static_cast<int>(r), c) += gauss(eng);
    }
  });
  return out;
}

SignalFrame synth_eld_like(const SignalFrame& clean, const EldParams& params,
                           std::uint64_t seed) {
  if (!(params.beta1 > 0.0))
    throw std::invalid_argument("synth_eld_like: beta1 must be positive");

  SignalFrame out = shot_noise(clean, params.beta1, seed);

  const bool stripe_rows = params.axis == StripeAxis::Rows;
  const int n_lines = stripe_rows ? clean.height : clean.width;
  std::vector<double> line_offsets(static_cast<std::size_t>(n_lines), 0.0);
  if (params.row_sigma > 0.0) {
    for (int i = 0; i < n_lines; ++i) {
      auto eng = make_engine(seed, {kTagRow, static_cast<std::uint64_t>(i)});
      std::normal_distribution<double> gauss(0.0, params.row_sigma);
      line_offsets[static_cast<std::size_t>(i)] = gauss(eng);
    }
  }

  parallel_for_rows(static_cast<std::size_t>(clean.height),
                    [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t r = row_begin; r < row_end; ++r) {
      auto eng = make_engine(seed, {kTagRead, static_cast<std::uint64_t>(r)});
      auto quant_eng = make_engine(seed, {kTagQuant, static_cast<std::uint64_t>(r)});
      for (int c = 0; c < clean.width; ++c) {
        double v = out.at(static_cast<int>(r), c);
        if (params.tl_scale > 0.0)
          v += params.tl_scale * tukey_lambda_quantile(u01(eng), params.tl_lambda);
        if (params.row_sigma > 0.0)
          v += line_offsets[static_cast<std::size_t>(stripe_rows ? static_cast<int>(r) : c)];
        if (params.quant_step > 0.0)
          v += params.quant_step * (u01(quant_eng) - 0.5);
        out.at(static_cast<int>(r), c) = v;
      }
    }
  });
  return out;
}

std::string to_string(SynthMode mode) {
  switch (mode) {
    case SynthMode::PG: return "pg";
    case SynthMode::ELD: return "eld";
    case SynthMode::RealPixelwise: return "pixel";
    case SynthMode::RealPatch: return "patch";
    case SynthMode::RealPAP: return "pap";
  }
  return "pap";
}

SynthMode synth_mode_from_string(const std::string& name) {
  if (name == "pg") return SynthMode::PG;
  if (name == "eld") return SynthMode::ELD;
  if (name == "pixel") return SynthMode::RealPixelwise;
  if (name == "patch") return SynthMode::RealPatch;
  if (name == "pap") return SynthMode::RealPAP;
  throw DataError("unknown synthesis mode: '" + name + "'");
}

BayerFrame finalize_to_raw(const SignalFrame& noisy_signal, const IsoProfile& p) {
  BayerFrame out = quantize(noisy_signal, p.black_level, p.quant_step, p.bit_depth);
  const double white =
      p.white_level > 0.0 ? p.white_level : max_digital_number(p.quant_step, p.bit_depth);
  const double white_grid =
      std::floor(white / p.quant_step + 1e-9) * p.quant_step;
  for (double& s : out.samples) s = std::min(s, white_grid);
  out.white_level = white;
  return out;
}

namespace {

bool is_real_mode(SynthMode mode) {
  return mode == SynthMode::RealPixelwise || mode == SynthMode::RealPatch ||
         mode == SynthMode::RealPAP;
}

BinSampler make_bin_sampler(const IsoProfile& p) {
  if (!p.fitted)
    throw DataError("profile section for iso " + std::to_string(p.iso) +
                    " has no fitted distribution (required for --highbit)");
  BinSampler sampler;
  sampler.dist = *p.fitted;
  sampler.q = p.quant_step;
  // Saturation levels in black-subtracted value space.
  sampler.min_value = -p.black_level;
  const double white =
      p.white_level > 0.0 ? p.white_level : max_digital_number(p.quant_step, p.bit_depth);
  sampler.max_value = white - p.black_level;
  return sampler;
}

/// Signal-independent layer assembled from the dark-frame database.
SignalFrame independent_layer(const SignalFrame& clean, const DarkFrameDb& db,
                              const SynthConfig& config, const IsoProfile& p) {
  SignalFrame layer = make_signal_frame(clean.width, clean.height, clean.cfa, 0.0);

  if (config.mode == SynthMode::RealPixelwise) {
    const auto values = sample_pixelwise(db, config.sensor_id, config.iso,
                                         layer.pixel_count(), config.seed);
    layer.values = values;
    if (config.highbit) {
      const auto rec = reconstruct(layer, make_bin_sampler(p),
                                   derive_seed(config.seed, {kTagHighBit}));
      layer = rec.frame;
    }
    return layer;
  }

  const int step = std::max(2, config.patch_size - config.patch_size % 2);
  for (int r0 = 0; r0 < clean.height; r0 += step) {
    for (int c0 = 0; c0 < clean.width; c0 += step) {
      const int th = std::min(step, clean.height - r0);
      const int tw = std::min(step, clean.width - c0);
      const std::uint64_t tile_seed =
          derive_seed(config.seed, {kTagTile, static_cast<std::uint64_t>(r0),
                                    static_cast<std::uint64_t>(c0)});
      SignalFrame patch;
      if (config.mode == SynthMode::RealPAP) {
        const CfaPattern target = cfa_phase(clean.cfa, r0, c0);
        patch = sample_patch_pattern_aligned(db, config.sensor_id, config.iso, th, tw,
                                             target, tile_seed);
      } else {
        patch = sample_patch(db, config.sensor_id, config.iso, th, tw, tile_seed);
      }
      if (config.highbit) {
        const auto rec = reconstruct(patch, make_bin_sampler(p),
                                     derive_seed(tile_seed, {kTagHighBit}));
        patch = rec.frame;
      }
      for (int r = 0; r < th; ++r)
        for (int c = 0; c < tw; ++c) layer.at(r0 + r, c0 + c) = patch.at(r, c);
    }
  }
  return layer;
}

}  // namespace

BayerFrame compose_real(const SignalFrame& clean, const DarkFrameDb& db,
                        const SynthConfig& config) {
  if (!is_real_mode(config.mode))
    throw std::invalid_argument(
        "compose_real handles the Real* modes; use synth_pg/synth_eld_like (or "
        "synthesize_raw) for physics-based baselines");
  const IsoProfile& p = config.profile.require(config.iso);
  if (!db.has(config.sensor_id, config.iso))
    throw DataError("dark-frame database has no records for (" + config.sensor_id +
                    ", iso " + std::to_string(config.iso) + ")");
  if (!(p.beta1 > 0.0) && config.enable_shot)
    throw DataError("profile section for iso " + std::to_string(config.iso) +
                    " has no positive beta1 (total gain)");

  SignalFrame dependent =
      config.enable_shot ? shot_noise(clean, p.beta1, config.seed) : clean;
  const SignalFrame independent = independent_layer(clean, db, config, p);

  SignalFrame sum = dependent;
  for (std::size_t i = 0; i < sum.values.size(); ++i)
    sum.values[i] += independent.values[i];
  return finalize_to_raw(sum, p);
}

BayerFrame synthesize_raw(const SignalFrame& clean, const DarkFrameDb* db,
                          const SynthConfig& config) {
  if (config.highbit && !is_real_mode(config.mode))
    throw std::invalid_argument("highbit reconstruction applies to Real* modes only");
  const IsoProfile& p = config.profile.require(config.iso);
  switch (config.mode) {
    case SynthMode::PG:
      return finalize_to_raw(synth_pg(clean, p.beta1, p.beta2, config.seed), p);
    case SynthMode::ELD: {
      EldParams params;
      params.beta1 = p.beta1;
      params.tl_lambda = p.tl_lambda;
      params.tl_scale = p.effective_tl_scale();
      params.row_sigma = p.row_sigma;
      params.quant_step = p.quant_step;
      return finalize_to_raw(synth_eld_like(clean, params, config.seed), p);
    }
    default:
      if (db == nullptr)
        throw DataError("Real* synthesis modes need a dark-frame database (--db)");
      return compose_real(clean, *db, config);
  }
}

}  // namespace rawnoise

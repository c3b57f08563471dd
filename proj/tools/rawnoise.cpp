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

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rawnoise/calibrate.hpp"
#include "rawnoise/darkdb.hpp"
#include "rawnoise/errors.hpp"
#include "rawnoise/highbit.hpp"
#include "rawnoise/parallel.hpp"
#include "rawnoise/profile.hpp"
#include "rawnoise/report.hpp"
#include "rawnoise/rnf.hpp"
#include "rawnoise/rng.hpp"
#include "rawnoise/synth.hpp"
#include "rawnoise/vsensor.hpp"

namespace fs = std::filesystem;
using namespace rawnoise;

namespace {

constexpr const char* kVersion = "rawnoise 0.1.0";

std::vector<fs::path> rnf_files_in(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".rnf")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .rnf files in " + dir.string());
  return files;
}

std::vector<BayerFrame> load_frames(const std::vector<fs::path>& paths) {
  std::vector<BayerFrame> frames;
  frames.reserve(paths.size());
  for (const auto& p : paths) frames.push_back(read_rnf(p));
  return frames;
}

std::vector<double> pooled_noise_values(const std::vector<BayerFrame>& frames) {
  std::vector<double> values;
  std::size_t total = 0;
  for (const auto& f : frames) total += f.pixel_count();
  values.reserve(total);
  for (const auto& f : frames)
    for (double s : f.samples) values.push_back(s - f.black_level);
  return values;
}

struct ExplainSink {
  bool enabled = false;
  void note(const std::string& key, double value, const std::string& source) const {
    if (enabled)
      std::cout << "config " << key << "=" << value << " (" << source << ")\n";
  }
};

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& kind, const fs::path& params_path, double level,
                 int n, std::uint64_t seed, const fs::path& out_dir, int iso) {
  VirtualSensorParams params = load_sensor_params(params_path);
  if (iso > 0) params = params.at_iso(iso);
  fs::create_directories(out_dir);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t frame_seed =
        derive_seed(seed, {kTagFrame, static_cast<std::uint64_t>(i)});
    BayerFrame frame;
    if (kind == "dark") {
      frame = simulate_dark_frame(params, frame_seed);
    } else {
      const SignalFrame photons =
          make_signal_frame(params.width, params.height, params.cfa, level);
      frame = simulate_frame(photons, params, frame_seed);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "%s_%04d.rnf", kind.c_str(), i + 1);
    write_rnf(out_dir / name, frame, RnfDtype::U16);
  }
  std::cout << "wrote " << n << " " << kind << " frame(s) to " << out_dir.string()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const fs::path& db_dir, const std::string& sensor, int iso,
               double exposure, std::int64_t captured_at,
               const std::vector<fs::path>& frames) {
  DarkFrameDb db = DarkFrameDb::create(db_dir);
  for (const auto& path : frames) {
    const BayerFrame frame = read_rnf(path);
    const std::string id = db.ingest(frame, sensor, iso, exposure, captured_at);
    std::cout << path.string() << " -> " << id << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// calibrate

void update_profile_file(const fs::path& path, const std::string& sensor,
                         const std::function<void(ProfileDocument&)>& apply) {
  ProfileDocument doc;
  if (fs::exists(path)) doc = load_profile(path);
  if (doc.sensor_id.empty()) doc.sensor_id = sensor;
  apply(doc);
  save_profile(path, doc);
}

int cmd_calibrate_ptc(const std::vector<fs::path>& stack_dirs, const fs::path& out,
                      const std::string& sensor, int iso) {
  std::vector<std::vector<BayerFrame>> stacks;
  for (const auto& dir : stack_dirs) stacks.push_back(load_frames(rnf_files_in(dir)));
  const PhotonTransferFit fit = photon_transfer_fit(stacks);
  std::cout << "photon transfer: gain=" << fit.gain << " DN/e-"
            << " intercept=" << fit.intercept << " DN^2 r2=" << fit.r_squared << "\n";
  for (const auto& [m, v] : fit.points)
    std::cout << "  level mean=" << m << " variance=" << v << "\n";
  if (!out.empty()) {
    const BayerFrame& ref = stacks.front().front();
    update_profile_file(out, sensor, [&](ProfileDocument& doc) {
      IsoProfile& s = doc.section(iso);
      s.beta1 = fit.gain;
      s.ptc_r_squared = fit.r_squared;
      if (s.beta2 == 0.0) s.beta2 = std::max(fit.intercept, 0.0);
      s.quant_step = ref.quant_step;
      s.bit_depth = ref.bit_depth;
      s.black_level = ref.black_level;
      s.white_level = ref.white_level;
    });
    std::cout << "updated " << out.string() << " [iso " << iso << "]\n";
  }
  return 0;
}

int cmd_calibrate_dist(const fs::path& db_dir, const std::string& sensor, int iso,
                       const fs::path& out, bool per_channel, double lambda_min,
                       double lambda_max, double lambda_step) {
  DarkFrameDb db = DarkFrameDb::open(db_dir);
  std::vector<BayerFrame> darks;
  for (const auto& rec : db.records(sensor, iso)) darks.push_back(*db.load_frame(rec));
  const BayerFrame& ref = darks.front();

  const double beta2 = estimate_read_variance(darks);
  const double row_sigma = estimate_row_sigma(darks);
  std::vector<double> values = pooled_noise_values(darks);

  std::vector<double> grid;
  for (double l = lambda_min; l <= lambda_max + 1e-12; l += lambda_step)
    grid.push_back(l);
  // PPCC correlation cost is grid x n; a deterministic subsample is plenty.
  std::vector<double> ppcc_values = values;
  if (ppcc_values.size() > 200000) {
    auto eng = make_engine(12345, {kTagSample});
    std::shuffle(ppcc_values.begin(), ppcc_values.end(), eng);
    ppcc_values.resize(200000);
  }
  const PpccResult ppcc = ppcc_tukey_lambda(ppcc_values, grid);

  const DistributionSetFit set_fit = fit_distribution_set(values, ref.quant_step);
  FittedDistribution tl_fit;
  bool have_tl = false;
  for (const auto& r : set_fit.per_family)
    if (r.family == DistFamily::TukeyLambda && r.fit) {
      tl_fit = *r.fit;
      have_tl = true;
    }

  std::cout << "beta2=" << beta2 << " DN^2  row_sigma=" << row_sigma << " DN\n";
  std::cout << "ppcc best lambda=" << ppcc.best_lambda << "\n";
  for (const auto& r : set_fit.per_family) {
    std::cout << "  " << to_string(r.family) << ": ";
    if (r.fit)
      std::cout << "ks=" << r.ks << " location=" << r.fit->location
                << " scale=" << r.fit->scale
                << (r.fit->shape ? " shape=" + std::to_string(*r.fit->shape) : "")
                << "\n";
    else
      std::cout << "failed (" << r.diagnostic << ")\n";
  }
  std::cout << "selected family: " << to_string(set_fit.best.family)
            << " (ks=" << set_fit.best.gof_statistic << ")\n";

  if (per_channel) {
    for (CfaChannel ch : {CfaChannel::R, CfaChannel::G1, CfaChannel::G2, CfaChannel::B}) {
      std::vector<double> ch_values;
      for (const auto& f : darks)
        for (int r = 0; r < f.height; ++r)
          for (int c = 0; c < f.width; ++c)
            if (channel_at(f.cfa, r, c) == ch)
              ch_values.push_back(f.at(r, c) - f.black_level);
      const auto ch_fit = fit_distribution_set(ch_values, ref.quant_step);
      std::cout << "channel " << to_string(ch) << ": "
                << to_string(ch_fit.best.family) << " ks=" << ch_fit.best.gof_statistic
                << " scale=" << ch_fit.best.scale << "\n";
    }
  }

  if (!out.empty()) {
    update_profile_file(out, sensor, [&](ProfileDocument& doc) {
      IsoProfile& s = doc.section(iso);
      s.beta2 = beta2;
      s.row_sigma = row_sigma;
      s.tl_lambda = ppcc.best_lambda;
      if (have_tl) s.tl_scale = tl_fit.scale;
      s.fitted = set_fit.best;
      s.quant_step = ref.quant_step;
      s.bit_depth = ref.bit_depth;
      s.black_level = ref.black_level;
      s.white_level = ref.white_level;
    });
    std::cout << "updated " << out.string() << " [iso " << iso << "]\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// synthesize / reconstruct

struct LevelOverrides {
  double quant_step = -1.0;
  int bit_depth = -1;
  double black_level = -1.0;
  double white_level = -1.0;

  IsoProfile apply(const IsoProfile& base, const ExplainSink& explain) const {
    IsoProfile p = base;
    auto pick = [&](const char* key, double flag, double prof, double dflt) {
      if (flag >= 0.0) {
        explain.note(key, flag, "flag");
        return flag;
      }
      if (prof > 0.0) {
        explain.note(key, prof, "profile");
        return prof;
      }
      explain.note(key, dflt, "default");
      return dflt;
    };
    p.quant_step = pick("quant_step", quant_step, base.quant_step, 1.0);
    p.bit_depth = bit_depth > 0 ? bit_depth : (base.bit_depth > 0 ? base.bit_depth : 14);
    explain.note("bit_depth", p.bit_depth,
                 bit_depth > 0 ? "flag" : (base.bit_depth > 0 ? "profile" : "default"));
    p.black_level = pick("black_level", black_level, base.black_level, 0.0);
    p.white_level = pick("white_level", white_level, base.white_level,
                         max_digital_number(p.quant_step, p.bit_depth));
    return p;
  }
};

int cmd_synthesize(const std::string& mode_name, bool highbit, const fs::path& profile,
                   const fs::path& db_dir, const std::string& sensor, int iso,
                   std::uint64_t seed, int patch_size, bool no_shot,
                   const LevelOverrides& overrides, bool explain_flag,
                   const fs::path& clean_path, const fs::path& out_path) {
  SynthConfig config;
  config.mode = synth_mode_from_string(mode_name);
  config.highbit = highbit;
  config.profile = load_profile(profile);
  config.sensor_id = sensor;
  config.iso = iso;
  config.seed = seed;
  config.patch_size = patch_size;
  config.enable_shot = !no_shot;

  ExplainSink explain{explain_flag};
  IsoProfile& section = config.profile.section(iso);
  section = overrides.apply(config.profile.require(iso), explain);

  const BayerFrame clean_raw = read_rnf(clean_path);
  const SignalFrame clean = dn_frame_to_signal(clean_raw);

  BayerFrame out;
  if (config.mode == SynthMode::PG || config.mode == SynthMode::ELD) {
    out = synthesize_raw(clean, nullptr, config);
  } else {
    const DarkFrameDb db = DarkFrameDb::open(db_dir);
    out = synthesize_raw(clean, &db, config);
  }
  write_rnf(out_path, out, RnfDtype::U16);
  std::cout << "wrote " << out_path.string() << " (mode " << mode_name
            << (highbit ? "+hb" : "") << ", seed " << seed << ")\n";
  return 0;
}

int cmd_reconstruct(const fs::path& profile_path, int iso, std::uint64_t seed,
                    bool explain_flag, const fs::path& in_path,
                    const fs::path& out_path) {
  const ProfileDocument profile = load_profile(profile_path);
  const IsoProfile& section = profile.require(iso);
  if (!section.fitted)
    throw DataError("profile section for iso " + std::to_string(iso) +
                    " has no fitted distribution; run 'rawnoise calibrate dist' first");

  const BayerFrame in = read_rnf(in_path);
  ExplainSink explain{explain_flag};
  explain.note("quant_step", in.quant_step, "input frame header");
  explain.note("black_level", in.black_level, "input frame header");

  BinSampler sampler;
  sampler.dist = *section.fitted;
  sampler.q = in.quant_step;
  sampler.min_value = -in.black_level;
  sampler.max_value = in.white_level - in.black_level;

  const auto result = reconstruct(dn_frame_to_signal(in), sampler, seed);
  BayerFrame out = signal_to_dn_frame(result.frame, in.black_level, in.quant_step,
                                      in.bit_depth, in.white_level);
  // The f32 payload must still re-quantize to the input bit-exactly: nudge
  // values whose f32 rounding lands on a bin boundary back inside the bin.
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double center = in.samples[i];
    const double lo = sampler.bin_lo(center - in.black_level) + in.black_level;
    const double hi = sampler.bin_hi(center - in.black_level) + in.black_level;
    float f = static_cast<float>(out.samples[i]);
    while (static_cast<double>(f) < lo || (static_cast<double>(f) == lo && lo != center))
      f = std::nextafterf(f, std::numeric_limits<float>::infinity());
    while (static_cast<double>(f) > hi || (static_cast<double>(f) == hi && hi != center))
      f = std::nextafterf(f, -std::numeric_limits<float>::infinity());
    out.samples[i] = f;
  }
  write_rnf(out_path, out, RnfDtype::F32);
  std::cout << "wrote " << out_path.string();
  if (result.uniform_fallbacks > 0)
    std::cout << " (warning: " << result.uniform_fallbacks
              << " zero-mass bins fell back to uniform)";
  std::cout << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(const std::vector<fs::path>& inputs, const fs::path& dist_profile,
               int iso, const fs::path& out_dir, int max_lag, bool with_ppcc) {
  const std::vector<BayerFrame> frames = load_frames(inputs);
  NoiseReport report;

  const std::vector<double> values = pooled_noise_values(frames);
  report.moments = noise_stats(values);
  report.sample_count = values.size();

  RowAutocorrelation acc;
  int n_curves = 0;
  for (const auto& f : frames) {
    const auto rc = row_autocorrelation(subtract_black(f), max_lag);
    if (acc.values.empty()) {
      acc = rc;
    } else {
      for (std::size_t i = 0; i < acc.values.size(); ++i)
        acc.values[i].second += rc.values[i].second;
      acc.excluded_rows += rc.excluded_rows;
    }
    ++n_curves;
  }
  for (auto& [lag, v] : acc.values) v /= n_curves;
  report.row_autocorr = acc;

  if (!dist_profile.empty()) {
    const ProfileDocument doc = load_profile(dist_profile);
    const IsoProfile& section = doc.require(iso);
    if (!section.fitted)
      throw DataError("profile section for iso " + std::to_string(iso) +
                      " has no fitted distribution");
    report.ks = {ks_statistic(values, *section.fitted),
                 to_string(section.fitted->family)};
  }

  if (with_ppcc) {
    std::vector<double> sub = values;
    if (sub.size() > 100000) {
      auto eng = make_engine(12345, {kTagSample});
      std::shuffle(sub.begin(), sub.end(), eng);
      sub.resize(100000);
    }
    report.ppcc = ppcc_tukey_lambda(sub, default_lambda_grid());
  }

  save_report(out_dir, report);
  std::cout << "report written to " << out_dir.string() << " (n=" << report.sample_count
            << ", mean=" << report.moments.mean
            << ", variance=" << report.moments.variance << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// selftest

int cmd_selftest(bool quick) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };

  // CFA phase identities.
  check("cfa identity shift", cfa_phase(CfaPattern::RGGB, 0, 0) == CfaPattern::RGGB);
  check("cfa diagonal shift", cfa_phase(CfaPattern::RGGB, 1, 1) == CfaPattern::BGGR);
  bool cfa_ok = true;
  for (CfaPattern p : kAllCfaPatterns)
    for (long dr = -2; dr <= 2; ++dr)
      for (long dc = -2; dc <= 2; ++dc)
        cfa_ok = cfa_ok && cfa_phase(cfa_phase(p, dr, dc), -dr, -dc) == p;
  check("cfa double-shift inverse", cfa_ok);

  // Quantize / reconstruct round trip on a small simulated dark frame.
  VirtualSensorParams params;
  params.width = 64;
  params.height = 64;
  params.read2_sigma = 2.0;
  const BayerFrame dark = simulate_dark_frame(params, 7);
  const SignalFrame noise = subtract_black(dark);
  BinSampler sampler;
  sampler.dist = make_gaussian(0.0, 2.0);
  sampler.q = params.quant_step;
  const auto rec = reconstruct(noise, sampler, 11);
  const BayerFrame requant =
      quantize(rec.frame, params.black_level, params.quant_step, params.bit_depth);
  check("high-bit round trip", requant.samples == dark.samples);

  // Sampler determinism.
  {
    const SignalFrame a = shot_noise(make_signal_frame(16, 16, CfaPattern::RGGB, 50.0),
                                     2.0, 99);
    const SignalFrame b = shot_noise(make_signal_frame(16, 16, CfaPattern::RGGB, 50.0),
                                     2.0, 99);
    check("shot noise determinism", a.values == b.values);
  }

  // Poisson zero mean.
  {
    const SignalFrame z = shot_noise(make_signal_frame(16, 16, CfaPattern::RGGB, 0.0),
                                     2.0, 3);
    bool all_zero = true;
    for (double v : z.values) all_zero = all_zero && v == 0.0;
    check("shot noise at zero signal", all_zero);
  }

  check("bin_mass symmetry",
        std::abs(bin_mass(make_gaussian(0.0, 3.0), 0.0, 1.0) -
                 2.0 * (gaussian_cdf(0.5 / 3.0) - 0.5)) < 1e-12);

  if (!quick) {
    // Calibration closure at reduced size.
    VirtualSensorParams oracle;
    oracle.width = 256;
    oracle.height = 256;
    oracle.k_analog = 1.5;
    oracle.read2_sigma = 4.0;
    std::vector<std::vector<BayerFrame>> stacks;
    for (double level : {50.0, 100.0, 200.0, 400.0})
      stacks.push_back(simulate_flat_stack(level, oracle, 6, 21));
    const auto fit = photon_transfer_fit(stacks);
    check("gain closure within 5%", std::abs(fit.gain - 1.5) < 0.075);

    std::vector<double> gauss_samples(50000);
    auto eng = make_engine(5, {});
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double& v : gauss_samples) v = gauss(eng);
    const auto ppcc = ppcc_tukey_lambda(gauss_samples, default_lambda_grid());
    check("ppcc of gaussian near 0.14", std::abs(ppcc.best_lambda - 0.14) < 0.06);
  }

  std::cout << (failures == 0 ? "selftest passed" : "selftest FAILED") << "\n";
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Raw image noise calibration and synthesis toolkit"};
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", kVersion);

  bool show_formats = false;
  app.add_flag("--formats", show_formats, "Print the RNF1 frame format spec");
  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "Worker thread cap (default: cores); never changes results");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate virtual-sensor frames");
  std::string sim_kind;
  sim->add_option("kind", sim_kind, "dark or flat")
      ->required()
      ->check(CLI::IsMember({"dark", "flat"}));
  double sim_level = 0.0;
  sim->add_option("--level", sim_level, "Flat-field photon level");
  fs::path sim_params;
  sim->add_option("--params", sim_params, "Sensor params file")->required();
  int sim_n = 1;
  sim->add_option("--n", sim_n, "Number of frames")->check(CLI::PositiveNumber);
  std::uint64_t sim_seed = 0;
  sim->add_option("--seed", sim_seed, "Random seed")->required();
  fs::path sim_out;
  sim->add_option("--out", sim_out, "Output directory")->required();
  int sim_iso = 0;
  sim->add_option("--iso", sim_iso, "Pick gains from the params ISO table");

  // ingest
  auto* ing = app.add_subcommand("ingest", "Add dark frames to a database");
  fs::path ing_db;
  ing->add_option("--db", ing_db, "Database root directory")->required();
  std::string ing_sensor;
  ing->add_option("--sensor", ing_sensor, "Sensor id")->required();
  int ing_iso = 0;
  ing->add_option("--iso", ing_iso, "ISO setting")->required();
  double ing_exposure = 0.0;
  ing->add_option("--exposure", ing_exposure, "Exposure seconds");
  std::int64_t ing_captured = 0;
  ing->add_option("--captured-at", ing_captured, "Capture unix timestamp");
  std::vector<fs::path> ing_frames;
  ing->add_option("frames", ing_frames, "RNF frames to ingest")->required();

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Estimate noise parameters");
  cal->require_subcommand(1);
  auto* ptc = cal->add_subcommand("photon-transfer",
                                  "Fit gain from flat-field stacks");
  std::vector<fs::path> ptc_stacks;
  ptc->add_option("--stacks", ptc_stacks, "One directory per illumination level")
      ->required();
  fs::path ptc_out;
  ptc->add_option("--out", ptc_out, "Profile file to update");
  std::string ptc_sensor = "sensor";
  ptc->add_option("--sensor", ptc_sensor, "Sensor id for new profiles");
  int ptc_iso = 0;
  ptc->add_option("--iso", ptc_iso, "ISO the stacks were captured at");

  auto* dist = cal->add_subcommand("dist", "Fit the signal-independent noise");
  fs::path dist_db;
  dist->add_option("--db", dist_db, "Dark-frame database root")->required();
  std::string dist_sensor;
  dist->add_option("--sensor", dist_sensor, "Sensor id")->required();
  int dist_iso = 0;
  dist->add_option("--iso", dist_iso, "ISO setting")->required();
  fs::path dist_out;
  dist->add_option("--out", dist_out, "Profile file to update");
  bool dist_per_channel = false;
  dist->add_flag("--per-channel", dist_per_channel,
                 "Also fit each CFA channel separately");
  double dist_lmin = -1.0, dist_lmax = 1.0, dist_lstep = 0.01;
  dist->add_option("--lambda-min", dist_lmin, "PPCC grid lower bound");
  dist->add_option("--lambda-max", dist_lmax, "PPCC grid upper bound");
  dist->add_option("--lambda-step", dist_lstep, "PPCC grid step")
      ->check(CLI::PositiveNumber);

  // synthesize
  auto* syn = app.add_subcommand("synthesize", "Apply synthetic noise to a clean frame");
  std::string syn_mode;
  syn->add_option("--mode", syn_mode, "pg|eld|pixel|patch|pap")
      ->required()
      ->check(CLI::IsMember({"pg", "eld", "pixel", "patch", "pap"}));
  bool syn_highbit = false;
  syn->add_flag("--highbit", syn_highbit, "High-bit reconstruct sampled noise");
  fs::path syn_profile;
  syn->add_option("--profile", syn_profile, "Calibrated sensor profile")->required();
  fs::path syn_db;
  syn->add_option("--db", syn_db, "Dark-frame database (Real* modes)");
  std::string syn_sensor;
  syn->add_option("--sensor", syn_sensor, "Sensor id");
  int syn_iso = 0;
  syn->add_option("--iso", syn_iso, "ISO setting")->required();
  std::uint64_t syn_seed = 0;
  syn->add_option("--seed", syn_seed, "Random seed")->required();
  int syn_patch = 512;
  syn->add_option("--patch-size", syn_patch, "Dark patch tile size");
  bool syn_no_shot = false;
  syn->add_flag("--no-shot", syn_no_shot, "Disable the signal-dependent layer");
  LevelOverrides syn_over;
  syn->add_option("--quant-step", syn_over.quant_step, "Override profile quant step");
  syn->add_option("--bit-depth", syn_over.bit_depth, "Override profile bit depth");
  syn->add_option("--black-level", syn_over.black_level, "Override profile black level");
  syn->add_option("--white-level", syn_over.white_level, "Override profile white level");
  bool syn_explain = false;
  syn->add_flag("--explain", syn_explain, "Print resolved config and sources");
  fs::path syn_in, syn_out;
  syn->add_option("clean", syn_in, "Clean input frame (RNF)")->required();
  syn->add_option("noisy", syn_out, "Noisy output frame (RNF)")->required();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct",
                                 "High-bit reconstruct a quantized noise frame");
  fs::path rec_profile;
  rec->add_option("--profile", rec_profile, "Calibrated sensor profile")->required();
  int rec_iso = 0;
  rec->add_option("--iso", rec_iso, "ISO setting")->required();
  std::uint64_t rec_seed = 0;
  rec->add_option("--seed", rec_seed, "Random seed");
  bool rec_explain = false;
  rec->add_flag("--explain", rec_explain, "Print resolved config and sources");
  fs::path rec_in, rec_out;
  rec->add_option("input", rec_in, "Quantized input frame (RNF)")->required();
  rec->add_option("output", rec_out, "Continuous output frame (RNF, f32)")->required();

  // report
  auto* rep = app.add_subcommand("report", "Compute noise statistics for frames");
  std::vector<fs::path> rep_in;
  rep->add_option("--in", rep_in, "Input RNF frames")->required();
  fs::path rep_dist;
  rep->add_option("--dist", rep_dist, "Profile whose fitted family to test against");
  int rep_iso = 0;
  rep->add_option("--iso", rep_iso, "ISO section of --dist profile");
  fs::path rep_out;
  rep->add_option("--out", rep_out, "Output directory")->required();
  int rep_lag = 8;
  rep->add_option("--max-lag", rep_lag, "Autocorrelation max lag")
      ->check(CLI::PositiveNumber);
  bool rep_ppcc = false;
  rep->add_flag("--ppcc", rep_ppcc, "Include a Tukey Lambda PPCC sweep");

  // selftest
  auto* self = app.add_subcommand("selftest", "Run built-in consistency checks");
  bool self_quick = false;
  self->add_flag("--quick", self_quick, "Only the fast checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (threads > 0) set_max_threads(threads);

  if (show_formats) {
    std::cout << kRnfFormatVersion
              << ": text header (magic line, then key=value: width, height, "
                 "bit_depth, quant_step, black_level, white_level, cfa, dtype; "
                 "blank-line terminator) followed by a row-major little-endian "
                 "payload. dtype u16 stores quantization step numbers "
                 "(sample = n * quant_step); f32/f64 store sample values.\n";
    return 0;
  }

  try {
    if (*sim)
      return cmd_simulate(sim_kind, sim_params, sim_level, sim_n, sim_seed, sim_out,
                          sim_iso);
    if (*ing)
      return cmd_ingest(ing_db, ing_sensor, ing_iso, ing_exposure, ing_captured,
                        ing_frames);
    if (*ptc) return cmd_calibrate_ptc(ptc_stacks, ptc_out, ptc_sensor, ptc_iso);
    if (*dist)
      return cmd_calibrate_dist(dist_db, dist_sensor, dist_iso, dist_out,
                                dist_per_channel, dist_lmin, dist_lmax, dist_lstep);
    if (*syn)
      return cmd_synthesize(syn_mode, syn_highbit, syn_profile, syn_db, syn_sensor,
                            syn_iso, syn_seed, syn_patch, syn_no_shot, syn_over,
                            syn_explain, syn_in, syn_out);
    if (*rec)
      return cmd_reconstruct(rec_profile, rec_iso, rec_seed, rec_explain, rec_in,
                             rec_out);
    if (*rep) return cmd_report(rep_in, rep_dist, rep_iso, rep_out, rep_lag, rep_ppcc);
    if (*self) return cmd_selftest(self_quick);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::cerr << app.help() << "\n";
  return 1;
}

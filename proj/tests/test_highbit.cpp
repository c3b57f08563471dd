#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "rawnoise/highbit.hpp"
#include "rawnoise/parallel.hpp"
#include "rawnoise/rng.hpp"
#include "rawnoise/vsensor.hpp"
#include "test_support.hpp"

using namespace rawnoise;

namespace {

SignalFrame quantized_gaussian_noise(int w, int h, double sigma, double q,
                                     std::uint64_t seed,
                                     std::vector<double>* continuous = nullptr) {
  SignalFrame f = make_signal_frame(w, h, CfaPattern::RGGB, 0.0);
  auto eng = make_engine(seed, {});
  std::normal_distribution<double> gauss(0.0, sigma);
  for (double& v : f.values) {
    const double x = gauss(eng);
    if (continuous) continuous->push_back(x);
    v = std::round(x / q) * q;
  }
  return f;
}

}  // namespace

TEST_CASE("bin_mass matches its definition") {
  const auto g3 = make_gaussian(0.0, 3.0);
  CHECK(bin_mass(g3, 0.0, 1.0) ==
        doctest::Approx(2.0 * (gaussian_cdf(0.5 / 3.0) - 0.5)).epsilon(1e-14));

  // Telescoping: bins tiling +-10 sigma sum to ~1.
  double total = 0.0;
  for (int n = -30; n <= 30; ++n) total += bin_mass(g3, static_cast<double>(n), 1.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

  // Closed-form ratio at sigma = q.
  const auto g1 = make_gaussian(0.0, 1.0);
  const double expect =
      (gaussian_cdf(0.5) - gaussian_cdf(-0.5)) / (gaussian_cdf(1.5) - gaussian_cdf(0.5));
  CHECK(bin_mass(g1, 0.0, 1.0) / bin_mass(g1, 1.0, 1.0) ==
        doctest::Approx(expect).epsilon(1e-10));

  CHECK_THROWS_AS(bin_mass(g1, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("round trip: quantize(reconstruct(F)) == F for every seed") {
  VirtualSensorParams params;
  params.width = 96;
  params.height = 96;
  params.read2_sigma = 1.5;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const BayerFrame dark = simulate_dark_frame(params, 300 + seed);
    const SignalFrame noise = subtract_black(dark);
    BinSampler sampler;
    sampler.dist = make_gaussian(0.0, 1.5);
    sampler.q = params.quant_step;
    sampler.min_value = -params.black_level;
    sampler.max_value = params.effective_white() - params.black_level;
    const auto rec = reconstruct(noise, sampler, seed);
    const BayerFrame requant =
        quantize(rec.frame, params.black_level, params.quant_step, params.bit_depth);
    CHECK(requant.samples == dark.samples);
    for (std::size_t i = 0; i < noise.values.size(); ++i)
      CHECK(std::abs(rec.frame.values[i] - noise.values[i]) <= 0.5 * sampler.q);
  }
}

TEST_CASE("histogram is preserved bin-for-bin") {
  const SignalFrame noise = quantized_gaussian_noise(128, 128, 2.0, 1.0, 9);
  BinSampler sampler;
  sampler.dist = make_gaussian(0.0, 2.0);
  sampler.q = 1.0;
  const auto rec = reconstruct(noise, sampler, 4);
  std::map<double, int> before, after;
  for (double v : noise.values) ++before[v];
  for (double v : rec.frame.values) ++after[std::round(v)];
  CHECK(before == after);
}

TEST_CASE("wide distribution makes in-bin offsets uniform") {
  // sigma >> q: the conditional within one bin is nearly flat.
  const int n = 100000;
  SignalFrame zeros = make_signal_frame(100, 1000, CfaPattern::RGGB, 0.0);
  BinSampler sampler;
  sampler.dist = make_gaussian(0.0, 50.0);
  sampler.q = 1.0;
  const auto rec = reconstruct(zeros, sampler, 12);
  const double d = testsupport::ks_against_cdf(
      rec.frame.values, [](double x) { return x + 0.5; });
  CHECK(d < testsupport::ks_critical(0.01, n));
}

TEST_CASE("end-to-end: reconstruction recovers the continuous distribution") {
  std::vector<double> continuous;
  const SignalFrame noise = quantized_gaussian_noise(1000, 1000, 2.0, 1.0, 77,
                                                     &continuous);
  BinSampler sampler;
  sampler.dist = make_gaussian(0.0, 2.0);
  sampler.q = 1.0;
  const auto rec = reconstruct(noise, sampler, 5);
  CHECK(testsupport::ks_two_sample(rec.frame.values, continuous) < 0.005);
}

TEST_CASE("reconstruction removes the quantization variance bias") {
  const double sigma = 1.2, q = 1.0;
  int improved = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const SignalFrame noise = quantized_gaussian_noise(256, 256, sigma, q, 900 + t);
    BinSampler sampler;
    sampler.dist = make_gaussian(0.0, sigma);
    sampler.q = q;
    const auto rec = reconstruct(noise, sampler, 1700 + t);
    const double err_quant =
        std::abs(testsupport::sample_variance(noise.values) - sigma * sigma);
    const double err_rec =
        std::abs(testsupport::sample_variance(rec.frame.values) - sigma * sigma);
    if (err_rec < err_quant) ++improved;
  }
  CHECK(improved >= 19);  // >= 95% of seeded trials
}

TEST_CASE("zero-mass bins fall back to uniform and are counted") {
  SignalFrame far = make_signal_frame(8, 8, CfaPattern::RGGB, 50.0);
  BinSampler sampler;
  sampler.dist = make_gaussian(0.0, 0.05);  // 1000 sigma away: cdf saturates
  sampler.q = 1.0;
  const auto rec = reconstruct(far, sampler, 3);
  CHECK(rec.uniform_fallbacks == far.pixel_count());
  for (double v : rec.frame.values) {
    CHECK(v > 49.5);
    CHECK(v < 50.5);
  }
}

TEST_CASE("saturation bins resample one-sidedly") {
  BinSampler sampler;
  sampler.dist = make_gaussian(0.0, 3.0);
  sampler.q = 1.0;
  sampler.min_value = -2.0;
  sampler.max_value = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double lo_draw = sampler.conditional_draw(-2.0, u01_open(1, i, 0));
    CHECK(lo_draw >= -2.0);
    CHECK(lo_draw <= -1.5 + 1e-9);
    const double hi_draw = sampler.conditional_draw(2.0, u01_open(2, i, 0));
    CHECK(hi_draw >= 1.5 - 1e-9);
    CHECK(hi_draw <= 2.0);
  }
}

TEST_CASE("output is independent of the thread count") {
  const SignalFrame noise = quantized_gaussian_noise(64, 64, 2.0, 1.0, 15);
  BinSampler sampler;
  sampler.dist = make_gaussian(0.0, 2.0);
  sampler.q = 1.0;
  set_max_threads(1);
  const auto serial = reconstruct(noise, sampler, 8);
  set_max_threads(7);
  const auto parallel = reconstruct(noise, sampler, 8);
  set_max_threads(0);
  CHECK(serial.frame.values == parallel.frame.values);
}

TEST_CASE("reconstruction works across the whole family set") {
  const SignalFrame noise = quantized_gaussian_noise(64, 64, 3.0, 1.0, 55);
  const FittedDistribution dists[] = {
      make_gaussian(0.0, 3.0), make_student_t(0.0, 2.4, 5.0),
      make_tukey_lambda(0.0, 2.1, 0.14), make_weibull(-10.0, 10.2, 3.6),
      make_gamma(-12.0, 0.75, 16.0)};
  for (const auto& dist : dists) {
    BinSampler sampler;
    sampler.dist = dist;
    sampler.q = 1.0;
    const auto rec = reconstruct(noise, sampler, 21);
    const BayerFrame requant = quantize(rec.frame, 512.0, 1.0, 14);
    const BayerFrame original = quantize(noise, 512.0, 1.0, 14);
    CHECK(requant.samples == original.samples);
  }
}

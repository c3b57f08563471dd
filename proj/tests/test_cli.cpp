#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "rawnoise/rnf.hpp"
#include "rawnoise/vsensor.hpp"
#include "test_support.hpp"

using namespace rawnoise;

namespace {

struct CliResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
  const auto log = scratch / "cli_output.log";
  const std::string cmd =
      std::string(RAWNOISE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream fh(log);
  r.output.assign((std::istreambuf_iterator<char>(fh)), {});
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream fh(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(fh)), {});
}

void write_params(const std::filesystem::path& p, int size = 64) {
  std::ofstream fh(p);
  fh << "width=" << size << "\nheight=" << size << "\nread2_sigma=3\n";
}

}  // namespace

TEST_CASE("usage errors exit 1 and name the problem") {
  testsupport::TempDir tmp("cli_usage");
  const CliResult unknown = run_cli("frobnicate", tmp.path);
  CHECK(unknown.exit_code == 1);

  const CliResult missing = run_cli("synthesize --mode pap --iso 100 --seed 1 a b",
                                    tmp.path);
  CHECK(missing.exit_code == 1);
  CHECK(missing.output.find("--profile") != std::string::npos);

  const CliResult help = run_cli("--help", tmp.path);
  CHECK(help.exit_code == 0);
  const CliResult version = run_cli("--version", tmp.path);
  CHECK(version.exit_code == 0);
  const CliResult formats = run_cli("--formats", tmp.path);
  CHECK(formats.exit_code == 0);
  CHECK(formats.output.find("RNF1") != std::string::npos);
}

TEST_CASE("data errors exit 2 naming the offending input") {
  testsupport::TempDir tmp("cli_data_error");
  const CliResult r = run_cli(
      "reconstruct --profile " + (tmp.path / "nope.profile").string() +
          " --iso 100 " + (tmp.path / "in.rnf").string() + " " +
          (tmp.path / "out.rnf").string(),
      tmp.path);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("nope.profile") != std::string::npos);
}

TEST_CASE("selftest --quick passes") {
  testsupport::TempDir tmp("cli_selftest");
  const CliResult r = run_cli("selftest --quick", tmp.path);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("[FAIL]") == std::string::npos);
}

TEST_CASE("simulate is deterministic and respects --threads") {
  testsupport::TempDir tmp("cli_simulate");
  write_params(tmp.path / "params.txt");
  const std::string base = "simulate dark --params " +
                           (tmp.path / "params.txt").string() +
                           " --n 2 --seed 42 --out ";
  CHECK(run_cli(base + (tmp.path / "a").string(), tmp.path).exit_code == 0);
  CHECK(run_cli(base + (tmp.path / "b").string(), tmp.path).exit_code == 0);
  CHECK(run_cli("--threads 1 " + base + (tmp.path / "c").string(), tmp.path)
            .exit_code == 0);
  CHECK(slurp(tmp.path / "a" / "dark_0001.rnf") ==
        slurp(tmp.path / "b" / "dark_0001.rnf"));
  CHECK(slurp(tmp.path / "a" / "dark_0002.rnf") ==
        slurp(tmp.path / "c" / "dark_0002.rnf"));
  CHECK(slurp(tmp.path / "a" / "dark_0001.rnf") !=
        slurp(tmp.path / "a" / "dark_0002.rnf"));
}

TEST_CASE("full pipeline through the CLI") {
  testsupport::TempDir tmp("cli_pipeline");
  write_params(tmp.path / "params.txt");

  // Dark frames -> database.
  REQUIRE(run_cli("simulate dark --params " + (tmp.path / "params.txt").string() +
                      " --n 6 --seed 7 --out " + (tmp.path / "darks").string(),
                  tmp.path)
              .exit_code == 0);
  std::string frames;
  for (int i = 1; i <= 6; ++i)
    frames += (tmp.path / "darks" / ("dark_000" + std::to_string(i) + ".rnf")).string() +
              " ";
  REQUIRE(run_cli("ingest --db " + (tmp.path / "db").string() +
                      " --sensor simcam --iso 100 " + frames,
                  tmp.path)
              .exit_code == 0);

  // Signal-independent calibration.
  const CliResult dist = run_cli(
      "calibrate dist --db " + (tmp.path / "db").string() +
          " --sensor simcam --iso 100 --out " + (tmp.path / "sensor.profile").string(),
      tmp.path);
  REQUIRE(dist.exit_code == 0);
  CHECK(dist.output.find("selected family") != std::string::npos);

  // Photon transfer on flat stacks.
  for (int level : {60, 120, 240, 480})
    REQUIRE(run_cli("simulate flat --level " + std::to_string(level) + " --params " +
                        (tmp.path / "params.txt").string() + " --n 4 --seed " +
                        std::to_string(100 + level) + " --out " +
                        (tmp.path / ("flat" + std::to_string(level))).string(),
                    tmp.path)
                .exit_code == 0);
  const CliResult ptc = run_cli(
      "calibrate photon-transfer --stacks " + (tmp.path / "flat60").string() + " " +
          (tmp.path / "flat120").string() + " " + (tmp.path / "flat240").string() +
          " " + (tmp.path / "flat480").string() + " --sensor simcam --iso 100 --out " +
          (tmp.path / "sensor.profile").string(),
      tmp.path);
  REQUIRE(ptc.exit_code == 0);

  // Clean frame: reuse a dark frame header at a lifted level.
  {
    BayerFrame clean = read_rnf(tmp.path / "darks" / "dark_0001.rnf");
    for (double& s : clean.samples) s = 512.0 + 200.0;
    write_rnf(tmp.path / "clean.rnf", clean, RnfDtype::U16);
  }

  // Synthesize with the full pipeline (PAP + high-bit).
  const std::string synth_cmd =
      "synthesize --mode pap --highbit --profile " +
      (tmp.path / "sensor.profile").string() + " --db " + (tmp.path / "db").string() +
      " --sensor simcam --iso 100 --seed 9 --patch-size 64 " +
      (tmp.path / "clean.rnf").string() + " ";
  REQUIRE(run_cli(synth_cmd + (tmp.path / "noisy_a.rnf").string(), tmp.path)
              .exit_code == 0);
  REQUIRE(run_cli(synth_cmd + (tmp.path / "noisy_b.rnf").string(), tmp.path)
              .exit_code == 0);
  CHECK(slurp(tmp.path / "noisy_a.rnf") == slurp(tmp.path / "noisy_b.rnf"));

  // Reconstruct a dark frame to high bits; round trip must requantize.
  REQUIRE(run_cli("reconstruct --profile " + (tmp.path / "sensor.profile").string() +
                      " --iso 100 --seed 3 " +
                      (tmp.path / "darks" / "dark_0002.rnf").string() + " " +
                      (tmp.path / "rec.rnf").string(),
                  tmp.path)
              .exit_code == 0);
  RnfDtype dtype;
  const BayerFrame rec = read_rnf(tmp.path / "rec.rnf", &dtype);
  CHECK(dtype == RnfDtype::F32);
  const BayerFrame original = read_rnf(tmp.path / "darks" / "dark_0002.rnf");
  const BayerFrame requant =
      quantize(subtract_black(rec), original.black_level, original.quant_step,
               original.bit_depth);
  CHECK(requant.samples == original.samples);

  // Report on the synthetic output.
  const CliResult rep = run_cli(
      "report --in " + (tmp.path / "noisy_a.rnf").string() + " --dist " +
          (tmp.path / "sensor.profile").string() + " --iso 100 --out " +
          (tmp.path / "report").string(),
      tmp.path);
  REQUIRE(rep.exit_code == 0);
  CHECK(std::filesystem::exists(tmp.path / "report" / "stats.txt"));
  CHECK(std::filesystem::exists(tmp.path / "report" / "autocorr.csv"));
}

#include <doctest.h>

#include <fstream>

#include "rawnoise/errors.hpp"
#include "rawnoise/rnf.hpp"
#include "rawnoise/vsensor.hpp"
#include "test_support.hpp"

using namespace rawnoise;

TEST_CASE("u16 round trip is bit exact") {
  testsupport::TempDir tmp("rnf_u16");
  VirtualSensorParams params;
  params.width = 32;
  params.height = 32;
  params.read2_sigma = 2.5;
  params.quant_step = 0.5;  // non-integer step exercises the n*q payload
  const BayerFrame f = simulate_dark_frame(params, 5);

  write_rnf(tmp.path / "a.rnf", f, RnfDtype::U16);
  RnfDtype dtype;
  const BayerFrame g = read_rnf(tmp.path / "a.rnf", &dtype);
  CHECK(dtype == RnfDtype::U16);
  CHECK(g.samples == f.samples);
  CHECK(g.cfa == f.cfa);
  CHECK(g.black_level == f.black_level);
  CHECK(g.quant_step == f.quant_step);

  // Byte-identical rewrite.
  write_rnf(tmp.path / "b.rnf", g, RnfDtype::U16);
  std::ifstream fa(tmp.path / "a.rnf", std::ios::binary);
  std::ifstream fb(tmp.path / "b.rnf", std::ios::binary);
  const std::string ba((std::istreambuf_iterator<char>(fa)), {});
  const std::string bb((std::istreambuf_iterator<char>(fb)), {});
  CHECK(ba == bb);
}

TEST_CASE("f64 round trip preserves reals exactly") {
  testsupport::TempDir tmp("rnf_f64");
  BayerFrame f;
  f.width = 4;
  f.height = 2;
  f.bit_depth = 14;
  f.black_level = 512.0;
  f.white_level = 16383.0;
  f.quant_step = 1.0;
  f.samples = {512.125, 511.875, 600.0, 0.0, 1.5, 2.25, 3.0, 16383.0};
  write_rnf(tmp.path / "f.rnf", f, RnfDtype::F64);
  const BayerFrame g = read_rnf(tmp.path / "f.rnf");
  CHECK(g.samples == f.samples);
}

TEST_CASE("malformed files are rejected with the path in the message") {
  testsupport::TempDir tmp("rnf_bad");
  {
    std::ofstream fh(tmp.path / "bad.rnf", std::ios::binary);
    fh << "RNF9\n\n";
  }
  CHECK_THROWS_AS(read_rnf(tmp.path / "bad.rnf"), DataError);

  {
    std::ofstream fh(tmp.path / "trunc.rnf", std::ios::binary);
    fh << "RNF1\nwidth=4\nheight=2\nbit_depth=14\nquant_step=1\nblack_level=512\n"
          "white_level=16383\ncfa=RGGB\ndtype=u16\n\nxx";
  }
  try {
    read_rnf(tmp.path / "trunc.rnf");
    CHECK(false);
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("trunc.rnf") != std::string::npos);
  }

  CHECK_THROWS_AS(read_rnf(tmp.path / "missing.rnf"), DataError);
}

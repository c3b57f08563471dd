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

#include "rawnoise/rnf.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "rawnoise/errors.hpp"

namespace rawnoise {

namespace {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
void append_le(std::string& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(const char* p) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(RnfDtype dtype) {
  switch (dtype) {
    case RnfDtype::U16: return "u16";
    case RnfDtype::F32: return "f32";
    case RnfDtype::F64: return "f64";
  }
  return "u16";
}

RnfDtype rnf_dtype_from_string(const std::string& name) {
  if (name == "u16") return RnfDtype::U16;
  if (name == "f32") return RnfDtype::F32;
  if (name == "f64") return RnfDtype::F64;
  throw DataError("unknown RNF dtype: '" + name + "'");
}

void write_rnf(const std::filesystem::path& path, const BayerFrame& frame,
               RnfDtype dtype) {
  frame.validate(dtype == RnfDtype::U16);

  std::string out;
  out += kRnfFormatVersion;
  out += '\n';
  out += "width=" + std::to_string(frame.width) + '\n';
  out += "height=" + std::to_string(frame.height) + '\n';
  out += "bit_depth=" + std::to_string(frame.bit_depth) + '\n';
  out += "quant_step=" + format_real(frame.quant_step) + '\n';
  out += "black_level=" + format_real(frame.black_level) + '\n';
  out += "white_level=" + format_real(frame.white_level) + '\n';
  out += "cfa=" + to_string(frame.cfa) + '\n';
  out += "dtype=" + to_string(dtype) + '\n';
  out += '\n';

  out.reserve(out.size() + frame.samples.size() * 8);
  for (double s : frame.samples) {
    switch (dtype) {
      case RnfDtype::U16: {
        const double n = s / frame.quant_step;
        const double nearest = std::floor(n + 0.5);
        if (nearest < 0.0 || nearest > 65535.0)
          throw DataError("sample out of u16 payload range: " + std::to_string(s));
        append_le<std::uint16_t>(out, static_cast<std::uint16_t>(nearest));
        break;
      }
      case RnfDtype::F32:
        append_le<float>(out, static_cast<float>(s));
        break;
      case RnfDtype::F64:
        append_le<double>(out, s);
        break;
    }
  }

  std::ofstream fh(path, std::ios::binary | std::ios::trunc);
  if (!fh) throw DataError("cannot open for writing: " + path.string());
  fh.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!fh) throw DataError("write failed: " + path.string());
}

BayerFrame read_rnf(const std::filesystem::path& path, RnfDtype* dtype_out) {
  std::ifstream fh(path, std::ios::binary);
  if (!fh) throw DataError("cannot open: " + path.string());

  std::string magic;
  if (!std::getline(fh, magic) || magic != kRnfFormatVersion)
    throw DataError(path.string() + ": bad magic, expected " +
                    std::string(kRnfFormatVersion));

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(fh, line)) {
    if (line.empty()) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError(path.string() + ": malformed header line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }

  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end())
      throw DataError(path.string() + ": missing header key '" + key + "'");
    return it->second;
  };

  BayerFrame frame;
  try {
    frame.width = std::stoi(need("width"));
    frame.height = std::stoi(need("height"));
    frame.bit_depth = std::stoi(need("bit_depth"));
    frame.quant_step = std::stod(need("quant_step"));
    frame.black_level = std::stod(need("black_level"));
    frame.white_level = std::stod(need("white_level"));
  } catch (const std::logic_error&) {
    throw DataError(path.string() + ": non-numeric header value");
  }
  frame.cfa = cfa_pattern_from_string(need("cfa"));
  const RnfDtype dtype = rnf_dtype_from_string(need("dtype"));
  if (dtype_out) *dtype_out = dtype;

  if (frame.width <= 0 || frame.height <= 0)
    throw DataError(path.string() + ": bad dimensions");
  const std::size_t count = static_cast<std::size_t>(frame.width) * frame.height;
  const std::size_t esize =
      dtype == RnfDtype::U16 ? 2 : dtype == RnfDtype::F32 ? 4 : 8;

  std::string payload(count * esize, '\0');
  fh.read(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(fh.gcount()) != payload.size())
    throw DataError(path.string() + ": truncated payload");

  frame.samples.resize(count);
  const char* p = payload.data();
  for (std::size_t i = 0; i < count; ++i, p += esize) {
    switch (dtype) {
      case RnfDtype::U16:
        frame.samples[i] = read_le<std::uint16_t>(p) * frame.quant_step;
        break;
      case RnfDtype::F32:
        frame.samples[i] = read_le<float>(p);
        break;
      case RnfDtype::F64:
        frame.samples[i] = read_le<double>(p);
        break;
    }
  }
  frame.validate(dtype == RnfDtype::U16);
  return frame;
}

SignalFrame dn_frame_to_signal(const BayerFrame& frame) {
  return subtract_black(frame);
}

BayerFrame signal_to_dn_frame(const SignalFrame& signal, double black_level,
                              double quant_step, int bit_depth,
                              double white_level) {
  BayerFrame frame;
  frame.width = signal.width;
  frame.height = signal.height;
  frame.cfa = signal.cfa;
  frame.bit_depth = bit_depth;
  frame.black_level = black_level;
  frame.quant_step = quant_step;
  frame.white_level = white_level;
  frame.samples.resize(signal.values.size());
  for (std::size_t i = 0; i < signal.values.size(); ++i)
    frame.samples[i] = signal.values[i] + black_level;
  return frame;
}

}  // namespace rawnoise

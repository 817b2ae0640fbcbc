// SPDX-License-Identifier: Apache-2.0
//
// dpfbmc: dual-polarization filter bank multicarrier simulation library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "dpfbmc/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace dpfbmc {

namespace {

namespace fs = std::filesystem;

fs::path with_suffix(const fs::path& base, const std::string& suffix) { return fs::path(base.string() + suffix); }

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

void write_samples(const fs::path& path, const std::vector<cplx>& samples) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  for (const auto& s : samples)
    for (double part : {s.real(), s.imag()}) {
      const auto bits = to_little(std::bit_cast<std::uint64_t>(part));
      os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  if (!os) throw IntegrityError("short write to " + path.string());
}

std::vector<cplx> read_samples(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  if (raw.size() % 16 != 0) throw IntegrityError(path.string() + " is not a whole number of complex samples");
  std::vector<cplx> out(raw.size() / 16);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t re, im;
    std::memcpy(&re, raw.data() + 16 * i, 8);
    std::memcpy(&im, raw.data() + 16 * i + 8, 8);
    out[i] = {std::bit_cast<double>(to_little(re)), std::bit_cast<double>(to_little(im))};
  }
  return out;
}

void write_meta(const fs::path& path, const Waveform& w, const WaveformMeta& meta, bool polarized) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  os << std::setprecision(17);
  os << "format=cf64le\n";
  os << "polarized=" << (polarized ? 1 : 0) << '\n';
  os << "samples=" << w.size() << '\n';
  os << "sample_rate=" << w.sample_rate << '\n';
  os << "num_subcarriers=" << meta.num_subcarriers << '\n';
  os << "overlap=" << meta.overlap << '\n';
  os << "head_trim=" << w.head_trim << '\n';
  os << "tail_trim=" << w.tail_trim << '\n';
  os << "tail_extension=" << w.tail_extension << '\n';
  os << "frame_offsets=";
  for (std::size_t i = 0; i < w.frame_offsets.size(); ++i) os << (i ? "," : "") << w.frame_offsets[i];
  os << '\n';
}

std::map<std::string, std::string> read_meta(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IntegrityError("malformed sidecar line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

const std::string& field(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw IntegrityError("sidecar misses " + key);
  return it->second;
}

Waveform shell_from_meta(const std::map<std::string, std::string>& kv, WaveformMeta* meta) {
  if (field(kv, "format") != "cf64le") throw IntegrityError("unsupported sample format " + field(kv, "format"));
  Waveform w;
  try {
    w.sample_rate = std::stod(field(kv, "sample_rate"));
    w.head_trim = std::stoul(field(kv, "head_trim"));
    w.tail_trim = std::stoul(field(kv, "tail_trim"));
    w.tail_extension = std::stoul(field(kv, "tail_extension"));
    w.frame_offsets.clear();
    std::stringstream ss(field(kv, "frame_offsets"));
    std::string item;
    while (std::getline(ss, item, ',')) w.frame_offsets.push_back(std::stoul(item));
    if (meta) {
      meta->num_subcarriers = std::stoi(field(kv, "num_subcarriers"));
      meta->overlap = std::stoi(field(kv, "overlap"));
    }
  } catch (const std::logic_error& e) {
    throw IntegrityError(std::string("malformed sidecar value: ") + e.what());
  }
  return w;
}

}  // namespace

void write_waveform(const fs::path& base, const Waveform& w, const WaveformMeta& meta) {
  write_samples(with_suffix(base, ".iq"), w.samples);
  write_meta(with_suffix(base, ".meta"), w, meta, false);
}

Waveform read_waveform(const fs::path& base, WaveformMeta* meta) {
  const auto kv = read_meta(with_suffix(base, ".meta"));
  Waveform w = shell_from_meta(kv, meta);
  w.samples = read_samples(with_suffix(base, ".iq"));
  if (std::to_string(w.size()) != field(kv, "samples")) throw IntegrityError("sample count differs from the sidecar");
  return w;
}

void write_polarized_waveform(const fs::path& base, const PolarizedWaveform& w, const WaveformMeta& meta) {
  if (w.h.size() != w.v.size()) throw ShapeError("polarization branches differ in length");
  write_samples(with_suffix(base, ".h.iq"), w.h.samples);
  write_samples(with_suffix(base, ".v.iq"), w.v.samples);
  write_meta(with_suffix(base, ".meta"), w.h, meta, true);
}

PolarizedWaveform read_polarized_waveform(const fs::path& base, WaveformMeta* meta) {
  const auto kv = read_meta(with_suffix(base, ".meta"));
  PolarizedWaveform w;
  w.h = shell_from_meta(kv, meta);
  w.v = w.h;
  w.h.samples = read_samples(with_suffix(base, ".h.iq"));
  w.v.samples = read_samples(with_suffix(base, ".v.iq"));
  const auto n = field(kv, "samples");
  if (std::to_string(w.h.size()) != n || std::to_string(w.v.size()) != n)
    throw IntegrityError("sample count differs from the sidecar");
  return w;
}

void write_grid_csv(std::ostream& os, const ComplexGrid& g) {
  os << "n,m,re,im\n" << std::setprecision(17);
  for (std::size_t n = 0; n < g.rows(); ++n)
    for (std::size_t m = 0; m < g.cols(); ++m) os << n << ',' << m << ',' << g(n, m).real() << ',' << g(n, m).imag() << '\n';
}

void write_grid_csv(std::ostream& os, const RealGrid& g) {
  os << "n,m,re,im\n" << std::setprecision(17);
  for (std::size_t n = 0; n < g.rows(); ++n)
    for (std::size_t m = 0; m < g.cols(); ++m) os << n << ',' << m << ',' << g(n, m) << ",0\n";
}

}  // namespace dpfbmc

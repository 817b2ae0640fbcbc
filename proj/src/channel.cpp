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


#include "dpfbmc/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace dpfbmc {

namespace {

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void ChannelProfile::validate() const {
  if (taps.empty()) throw ConfigError("channel profile '" + name + "' has no taps");
  double prev = -1.0;
  for (const auto& t : taps) {
    if (!(t.delay_ns >= 0.0) || t.delay_ns < prev)
      throw ConfigError("channel profile '" + name + "': delays must be nonnegative and ascending");
    if (!std::isfinite(t.power_db)) throw ConfigError("channel profile '" + name + "': non-finite tap power");
    prev = t.delay_ns;
  }
}

ChannelProfile builtin_profile(std::string_view name) {
  const auto n = lower(name);
  ChannelProfile p;
  p.name = n;
  if (n == "ag_los") {
    p.taps = {{0, 0, Fading::Ricean, 30}, {45, -12, Fading::Ricean, 30}, {200, -22.3, Fading::Ricean, 30}};
    p.declared_rms_ns = 18;
  } else if (n == "pedestrian_a") {
    p.taps = {{0, 0, Fading::Ricean, 10},
              {110, -9.7, Fading::Rayleigh, 0},
              {190, -19.2, Fading::Rayleigh, 0},
              {410, -22.8, Fading::Rayleigh, 0}};
    p.declared_rms_ns = 46;
  } else if (n == "pedestrian_b") {
    p.taps = {{0, 0, Fading::Rayleigh, 0},      {200, -0.9, Fading::Rayleigh, 0},  {800, -4.9, Fading::Rayleigh, 0},
              {1200, -8, Fading::Rayleigh, 0},  {2300, -7.8, Fading::Rayleigh, 0}, {3700, -23.9, Fading::Rayleigh, 0}};
    p.declared_rms_ns = 633;
  } else if (n == "vehicular_b") {
    p.taps = {{0, -2.5, Fading::Rayleigh, 0},      {300, 0, Fading::Rayleigh, 0},
              {8900, -12.8, Fading::Rayleigh, 0},  {12900, -10, Fading::Rayleigh, 0},
              {17100, -25.2, Fading::Rayleigh, 0}, {20000, -16, Fading::Rayleigh, 0}};
    p.declared_rms_ns = 4000;
  } else if (n == "awgn") {
    p.taps = {{0, 0, Fading::None, 0}};
    p.declared_rms_ns = 0;
  } else {
    throw ConfigError("unknown channel profile '" + std::string(name) + "'");
  }
  return p;
}

std::vector<std::string> builtin_profile_names() {
  return {"ag_los", "pedestrian_a", "pedestrian_b", "vehicular_b", "awgn"};
}

ChannelProfile load_profile_csv(std::istream& is, std::string name) {
  ChannelProfile p;
  p.name = std::move(name);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (lower(line).rfind("tau", 0) == 0) continue;  // header
    std::stringstream ss(line);
    std::string f[4];
    int count = 0;
    while (count < 4 && std::getline(ss, f[count], ',')) ++count;
    if (count < 2) throw ConfigError("profile row needs at least tau_ns,power_db: '" + line + "'");
    Tap t;
    try {
      t.delay_ns = std::stod(f[0]);
      t.power_db = std::stod(f[1]);
      const auto kind = count > 2 ? lower(trim(f[2])) : std::string("rayleigh");
      if (kind == "rayleigh") {
        t.fading = Fading::Rayleigh;
      } else if (kind == "ricean" || kind == "rician") {
        t.fading = Fading::Ricean;
        if (count < 4) throw ConfigError("ricean tap needs k_rice_db");
        t.k_rice_db = std::stod(f[3]);
      } else if (kind == "none") {
        t.fading = Fading::None;
      } else {
        throw ConfigError("unknown fading '" + kind + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("malformed profile row '" + line + "'");
    }
    p.taps.push_back(t);
  }
  p.validate();
  p.declared_rms_ns = rms_delay_spread(p);
  return p;
}

double rms_delay_spread(const ChannelProfile& p) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (const auto& t : p.taps) {
    const double w = db_to_lin(t.power_db);
    s0 += w;
    s1 += w * t.delay_ns;
    s2 += w * t.delay_ns * t.delay_ns;
  }
  const double mean = s1 / s0;
  return std::sqrt(std::max(0.0, s2 / s0 - mean * mean));
}

std::vector<double> quantized_pdp(const ChannelProfile& p, double sample_rate) {
  p.validate();
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw DomainError("sample rate must be positive");
  double total = 0.0;
  for (const auto& t : p.taps) total += db_to_lin(t.power_db);
  const auto last = static_cast<std::size_t>(std::lround(p.taps.back().delay_ns * 1e-9 * sample_rate));
  std::vector<double> pdp(last + 1, 0.0);
  for (const auto& t : p.taps) pdp[static_cast<std::size_t>(std::lround(t.delay_ns * 1e-9 * sample_rate))] += db_to_lin(t.power_db) / total;
  return pdp;
}

DualPolChannelRealization realize_channel(const ChannelProfile& p, double xpd_db, double sample_rate, Rng& rng) {
  if (std::isnan(xpd_db) || xpd_db == -std::numeric_limits<double>::infinity())
    throw DomainError("XPD must be a number or +inf");
  p.validate();
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) throw DomainError("sample rate must be positive");
  double total = 0.0;
  for (const auto& t : p.taps) total += db_to_lin(t.power_db);

  const auto len = static_cast<std::size_t>(std::lround(p.taps.back().delay_ns * 1e-9 * sample_rate)) + 1;
  DualPolChannelRealization ch;
  ch.xpd_db = xpd_db;
  ch.hh.assign(len, cplx{});
  ch.vv.assign(len, cplx{});
  ch.hv.assign(len, cplx{});
  ch.vh.assign(len, cplx{});
  const bool leak = std::isfinite(xpd_db);
  const double leak_scale = leak ? 1.0 / db_to_lin(xpd_db) : 0.0;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);

  auto co_tap = [&](const Tap& t, double power) -> cplx {
    switch (t.fading) {
      case Fading::None: return std::sqrt(power);
      case Fading::Rayleigh: return complex_normal(rng, power);
      case Fading::Ricean: {
        const double k = db_to_lin(t.k_rice_db);
        const cplx los = std::polar(std::sqrt(power * k / (k + 1.0)), phase(rng));
        return los + complex_normal(rng, power / (k + 1.0));
      }
    }
    return 0.0;
  };

  auto tap_index = [&](const Tap& t) { return static_cast<std::size_t>(std::lround(t.delay_ns * 1e-9 * sample_rate)); };
  // Co-polarized taps are drawn first so that, for a given seed, they do not
  // depend on the XPD.
  for (const auto& t : p.taps) {
    const double power = db_to_lin(t.power_db) / total;
    ch.hh[tap_index(t)] += co_tap(t, power);
    ch.vv[tap_index(t)] += co_tap(t, power);
  }
  if (leak)
    for (const auto& t : p.taps) {
      const double power = db_to_lin(t.power_db) / total;
      ch.hv[tap_index(t)] += complex_normal(rng, power * leak_scale);
      ch.vh[tap_index(t)] += complex_normal(rng, power * leak_scale);
    }
  return ch;
}

DualPolChannelRealization realize_channel(const ChannelProfile& p, double xpd_db, double sample_rate,
                                          std::uint64_t seed) {
  Rng rng(seed);
  return realize_channel(p, xpd_db, sample_rate, rng);
}

std::vector<cplx> convolve_same(const std::vector<cplx>& x, const std::vector<cplx>& h) {
  std::vector<cplx> y(x.size(), cplx{});
  for (std::size_t d = 0; d < h.size() && d < x.size(); ++d) {
    const cplx g = h[d];
    if (g == cplx{}) continue;
    for (std::size_t k = d; k < x.size(); ++k) y[k] += g * x[k - d];
  }
  return y;
}

Waveform apply_channel(const Waveform& w, const std::vector<cplx>& taps) {
  Waveform out = w;
  out.samples = convolve_same(w.samples, taps);
  return out;
}

PolarizedWaveform apply_dual_pol_channel(const PolarizedWaveform& pw, const DualPolChannelRealization& ch) {
  if (pw.h.size() != pw.v.size()) throw ShapeError("polarization waveforms differ in length");
  if (pw.h.sample_rate != pw.v.sample_rate) throw ShapeError("polarization sample rates differ");
  PolarizedWaveform out = pw;
  out.h.samples = convolve_same(pw.h.samples, ch.hh);
  out.v.samples = convolve_same(pw.v.samples, ch.vv);
  const auto vh = convolve_same(pw.v.samples, ch.vh);
  const auto hv = convolve_same(pw.h.samples, ch.hv);
  for (std::size_t k = 0; k < out.h.size(); ++k) {
    out.h.samples[k] += vh[k];
    out.v.samples[k] += hv[k];
  }
  return out;
}

PolarizedWaveform apply_angular_mismatch(const PolarizedWaveform& pw, double theta_deg) {
  if (pw.h.size() != pw.v.size()) throw ShapeError("polarization waveforms differ in length");
  if (!(theta_deg >= 0.0 && theta_deg < 90.0)) throw DomainError("angular mismatch must lie in [0, 90) degrees");
  if (theta_deg == 0.0) return pw;
  const double c = std::cos(theta_deg * pi / 180.0);
  const double s = std::sin(theta_deg * pi / 180.0);
  PolarizedWaveform out = pw;
  for (std::size_t k = 0; k < pw.h.size(); ++k) {
    out.h.samples[k] = c * pw.h.samples[k] + s * pw.v.samples[k];
    out.v.samples[k] = c * pw.v.samples[k] + s * pw.h.samples[k];
  }
  return out;
}

double awgn_variance(double tx_energy, double info_bits, double eb_n0_db) {
  if (!(tx_energy > 0.0)) throw DomainError("cannot calibrate noise on a zero-power signal");
  if (!(info_bits > 0.0)) throw DomainError("information bit count must be positive");
  if (std::isnan(eb_n0_db)) throw DomainError("Eb/N0 is NaN");
  if (eb_n0_db == std::numeric_limits<double>::infinity()) return 0.0;
  return tx_energy / info_bits / db_to_lin(eb_n0_db);
}

Waveform add_noise(const Waveform& w, double variance, Rng& rng) {
  if (variance < 0.0 || std::isnan(variance)) throw DomainError("noise variance must be nonnegative");
  Waveform out = w;
  if (variance == 0.0) return out;
  std::normal_distribution<double> g(0.0, std::sqrt(0.5 * variance));
  for (auto& s : out.samples) {
    const double re = g(rng);
    const double im = g(rng);
    s += cplx(re, im);
  }
  return out;
}

Waveform apply_awgn(const Waveform& w, double eb_n0_db, double info_bits, Rng& rng) {
  return add_noise(w, awgn_variance(w.energy(), info_bits, eb_n0_db), rng);
}

Waveform apply_cfo(const Waveform& w, double cfo_norm, int num_subcarriers) {
  if (!(std::abs(cfo_norm) < 0.5)) throw DomainError("normalized CFO must satisfy |cfo| < 0.5");
  Waveform out = w;
  if (cfo_norm == 0.0) return out;
  const double step = 2.0 * pi * cfo_norm / num_subcarriers;
  for (std::size_t k = 0; k < out.size(); ++k) out.samples[k] *= std::polar(1.0, step * static_cast<double>(k));
  return out;
}

Waveform apply_cto(const Waveform& w, long cto_samples) {
  const long n = static_cast<long>(w.size());
  if (std::labs(cto_samples) >= n && n > 0) throw DomainError("timing offset exceeds the frame");
  Waveform out = w;
  if (cto_samples == 0) return out;
  for (long k = 0; k < n; ++k) {
    const long src = k + cto_samples;
    out.samples[k] = (src >= 0 && src < n) ? w.samples[src] : cplx{};
  }
  return out;
}

}  // namespace dpfbmc

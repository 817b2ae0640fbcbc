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


#include "dpfbmc/modem.hpp"

#include <cmath>
#include <string>

#include "dpfbmc/fft.hpp"

namespace dpfbmc {

double Waveform::energy() const {
  double e = 0.0;
  for (const auto& s : samples) e += std::norm(s);
  return e;
}

double Waveform::mean_power() const { return samples.empty() ? 0.0 : energy() / samples.size(); }

// ---- configuration -------------------------------------------------------

std::size_t SystemConfig::cp_length() const {
  if (cp_den <= 0 || cp_num < 0) throw DomainError("invalid cyclic prefix fraction");
  const long long num = static_cast<long long>(cp_num) * num_subcarriers;
  if (num % cp_den != 0) throw DomainError("cyclic prefix fraction does not give an integral length");
  return static_cast<std::size_t>(num / cp_den);
}

std::size_t SystemConfig::wola_length() const {
  if (window_rolloff < 0.0 || window_rolloff >= 1.0) throw ConfigError("WOLA roll-off must lie in [0, 1)");
  return static_cast<std::size_t>(std::lround(window_rolloff * num_subcarriers));
}

void SystemConfig::validate() const {
  if (num_subcarriers < 16 || (num_subcarriers & (num_subcarriers - 1)) != 0)
    throw ConfigError("number of subcarriers must be a power of two >= 16");
  if (guard_left < 0 || guard_right < 0 || guard_left + guard_right + 1 > num_subcarriers)
    throw ConfigError("guard bands do not fit in the subcarrier count");
  if (bandwidth <= 0.0) throw ConfigError("bandwidth must be positive");
}

std::vector<bool> SystemConfig::active_mask() const { return subcarrier_mask(*this); }

std::vector<int> SystemConfig::active_subcarriers() const {
  const auto mask = active_mask();
  std::vector<int> out;
  for (int n = 0; n < num_subcarriers; ++n)
    if (mask[n]) out.push_back(n);
  return out;
}

std::vector<bool> subcarrier_mask(const SystemConfig& cfg) {
  cfg.validate();
  const int N = cfg.num_subcarriers;
  std::vector<bool> mask(N, true);
  for (int n = 0; n < N; ++n) {
    const int nu = signed_frequency(n, N);
    if (nu < -N / 2 + cfg.guard_left) mask[n] = false;
    if (nu >= N / 2 - cfg.guard_right) mask[n] = false;
    if (cfg.dc_null && nu == 0) mask[n] = false;
  }
  return mask;
}

// ---- OQAM staggering -----------------------------------------------------

OqamGrid qam_to_oqam(const QamGrid& g) {
  OqamGrid a(g.rows(), 2 * g.cols());
  for (std::size_t n = 0; n < g.rows(); ++n)
    for (std::size_t t = 0; t < g.cols(); ++t) {
      a(n, 2 * t) = g(n, t).real();
      a(n, 2 * t + 1) = g(n, t).imag();
    }
  return a;
}

OqamGrid qam_to_oqam(const QamGrid& g, const std::vector<bool>& mask) {
  if (mask.size() != g.rows()) throw ShapeError("mask length differs from subcarrier count");
  OqamGrid a = qam_to_oqam(g);
  for (std::size_t n = 0; n < a.rows(); ++n)
    if (!mask[n])
      for (auto& v : a.row(n)) v = 0.0;
  return a;
}

QamGrid oqam_to_qam(const OqamGrid& a) {
  if (a.cols() % 2 != 0) throw ShapeError("OQAM grid needs an even number of instants");
  QamGrid g(a.rows(), a.cols() / 2);
  for (std::size_t n = 0; n < a.rows(); ++n)
    for (std::size_t t = 0; t < g.cols(); ++t) g(n, t) = {a(n, 2 * t), a(n, 2 * t + 1)};
  return g;
}

// ---- FBMC ----------------------------------------------------------------

namespace {

double phase_center(const PrototypeFilter& f) { return 0.5 * static_cast<double>(f.length() - 1); }

void check_filter(const PrototypeFilter& f) {
  const auto N = static_cast<std::size_t>(f.num_subcarriers);
  if (N == 0 || f.length() != N * static_cast<std::size_t>(f.overlap))
    throw ShapeError("prototype filter length is not K*N");
}

// e^{-j 2 pi nu_n c / N} for every bin.
std::vector<cplx> center_phases(const PrototypeFilter& f) {
  const int N = f.num_subcarriers;
  const double c = phase_center(f);
  std::vector<cplx> out(N);
  for (int n = 0; n < N; ++n) out[n] = std::polar(1.0, -2.0 * pi * signed_frequency(n, N) * c / N);
  return out;
}

cplx bin_phase(const std::vector<cplx>& centers, int N, int n, long m) {
  const int nu = signed_frequency(n, N);
  cplx p = j_power(n + m) * centers[n];
  if ((static_cast<long>(nu) * m) % 2 != 0) p = -p;
  return p;
}

}  // namespace

cplx fbmc_bin_phase(const PrototypeFilter& f, int n, int m) {
  const int N = f.num_subcarriers;
  const int nu = signed_frequency(n, N);
  cplx p = phase_term(n, m) * std::polar(1.0, -2.0 * pi * nu * phase_center(f) / N);
  if ((static_cast<long>(nu) * m) % 2 != 0) p = -p;
  return p;
}

BasisFunction basis_function(const PrototypeFilter& f, int n, int m) {
  check_filter(f);
  const int N = f.num_subcarriers;
  if (n < 0 || n >= N) throw DomainError("subcarrier index out of range");
  if (m < 0) throw DomainError("symbol index must be nonnegative");
  const double c = phase_center(f);
  const int nu = signed_frequency(n, N);
  BasisFunction q;
  q.start = static_cast<std::size_t>(m) * (N / 2);
  q.values.resize(f.length());
  const cplx theta = phase_term(n, m);
  for (std::size_t i = 0; i < f.length(); ++i) {
    const double k = static_cast<double>(q.start + i);
    q.values[i] = f.coeffs[i] * std::polar(1.0, 2.0 * pi * nu * (k - c) / N) * theta;
  }
  return q;
}

cplx inner_product(const BasisFunction& x, const BasisFunction& y) {
  const std::size_t lo = std::max(x.start, y.start);
  const std::size_t hi = std::min(x.start + x.values.size(), y.start + y.values.size());
  cplx s = 0.0;
  for (std::size_t k = lo; k < hi; ++k) s += x.values[k - x.start] * std::conj(y.values[k - y.start]);
  return s;
}

std::size_t fbmc_frame_length(const PrototypeFilter& f, std::size_t num_instants) {
  if (num_instants == 0) return 0;
  return f.length() + (num_instants - 1) * static_cast<std::size_t>(f.num_subcarriers / 2);
}

Waveform fbmc_modulate_direct(const OqamGrid& a, const PrototypeFilter& f, double sample_rate) {
  check_filter(f);
  if (a.rows() != static_cast<std::size_t>(f.num_subcarriers))
    throw ShapeError("grid rows differ from filter subcarrier count");
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(fbmc_frame_length(f, a.cols()), cplx{});
  for (std::size_t m = 0; m < a.cols(); ++m)
    for (std::size_t n = 0; n < a.rows(); ++n) {
      const double v = a(n, m);
      if (v == 0.0) continue;
      const auto q = basis_function(f, static_cast<int>(n), static_cast<int>(m));
      for (std::size_t i = 0; i < q.values.size(); ++i) w.samples[q.start + i] += v * q.values[i];
    }
  return w;
}

Waveform fbmc_modulate_fast(const OqamGrid& a, const PrototypeFilter& f, double sample_rate) {
  check_filter(f);
  const int N = f.num_subcarriers;
  if (a.rows() != static_cast<std::size_t>(N)) throw ShapeError("grid rows differ from filter subcarrier count");
  const auto centers = center_phases(f);
  const std::size_t L = f.length();
  const std::size_t half = static_cast<std::size_t>(N) / 2;

  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.assign(fbmc_frame_length(f, a.cols()), cplx{});
  std::vector<cplx> X(N), b(N);
  for (std::size_t m = 0; m < a.cols(); ++m) {
    bool any = false;
    for (int n = 0; n < N; ++n) {
      const double v = a(n, m);
      X[n] = v == 0.0 ? cplx{} : v * bin_phase(centers, N, n, static_cast<long>(m));
      any = any || v != 0.0;
    }
    if (!any) continue;
    fft::inverse(X, b);
    cplx* out = w.samples.data() + m * half;
    for (std::size_t i = 0; i < L; ++i) out[i] += f.coeffs[i] * static_cast<double>(N) * b[i % N];
  }
  return w;
}

ComplexGrid fbmc_demodulate(const Waveform& w, const PrototypeFilter& f) {
  check_filter(f);
  const int N = f.num_subcarriers;
  const std::size_t L = f.length();
  const std::size_t half = static_cast<std::size_t>(N) / 2;

  std::vector<cplx> y;
  const std::vector<cplx>* src = &w.samples;
  if (w.head_trim != 0 || w.tail_trim != 0) {
    y.assign(w.head_trim, cplx{});
    y.insert(y.end(), w.samples.begin(), w.samples.end());
    y.resize(y.size() + w.tail_trim);
    src = &y;
  }
  const std::size_t len = src->size();
  if (len == 0) return {};
  if (len < L || (len - L) % half != 0) throw ShapeError("waveform length does not match an integer number of instants");
  const std::size_t M = (len - L) / half + 1;

  const auto centers = center_phases(f);
  const double inv_energy = 1.0 / f.energy();
  ComplexGrid r(N, M);
  std::vector<cplx> z(N), Z(N);
  for (std::size_t m = 0; m < M; ++m) {
    std::fill(z.begin(), z.end(), cplx{});
    const cplx* seg = src->data() + m * half;
    for (std::size_t i = 0; i < L; ++i) z[i % N] += seg[i] * f.coeffs[i];
    fft::forward(z, Z);
    for (int n = 0; n < N; ++n)
      r(n, m) = Z[n] * std::conj(bin_phase(centers, N, n, static_cast<long>(m))) * inv_energy;
  }
  return r;
}

// ---- CP-OFDM -------------------------------------------------------------

Waveform cp_ofdm_modulate(const QamGrid& g, const SystemConfig& cfg) {
  const auto N = static_cast<std::size_t>(cfg.num_subcarriers);
  if (g.rows() != N) throw ShapeError("grid rows differ from subcarrier count");
  const std::size_t cp = cfg.cp_length();
  const double scale = std::sqrt(static_cast<double>(N));
  Waveform w;
  w.sample_rate = cfg.bandwidth;
  w.samples.resize(g.cols() * (N + cp));
  std::vector<cplx> X(N), t(N);
  for (std::size_t s = 0; s < g.cols(); ++s) {
    for (std::size_t n = 0; n < N; ++n) X[n] = g(n, s);
    fft::inverse(X, t);
    cplx* out = w.samples.data() + s * (N + cp);
    for (std::size_t i = 0; i < cp; ++i) out[i] = t[N - cp + i] * scale;
    for (std::size_t i = 0; i < N; ++i) out[cp + i] = t[i] * scale;
  }
  return w;
}

QamGrid cp_ofdm_demodulate(const Waveform& w, const SystemConfig& cfg) {
  const auto N = static_cast<std::size_t>(cfg.num_subcarriers);
  const std::size_t cp = cfg.cp_length();
  const std::size_t sym = N + cp;
  const std::size_t len = w.size() - std::min(w.size(), w.tail_extension);
  if (len % sym != 0) throw ShapeError("waveform length is not a whole number of OFDM symbols");
  const std::size_t S = len / sym;
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  QamGrid g(N, S);
  std::vector<cplx> t(N), X(N);
  for (std::size_t s = 0; s < S; ++s) {
    std::copy_n(w.samples.begin() + static_cast<std::ptrdiff_t>(s * sym + cp), N, t.begin());
    fft::forward(t, X);
    for (std::size_t n = 0; n < N; ++n) g(n, s) = X[n] * scale;
  }
  return g;
}

Waveform wola_window(const Waveform& w, const SystemConfig& cfg) {
  const std::size_t W = cfg.wola_length();
  if (W == 0) return w;
  const auto N = static_cast<std::size_t>(cfg.num_subcarriers);
  const std::size_t cp = cfg.cp_length();
  if (W > cp) throw ConfigError("WOLA ramp of " + std::to_string(W) + " samples exceeds the cyclic prefix");
  if (w.tail_extension != 0) throw ConfigError("waveform is already windowed");
  const std::size_t sym = N + cp;
  if (w.size() % sym != 0) throw ShapeError("waveform length is not a whole number of OFDM symbols");
  const std::size_t S = w.size() / sym;

  std::vector<double> rise(W);
  for (std::size_t i = 0; i < W; ++i) rise[i] = 0.5 * (1.0 - std::cos(pi * (i + 0.5) / W));

  Waveform out;
  out.sample_rate = w.sample_rate;
  out.frame_offsets = w.frame_offsets;
  out.tail_extension = W;
  out.samples.assign(w.size() + W, cplx{});
  for (std::size_t s = 0; s < S; ++s) {
    const cplx* in = w.samples.data() + s * sym;
    cplx* o = out.samples.data() + s * sym;
    for (std::size_t i = 0; i < sym; ++i) o[i] += in[i] * (i < W ? rise[i] : 1.0);
    // cyclic suffix continues the symbol body
    for (std::size_t i = 0; i < W; ++i) o[sym + i] += in[cp + i] * rise[W - 1 - i];
  }
  return out;
}

// ---- frame tails ---------------------------------------------------------

std::size_t tail_cut(int overlap, int num_subcarriers) {
  if (overlap < 2) throw DomainError("overlap factor must be >= 2");
  return static_cast<std::size_t>(overlap - 2) * static_cast<std::size_t>(num_subcarriers) / 2;
}

Waveform truncate_tails(const Waveform& w, int overlap, int num_subcarriers) {
  const std::size_t cut = tail_cut(overlap, num_subcarriers);
  if (w.head_trim != 0 || w.tail_trim != 0) throw IntegrityError("waveform is already truncated");
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.head_trim = cut;
  out.tail_trim = cut;
  out.frame_offsets.clear();
  const auto& off = w.frame_offsets.empty() ? std::vector<std::size_t>{0} : w.frame_offsets;
  for (std::size_t i = 0; i < off.size(); ++i) {
    const std::size_t begin = off[i];
    const std::size_t end = i + 1 < off.size() ? off[i + 1] : w.size();
    if (end < begin || end - begin <= 2 * cut) throw ShapeError("frame too short for tail truncation");
    out.frame_offsets.push_back(out.samples.size());
    out.samples.insert(out.samples.end(), w.samples.begin() + static_cast<std::ptrdiff_t>(begin + cut),
                       w.samples.begin() + static_cast<std::ptrdiff_t>(end - cut));
  }
  return out;
}

Waveform concatenate(const std::vector<Waveform>& frames) {
  Waveform out;
  out.frame_offsets.clear();
  if (frames.empty()) {
    out.frame_offsets.push_back(0);
    return out;
  }
  out.sample_rate = frames.front().sample_rate;
  out.head_trim = frames.front().head_trim;
  out.tail_trim = frames.front().tail_trim;
  for (const auto& f : frames) {
    if (f.head_trim != out.head_trim || f.tail_trim != out.tail_trim)
      throw IntegrityError("frames disagree on trim metadata");
    out.frame_offsets.push_back(out.samples.size());
    out.samples.insert(out.samples.end(), f.samples.begin(), f.samples.end());
  }
  return out;
}

}  // namespace dpfbmc

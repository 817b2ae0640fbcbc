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


#include "dpfbmc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "dpfbmc/fft.hpp"

namespace dpfbmc {

double BerRecord::ber() const {
  if (bits == 0) throw DomainError("BER of an empty record");
  return static_cast<double>(bit_errors) / static_cast<double>(bits);
}

double BerRecord::std_error() const {
  const double p = ber();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

double BerRecord::ci_halfwidth(double z) const { return z * std_error(); }

BerRecord& BerRecord::merge(const BerRecord& other) {
  bit_errors += other.bit_errors;
  bits += other.bits;
  frames += other.frames;
  return *this;
}

BerRecord ber_count(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits) {
  if (tx_bits.size() != rx_bits.size()) throw ShapeError("bit streams differ in length");
  BerRecord r;
  r.bits = tx_bits.size();
  for (std::size_t i = 0; i < tx_bits.size(); ++i) r.bit_errors += (tx_bits[i] != 0) != (rx_bits[i] != 0);
  return r;
}

PsdEstimate psd_periodogram(const Waveform& w, int num_subcarriers, std::size_t segment_length, double overlap) {
  if (num_subcarriers <= 0) throw DomainError("subcarrier count must be positive");
  const std::size_t S = segment_length ? segment_length : 4 * static_cast<std::size_t>(num_subcarriers);
  if (overlap < 0.0 || overlap >= 1.0) throw DomainError("overlap must lie in [0, 1)");
  if (w.size() < S) throw DomainError("waveform shorter than one periodogram segment");
  const std::size_t step = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(S * (1.0 - overlap))));

  std::vector<double> win(S);
  for (std::size_t i = 0; i < S; ++i) win[i] = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / S);

  std::vector<double> acc(S, 0.0);
  std::vector<cplx> seg(S), spec(S);
  std::size_t count = 0;
  for (std::size_t start = 0; start + S <= w.size(); start += step, ++count) {
    for (std::size_t i = 0; i < S; ++i) seg[i] = w.samples[start + i] * win[i];
    fft::forward(seg, spec);
    for (std::size_t k = 0; k < S; ++k) acc[k] += std::norm(spec[k]);
  }

  PsdEstimate p;
  p.segment_length = S;
  p.segment_step = step;
  p.segments = count;
  p.frequency.resize(S);
  p.density.resize(S);
  p.density_db.resize(S);
  const double peak = *std::max_element(acc.begin(), acc.end());
  const long half = static_cast<long>(S / 2);
  for (std::size_t i = 0; i < S; ++i) {
    const long k = static_cast<long>(i) - half;  // DC at the center
    const std::size_t bin = static_cast<std::size_t>((k + static_cast<long>(S)) % static_cast<long>(S));
    p.frequency[i] = static_cast<double>(k) * num_subcarriers / static_cast<double>(S);
    p.density[i] = peak > 0.0 ? acc[bin] / peak : 0.0;
    p.density_db[i] = p.density[i] > 0.0 ? std::max(kPsdFloorDb, 10.0 * std::log10(p.density[i])) : kPsdFloorDb;
  }
  return p;
}

double oob_power(const PsdEstimate& p, double band_edge, double guard_offset) {
  double in = 0.0, out = 0.0;
  std::size_t n_in = 0, n_out = 0;
  for (std::size_t i = 0; i < p.frequency.size(); ++i) {
    const double f = std::abs(p.frequency[i]);
    if (f <= band_edge) {
      in += p.density[i];
      ++n_in;
    } else if (f >= band_edge + guard_offset) {
      out += p.density[i];
      ++n_out;
    }
  }
  if (n_in == 0 || n_out == 0) throw DomainError("frequency axis does not cover the requested regions");
  if (out <= 0.0 || in <= 0.0) return kOobFloorDb;
  return std::max(kOobFloorDb, 10.0 * std::log10((out / n_out) / (in / n_in)));
}

void write_psd_csv(std::ostream& os, const std::vector<std::pair<std::string, PsdEstimate>>& traces) {
  if (!traces.empty()) {
    const auto& p = traces.front().second;
    os << "# estimator=welch window=" << p.window << " segment=" << p.segment_length << " step=" << p.segment_step
       << '\n';
  }
  os << "system,frequency,density_db,segments\n";
  os << std::setprecision(10);
  for (const auto& [name, p] : traces)
    for (std::size_t i = 0; i < p.frequency.size(); ++i)
      os << name << ',' << p.frequency[i] << ',' << p.density_db[i] << ',' << p.segments << '\n';
}

PaprCcdf papr_ccdf(const Waveform& w, int oversample, double max_db, double step_db) {
  if (oversample < 1) throw DomainError("oversampling factor must be at least 1");
  if (step_db <= 0.0) throw DomainError("threshold step must be positive");
  std::vector<cplx> x = w.samples;
  if (oversample > 1 && !x.empty()) {
    const std::size_t S = x.size();
    const auto X = fft::forward(x);
    std::vector<cplx> Y(S * oversample, cplx{});
    const std::size_t pos = (S + 1) / 2;
    for (std::size_t k = 0; k < pos; ++k) Y[k] = X[k];
    for (std::size_t k = pos; k < S; ++k) Y[Y.size() - S + k] = X[k];
    x = fft::inverse(Y);
    for (auto& v : x) v *= static_cast<double>(oversample);
  }
  double mean = 0.0;
  for (const auto& v : x) mean += std::norm(v);
  if (x.empty() || mean <= 0.0) throw DomainError("PAPR of a zero-power waveform");
  mean /= static_cast<double>(x.size());

  std::vector<double> ratio_db(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::norm(x[i]) / mean;
    ratio_db[i] = r > 0.0 ? 10.0 * std::log10(r) : -1e300;
  }
  std::sort(ratio_db.begin(), ratio_db.end());

  PaprCcdf c;
  c.oversample = oversample;
  c.peak_db = ratio_db.back();
  const auto steps = static_cast<std::size_t>(std::floor(max_db / step_db + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double th = static_cast<double>(i) * step_db;
    const auto above = ratio_db.end() - std::upper_bound(ratio_db.begin(), ratio_db.end(), th);
    c.threshold_db.push_back(th);
    c.ccdf.push_back(static_cast<double>(above) / static_cast<double>(ratio_db.size()));
  }
  return c;
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double theoretical_ber_qpsk(double eb_n0_db) { return qfunc(std::sqrt(2.0 * std::pow(10.0, eb_n0_db / 10.0))); }

double qpsk_ebn0_for_ber(double ber) {
  if (!(ber > 0.0 && ber < 0.5)) throw DomainError("BER must lie in (0, 0.5)");
  double lo = -30.0, hi = 30.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (theoretical_ber_qpsk(mid) > ber ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double theoretical_sinr_angular(double snr_db, double theta_deg) {
  if (theta_deg < 0.0 || theta_deg >= 90.0) throw DomainError("mismatch angle must lie in [0, 90) degrees");
  const double t = std::tan(theta_deg * pi / 180.0);
  return snr_db - 10.0 * std::log10(1.0 + t * t);
}

namespace {

template <typename T>
double sinr_impl(std::span<const T> tx, std::span<const T> rx) {
  if (tx.size() != rx.size() || tx.empty()) throw ShapeError("symbol streams differ in length or are empty");
  T cross{};
  double ex = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    if constexpr (std::is_same_v<T, cplx>)
      cross += std::conj(tx[i]) * rx[i];
    else
      cross += tx[i] * rx[i];
    ex += std::norm(tx[i]);
  }
  if (ex <= 0.0) throw DomainError("reference symbols carry no power");
  const T g = cross / ex;
  double err = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) err += std::norm(rx[i] - g * tx[i]);
  if (err <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(std::norm(g) * ex / err);
}

}  // namespace

double measured_sinr_db(std::span<const cplx> tx, std::span<const cplx> rx) { return sinr_impl(tx, rx); }
double measured_sinr_db(std::span<const double> tx, std::span<const double> rx) { return sinr_impl(tx, rx); }

}  // namespace dpfbmc

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



#ifndef DPFBMC_METRICS_HPP
#define DPFBMC_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpfbmc/types.hpp"

namespace dpfbmc {

// ---- bit error rate --------------------------------------------------------

/// Error count over a number of bits. Records merge associatively, so frame
/// results can be reduced in any grouping with the same outcome.
struct BerRecord {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  std::uint64_t frames = 0;
  std::uint64_t seed = 0;
  std::string fingerprint;

  double ber() const;
  /// Binomial standard error sqrt(p (1 - p) / bits).
  double std_error() const;
  /// Half-width of the normal-approximation confidence interval.
  double ci_halfwidth(double z = 1.96) const;
  BerRecord& merge(const BerRecord& other);
};

BerRecord ber_count(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

// ---- spectrum -----------------------------------------------------------------

/// Averaged modified periodogram. The frequency axis is in subcarrier
/// spacings, centered on DC; densities are normalized to a 0 dB peak.
struct PsdEstimate {
  std::vector<double> frequency;   // subcarrier spacings
  std::vector<double> density;     // linear, peak 1
  std::vector<double> density_db;  // floored at kPsdFloorDb
  std::size_t segment_length = 0;
  std::size_t segment_step = 0;
  std::size_t segments = 0;
  std::string window = "hann";
};

inline constexpr double kPsdFloorDb = -300.0;
inline constexpr double kOobFloorDb = -150.0;

/// Welch estimate with a Hann taper. segment_length 0 selects 4 N samples.
/// Throws DomainError if the input is shorter than one segment.
PsdEstimate psd_periodogram(const Waveform& w, int num_subcarriers, std::size_t segment_length = 0,
                            double overlap = 0.5);

/// Mean density beyond |f| >= band_edge + guard_offset relative to the mean
/// over |f| <= band_edge, in dB, never below kOobFloorDb. Frequencies in
/// subcarrier spacings.
double oob_power(const PsdEstimate& p, double band_edge, double guard_offset);

void write_psd_csv(std::ostream& os, const std::vector<std::pair<std::string, PsdEstimate>>& traces);

// ---- PAPR -------------------------------------------------------------------------

struct PaprCcdf {
  std::vector<double> threshold_db;
  std::vector<double> ccdf;  // P(power / mean > threshold)
  double peak_db = 0.0;
  int oversample = 1;
};

/// CCDF of instantaneous power over mean power after band-limited
/// interpolation by `oversample`. Throws DomainError on zero power.
PaprCcdf papr_ccdf(const Waveform& w, int oversample = 4, double max_db = 14.0, double step_db = 0.1);

// ---- closed forms and measurements --------------------------------------------

/// Gaussian tail probability via erfc.
double qfunc(double x);

/// Q(sqrt(2 Eb/N0)), Gray-coded QPSK on AWGN.
double theoretical_ber_qpsk(double eb_n0_db);

/// Eb/N0 in dB at which Gray QPSK on AWGN reaches the given BER.
double qpsk_ebn0_for_ber(double ber);

/// SNR - 10 log10(1 + tan^2 theta) for a polarization mismatch theta < 90 deg.
double theoretical_sinr_angular(double snr_db, double theta_deg);

/// Signal to interference plus noise ratio of rx against tx, after a least
/// squares fit of one complex gain. In dB.
double measured_sinr_db(std::span<const cplx> tx, std::span<const cplx> rx);
double measured_sinr_db(std::span<const double> tx, std::span<const double> rx);

}  // namespace dpfbmc

#endif  // DPFBMC_METRICS_HPP

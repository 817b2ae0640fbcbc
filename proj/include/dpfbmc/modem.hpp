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


#ifndef DPFBMC_MODEM_HPP
#define DPFBMC_MODEM_HPP

#include <vector>

#include "dpfbmc/prototype_filter.hpp"
#include "dpfbmc/types.hpp"

namespace dpfbmc {

// QAM grids are N x M_qam complex matrices, OQAM grids N x 2*M_qam real
// matrices. Row n is DFT bin n; its physical frequency index is
// signed_frequency(n, N), so the spectrum is contiguous around DC.
using QamGrid = ComplexGrid;
using OqamGrid = RealGrid;

/// Signed frequency index of DFT bin n: n for n < N/2, n - N otherwise.
inline int signed_frequency(int n, int num_subcarriers) {
  return n < num_subcarriers / 2 ? n : n - num_subcarriers;
}

struct SystemConfig {
  int num_subcarriers = 512;
  int guard_left = 17;   // lowest frequencies
  int guard_right = 16;  // highest frequencies
  bool dc_null = true;
  double bandwidth = 10e6;  // equals the sample rate
  int cp_num = 1;
  int cp_den = 32;
  double window_rolloff = 0.0;

  /// Cyclic prefix length in samples; throws DomainError if not integral.
  std::size_t cp_length() const;
  /// WOLA ramp length in samples.
  std::size_t wola_length() const;
  std::vector<bool> active_mask() const;
  std::vector<int> active_subcarriers() const;
  void validate() const;
};

std::vector<bool> subcarrier_mask(const SystemConfig& cfg);

// ---- OQAM staggering -----------------------------------------------------

/// a(n, 2t) = Re g(n, t), a(n, 2t + 1) = Im g(n, t).
OqamGrid qam_to_oqam(const QamGrid& g);
OqamGrid qam_to_oqam(const QamGrid& g, const std::vector<bool>& mask);
QamGrid oqam_to_qam(const OqamGrid& a);

/// e^{j pi (n + m) / 2}.
inline cplx phase_term(long n, long m) { return j_power(n + m); }

// ---- FBMC ----------------------------------------------------------------

/// Q_{n,m}[k] for k in [start, start + values.size()); zero elsewhere.
struct BasisFunction {
  std::size_t start = 0;
  std::vector<cplx> values;
};

/// h[k - mN/2] e^{j 2 pi nu_n (k - (L-1)/2) / N} e^{j theta_{n,m}}.
BasisFunction basis_function(const PrototypeFilter& f, int n, int m);

/// <x, y> = sum_k x[k] conj(y[k]).
cplx inner_product(const BasisFunction& x, const BasisFunction& y);

/// Samples in one untruncated FBMC frame of M half-symbol instants.
std::size_t fbmc_frame_length(const PrototypeFilter& f, std::size_t num_instants);

/// Literal superposition of a_{n,m} Q_{n,m}[k]. Reference only.
Waveform fbmc_modulate_direct(const OqamGrid& a, const PrototypeFilter& f, double sample_rate = 1.0);

/// Polyphase/IFFT synthesis, overlap-added at stride N/2.
Waveform fbmc_modulate_fast(const OqamGrid& a, const PrototypeFilter& f, double sample_rate = 1.0);

/// Inner products with every Q_{n,m}, normalized by the filter energy.
/// Tail-truncated frames are zero-padded back to full length first.
ComplexGrid fbmc_demodulate(const Waveform& w, const PrototypeFilter& f);

/// Per-subcarrier phase factor shared by the fast modulator and demodulator.
cplx fbmc_bin_phase(const PrototypeFilter& f, int n, int m);

// ---- CP-OFDM -------------------------------------------------------------

/// Unitary IDFT per symbol, cyclic prefix prepended.
Waveform cp_ofdm_modulate(const QamGrid& g, const SystemConfig& cfg);
/// Discards each cyclic prefix (and, for WOLA output, the trailing ramp).
QamGrid cp_ofdm_demodulate(const Waveform& w, const SystemConfig& cfg);

/// Raised-cosine weighted overlap-and-add on a CP-OFDM waveform. Each symbol
/// gets a rising ramp over the first W prefix samples and a cyclic suffix of
/// W samples with a falling ramp that overlaps the next symbol's prefix.
/// The output is W samples longer than the input.
Waveform wola_window(const Waveform& w, const SystemConfig& cfg);

// ---- frame tails ---------------------------------------------------------

/// Samples cut from each end of an FBMC frame: (K/2 - 1) N.
std::size_t tail_cut(int overlap, int num_subcarriers);

/// Removes (K/2 - 1) N samples from both ends of every frame.
Waveform truncate_tails(const Waveform& w, int overlap, int num_subcarriers);

/// Concatenates frames, recording frame offsets. Trim metadata must agree.
Waveform concatenate(const std::vector<Waveform>& frames);

}  // namespace dpfbmc

#endif  // DPFBMC_MODEM_HPP

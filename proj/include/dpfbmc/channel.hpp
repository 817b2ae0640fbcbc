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


#ifndef DPFBMC_CHANNEL_HPP
#define DPFBMC_CHANNEL_HPP

#include <istream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "dpfbmc/rng.hpp"
#include "dpfbmc/types.hpp"

namespace dpfbmc {

enum class Fading { None, Rayleigh, Ricean };

struct Tap {
  double delay_ns = 0.0;
  double power_db = 0.0;
  Fading fading = Fading::Rayleigh;
  double k_rice_db = 0.0;  // Ricean only
};

struct ChannelProfile {
  std::string name;
  std::vector<Tap> taps;
  double declared_rms_ns = 0.0;

  void validate() const;
};

/// ag_los, pedestrian_a, pedestrian_b, vehicular_b, awgn.
ChannelProfile builtin_profile(std::string_view name);
std::vector<std::string> builtin_profile_names();

/// Reads `tau_ns,power_db,fading,k_rice_db` rows (header optional; fading is
/// rayleigh, ricean or none).
ChannelProfile load_profile_csv(std::istream& is, std::string name);

/// Power-weighted RMS delay spread in ns.
double rms_delay_spread(const ChannelProfile& p);

/// Linear mean power per sample delay after nearest-sample rounding,
/// normalized to unit total power.
std::vector<double> quantized_pdp(const ChannelProfile& p, double sample_rate);

/// Tap-delay lines indexed by delay in samples.
struct DualPolChannelRealization {
  std::vector<cplx> hh;  // H -> H
  std::vector<cplx> vv;  // V -> V
  std::vector<cplx> hv;  // H -> V leakage
  std::vector<cplx> vh;  // V -> H leakage
  double xpd_db = std::numeric_limits<double>::infinity();
};

/// One block-fading draw. Co-polar taps follow each tap's fading law,
/// independently for HH and VV; cross-polar taps are independent Rayleigh on
/// the same delay profile, scaled by 1/XPD. xpd_db = +inf gives zero leakage.
DualPolChannelRealization realize_channel(const ChannelProfile& p, double xpd_db, double sample_rate, Rng& rng);
DualPolChannelRealization realize_channel(const ChannelProfile& p, double xpd_db, double sample_rate,
                                          std::uint64_t seed);

/// Linear convolution truncated to the input length.
std::vector<cplx> convolve_same(const std::vector<cplx>& x, const std::vector<cplx>& h);

Waveform apply_channel(const Waveform& w, const std::vector<cplx>& taps);

/// rH = hHH*xH + hVH*xV, rV = hVV*xV + hHV*xH.
PolarizedWaveform apply_dual_pol_channel(const PolarizedWaveform& pw, const DualPolChannelRealization& ch);

/// rH = cos(t) xH + sin(t) xV, rV = cos(t) xV + sin(t) xH.
PolarizedWaveform apply_angular_mismatch(const PolarizedWaveform& pw, double theta_deg);

/// Complex noise variance per sample for a given Eb/N0, from the total
/// transmitted energy and the number of information bits it carries.
double awgn_variance(double tx_energy, double info_bits, double eb_n0_db);

/// Adds CN(0, variance) to every sample.
Waveform add_noise(const Waveform& w, double variance, Rng& rng);

/// Single-stream convenience: variance from the waveform's own energy.
Waveform apply_awgn(const Waveform& w, double eb_n0_db, double info_bits, Rng& rng);

/// x[k] e^{j 2 pi cfo k / N}.
Waveform apply_cfo(const Waveform& w, double cfo_norm, int num_subcarriers);

/// Receiver samples cto samples late (positive) or early (negative); the
/// vacated samples are zero.
Waveform apply_cto(const Waveform& w, long cto_samples);

}  // namespace dpfbmc

#endif  // DPFBMC_CHANNEL_HPP

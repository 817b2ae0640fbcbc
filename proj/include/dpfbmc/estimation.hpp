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


#ifndef DPFBMC_ESTIMATION_HPP
#define DPFBMC_ESTIMATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpfbmc/channel.hpp"
#include "dpfbmc/dp_multiplex.hpp"
#include "dpfbmc/interference.hpp"
#include "dpfbmc/modem.hpp"

namespace dpfbmc {

/// Scattered pilots: `subcarriers` (bin indices) at QAM symbol instants
/// `instants`. In FBMC a pilot occupies the real slot m = 2t and its
/// auxiliary symbol the imaginary slot m = 2t + 1 of the same QAM symbol, so
/// every system spends the same lattice budget on pilots.
struct PilotLayout {
  int num_subcarriers = 0;
  std::vector<int> subcarriers;
  std::vector<int> instants;
  int period = 4;
  std::uint64_t seed = 0;
  std::pair<int, int> aux_offset{0, 1};
  int cancel_dn = 2;
  int cancel_dm = 2;
  // [group * subcarriers.size() + i]
  std::vector<cplx> ofdm_values;     // unit-magnitude QPSK
  std::vector<double> fbmc_values;   // +-1, slot m = 2t
  std::vector<double> fbmc_values2;  // +-1, used when slot 2t + 1 is a pilot too

  std::size_t count() const { return subcarriers.size() * instants.size(); }
  bool empty() const { return subcarriers.empty() || instants.empty(); }
};

inline constexpr std::uint64_t kDefaultPilotSeed = 0x70696c6f74ULL;

/// `count` pilot subcarriers spaced floor((active span + DC) / count) apart,
/// centred on DC and never on it; pilot instants first, first + period, ...
PilotLayout make_pilot_layout(const SystemConfig& cfg, std::size_t qam_instants, int count = 30, int period = 4,
                              int first = 1, std::uint64_t seed = kDefaultPilotSeed);

std::string pilot_layout_to_json(const PilotLayout& layout);
PilotLayout pilot_layout_from_json(const std::string& text);

/// 1 where a QAM slot carries data.
Matrix<std::uint8_t> data_slots(const PilotLayout& layout, const std::vector<bool>& mask, std::size_t qam_instants);

/// One known lattice point in the FBMC domain.
struct PilotSlot {
  int n = 0;
  int m = 0;
  int group = 0;  // index into layout.instants
  Polarization pol = Polarization::H;
  double value = 0.0;
  bool aux = false;
};

/// Pilot and auxiliary slots for conventional FBMC (no structure, all on H)
/// or a DP structure. In DP structures I and III the auxiliary slot falls on
/// the other polarization and serves there as a pilot; in structure II it
/// stays on the same polarization and remains an auxiliary symbol.
std::vector<PilotSlot> fbmc_pilot_slots(const PilotLayout& layout, std::optional<DpStructure> s = std::nullopt);

/// Writes the OFDM pilot values. Throws ShapeError if a pilot is masked.
void place_pilots(QamGrid& g, const PilotLayout& layout, const std::vector<bool>& mask);
/// Writes pilot values and zeroes auxiliary slots. For DP structures, place
/// pilots on the merged grid before dp_split.
void place_pilots(OqamGrid& a, const PilotLayout& layout, const std::vector<bool>& mask,
                  std::optional<DpStructure> s = std::nullopt);

/// Sets each auxiliary symbol so that the intrinsic interference at its pilot
/// over the cancellation box vanishes. Throws DomainError if the auxiliary
/// position has a zero localization coefficient.
void insert_auxiliary_pilots(OqamGrid& a, const PilotLayout& layout, const LocalizationTable& t);
void insert_auxiliary_pilots(PolarizedOqamGrid& p, const PilotLayout& layout, const LocalizationTable& t);

enum class EstimateMethod { LsDft, Pck };

/// Complex gain for every lattice point (N x M).
struct ChannelEstimate {
  ComplexGrid gains;
  EstimateMethod method = EstimateMethod::LsDft;
};

struct PilotObservation {
  int n = 0;
  int group = 0;
  cplx gain;
};

/// Frequency interpolation of equally spaced pilot gains by zero-padded DFT
/// over the comb span; gains outside the span are held from the nearest
/// edge pilot. `nus` are signed frequencies, ascending.
std::vector<cplx> dft_interpolate(const std::vector<int>& nus, const std::vector<cplx>& gains, int num_subcarriers);

/// Interpolates per group across frequency, then holds the nearest group
/// across time. `group_instants[g]` is the lattice column of group g.
ChannelEstimate ls_interpolate(const std::vector<PilotObservation>& obs, int num_subcarriers, std::size_t columns,
                               const std::vector<int>& group_instants);

ChannelEstimate ls_estimate_ofdm(const QamGrid& r, const PilotLayout& layout);
ChannelEstimate ls_estimate_fbmc(const ComplexGrid& r, const PilotLayout& layout);
/// Co-polar estimate for each polarization from its own pilots, merged by
/// the structure.
ChannelEstimate ls_estimate_dp(const DpDemodulated& d, const PilotLayout& layout, DpStructure s);

/// H(nu) = sum_d h_d e^{-j 2 pi nu d / N} for every bin.
std::vector<cplx> frequency_response(const std::vector<cplx>& taps, int num_subcarriers);

ChannelEstimate perfect_channel_estimate(const std::vector<cplx>& taps, int num_subcarriers, std::size_t columns);
/// Co-polar responses, HH on H-assigned points and VV on V-assigned points.
ChannelEstimate perfect_channel_estimate(const DualPolChannelRealization& ch, int num_subcarriers,
                                         std::size_t columns, DpStructure s);

/// Self-term of an FBMC basis function after a carrier offset (fraction of
/// the subcarrier spacing) and a timing offset (samples, late positive).
cplx fbmc_offset_gain(const PrototypeFilter& f, int n, int m, double cfo, long cto);
/// Same for CP-OFDM symbol s.
cplx ofdm_offset_gain(const SystemConfig& cfg, int n, int s, double cfo, long cto);
/// Multiplies an estimate by the offset self-terms.
void apply_offset_gains(ChannelEstimate& est, const PrototypeFilter& f, double cfo, long cto);
void apply_offset_gains(ChannelEstimate& est, const SystemConfig& cfg, double cfo, long cto);

struct Equalized {
  ComplexGrid values;
  std::vector<std::pair<std::size_t, std::size_t>> erasures;  // |gain| < 1e-12, value set to 0
};

Equalized zf_equalize(const ComplexGrid& r, const ChannelEstimate& est);

/// Subtracts the genie cross-polar contribution hVH*xV from rH and hHV*xH
/// from rV, given the transmitted waveforms.
PolarizedWaveform xpol_cancel_ideal(const PolarizedWaveform& r, const DualPolChannelRealization& ch,
                                    const PolarizedWaveform& tx);

}  // namespace dpfbmc

#endif  // DPFBMC_ESTIMATION_HPP

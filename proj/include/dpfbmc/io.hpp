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



#ifndef DPFBMC_IO_HPP
#define DPFBMC_IO_HPP

#include <filesystem>
#include <iosfwd>

#include "dpfbmc/types.hpp"

namespace dpfbmc {

/// Modulator parameters stored next to a waveform.
struct WaveformMeta {
  int num_subcarriers = 0;
  int overlap = 0;  // 0 for CP-OFDM
};

/// Writes `<base>.iq` (interleaved float64 little-endian re, im) and the text
/// sidecar `<base>.meta` holding sample rate, N, K and frame geometry.
void write_waveform(const std::filesystem::path& base, const Waveform& w, const WaveformMeta& meta);

/// Reads a waveform written by write_waveform. Throws IntegrityError when the
/// sample file does not match its sidecar.
Waveform read_waveform(const std::filesystem::path& base, WaveformMeta* meta = nullptr);

/// Writes `<base>.h.iq` and `<base>.v.iq` with one shared `<base>.meta`.
void write_polarized_waveform(const std::filesystem::path& base, const PolarizedWaveform& w, const WaveformMeta& meta);
PolarizedWaveform read_polarized_waveform(const std::filesystem::path& base, WaveformMeta* meta = nullptr);

/// CSV with header `n,m,re,im`, one row per lattice point.
void write_grid_csv(std::ostream& os, const ComplexGrid& g);
void write_grid_csv(std::ostream& os, const RealGrid& g);

}  // namespace dpfbmc

#endif  // DPFBMC_IO_HPP

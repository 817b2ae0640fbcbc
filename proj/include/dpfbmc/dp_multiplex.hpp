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


#ifndef DPFBMC_DP_MULTIPLEX_HPP
#define DPFBMC_DP_MULTIPLEX_HPP

#include <string>
#include <string_view>

#include "dpfbmc/modem.hpp"

namespace dpfbmc {

/// I: time parity (TPDM), II: frequency parity (FPDM), III: checkerboard (TFPDM).
enum class DpStructure { I, II, III };

std::string to_string(DpStructure s);
/// Accepts "I"/"1"/"s1"/"tpdm" and the analogous spellings for II and III.
DpStructure parse_dp_structure(std::string_view name);

/// Polarization carrying lattice point (n, m). Parity is taken on the
/// absolute indices, guards and DC included.
Polarization assigned_polarization(DpStructure s, std::size_t n, std::size_t m);

struct PolarizedOqamGrid {
  OqamGrid h;
  OqamGrid v;
  DpStructure structure = DpStructure::I;
};

PolarizedOqamGrid dp_split(const OqamGrid& a, DpStructure s);

/// Throws IntegrityError when a polarization carries a symbol outside its
/// assigned support.
OqamGrid dp_merge(const PolarizedOqamGrid& p);

PolarizedWaveform dp_modulate(const PolarizedOqamGrid& p, const PrototypeFilter& f, double sample_rate = 1.0);

/// Picks each lattice point from the polarization it is assigned to.
ComplexGrid merge_by_structure(const ComplexGrid& rh, const ComplexGrid& rv, DpStructure s);

struct DpDemodulated {
  ComplexGrid h;       // all inner products on the H branch
  ComplexGrid v;       // all inner products on the V branch
  ComplexGrid merged;  // per-point selection by structure
};

DpDemodulated dp_demodulate(const PolarizedWaveform& rw, const PrototypeFilter& f, DpStructure s);

}  // namespace dpfbmc

#endif  // DPFBMC_DP_MULTIPLEX_HPP

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


#include "dpfbmc/dp_multiplex.hpp"

#include <algorithm>
#include <cctype>

namespace dpfbmc {

std::string to_string(DpStructure s) {
  switch (s) {
    case DpStructure::I: return "I";
    case DpStructure::II: return "II";
    case DpStructure::III: return "III";
  }
  return "?";
}

DpStructure parse_dp_structure(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "i" || s == "1" || s == "s1" || s == "tpdm") return DpStructure::I;
  if (s == "ii" || s == "2" || s == "s2" || s == "fpdm") return DpStructure::II;
  if (s == "iii" || s == "3" || s == "s3" || s == "tfpdm") return DpStructure::III;
  throw ConfigError("unknown DP structure '" + std::string(name) + "'");
}

Polarization assigned_polarization(DpStructure s, std::size_t n, std::size_t m) {
  std::size_t parity = 0;
  switch (s) {
    case DpStructure::I: parity = m; break;
    case DpStructure::II: parity = n; break;
    case DpStructure::III: parity = n + m; break;
  }
  return parity % 2 == 0 ? Polarization::H : Polarization::V;
}

PolarizedOqamGrid dp_split(const OqamGrid& a, DpStructure s) {
  PolarizedOqamGrid p{OqamGrid(a.rows(), a.cols()), OqamGrid(a.rows(), a.cols()), s};
  for (std::size_t n = 0; n < a.rows(); ++n)
    for (std::size_t m = 0; m < a.cols(); ++m) {
      if (assigned_polarization(s, n, m) == Polarization::H)
        p.h(n, m) = a(n, m);
      else
        p.v(n, m) = a(n, m);
    }
  return p;
}

OqamGrid dp_merge(const PolarizedOqamGrid& p) {
  if (!p.h.same_shape(p.v)) throw ShapeError("polarization grids differ in shape");
  OqamGrid a(p.h.rows(), p.h.cols());
  for (std::size_t n = 0; n < a.rows(); ++n)
    for (std::size_t m = 0; m < a.cols(); ++m) {
      const bool on_h = assigned_polarization(p.structure, n, m) == Polarization::H;
      const double own = on_h ? p.h(n, m) : p.v(n, m);
      const double other = on_h ? p.v(n, m) : p.h(n, m);
      if (other != 0.0)
        throw IntegrityError("symbol at (" + std::to_string(n) + ", " + std::to_string(m) +
                             ") lies outside its polarization's support");
      a(n, m) = own;
    }
  return a;
}

PolarizedWaveform dp_modulate(const PolarizedOqamGrid& p, const PrototypeFilter& f, double sample_rate) {
  if (!p.h.same_shape(p.v)) throw ShapeError("polarization grids differ in shape");
  return {fbmc_modulate_fast(p.h, f, sample_rate), fbmc_modulate_fast(p.v, f, sample_rate)};
}

ComplexGrid merge_by_structure(const ComplexGrid& rh, const ComplexGrid& rv, DpStructure s) {
  if (!rh.same_shape(rv)) throw ShapeError("polarization grids differ in shape");
  ComplexGrid r(rh.rows(), rh.cols());
  for (std::size_t n = 0; n < r.rows(); ++n)
    for (std::size_t m = 0; m < r.cols(); ++m)
      r(n, m) = assigned_polarization(s, n, m) == Polarization::H ? rh(n, m) : rv(n, m);
  return r;
}

DpDemodulated dp_demodulate(const PolarizedWaveform& rw, const PrototypeFilter& f, DpStructure s) {
  if (rw.h.size() != rw.v.size()) throw ShapeError("polarization waveforms differ in length");
  DpDemodulated out;
  out.h = fbmc_demodulate(rw.h, f);
  out.v = fbmc_demodulate(rw.v, f);
  out.merged = merge_by_structure(out.h, out.v, s);
  return out;
}

}  // namespace dpfbmc

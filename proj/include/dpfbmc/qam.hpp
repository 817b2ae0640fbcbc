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


#ifndef DPFBMC_QAM_HPP
#define DPFBMC_QAM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "dpfbmc/types.hpp"

namespace dpfbmc {

/// Square Gray-mapped QAM with unit average symbol energy. The first half of
/// each bit group selects the in-phase level, the second half the quadrature
/// level; each axis is an independent Gray-coded PAM.
class QamConstellation {
 public:
  explicit QamConstellation(int order);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_; }
  int bits_per_axis() const { return bits_ / 2; }
  int levels_per_axis() const { return levels_; }
  double scale() const { return scale_; }

  /// PAM amplitude for a Gray-coded axis bit group.
  double axis_level(std::span<const std::uint8_t> bits) const;
  /// Hard decision on one axis; writes bits_per_axis() bits.
  void axis_decide(double x, std::span<std::uint8_t> bits) const;

  cplx map(std::span<const std::uint8_t> bits) const;
  void demap(cplx x, std::span<std::uint8_t> bits) const;

  std::vector<cplx> map_all(std::span<const std::uint8_t> bits) const;

 private:
  int order_;
  int bits_;
  int levels_;
  double scale_;
  std::vector<int> gray_to_index_;
  std::vector<int> index_to_gray_;
};

}  // namespace dpfbmc

#endif  // DPFBMC_QAM_HPP

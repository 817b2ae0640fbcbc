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


#include "dpfbmc/qam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dpfbmc {

QamConstellation::QamConstellation(int order) : order_(order) {
  if (order != 4 && order != 16 && order != 64)
    throw DomainError("QAM order must be 4, 16 or 64, got " + std::to_string(order));
  bits_ = static_cast<int>(std::lround(std::log2(order)));
  levels_ = 1 << (bits_ / 2);
  scale_ = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  gray_to_index_.resize(levels_);
  index_to_gray_.resize(levels_);
  for (int i = 0; i < levels_; ++i) {
    const int g = i ^ (i >> 1);
    index_to_gray_[i] = g;
    gray_to_index_[g] = i;
  }
}

double QamConstellation::axis_level(std::span<const std::uint8_t> bits) const {
  int g = 0;
  for (int b = 0; b < bits_per_axis(); ++b) g = (g << 1) | (bits[b] & 1);
  const int idx = gray_to_index_[g];
  return scale_ * (2.0 * idx - (levels_ - 1));
}

void QamConstellation::axis_decide(double x, std::span<std::uint8_t> bits) const {
  const double pos = (x / scale_ + (levels_ - 1)) / 2.0;
  const int idx = std::clamp(static_cast<int>(std::lround(pos)), 0, levels_ - 1);
  const int g = index_to_gray_[idx];
  const int nb = bits_per_axis();
  for (int b = 0; b < nb; ++b) bits[b] = static_cast<std::uint8_t>((g >> (nb - 1 - b)) & 1);
}

cplx QamConstellation::map(std::span<const std::uint8_t> bits) const {
  const int nb = bits_per_axis();
  return {axis_level(bits.subspan(0, nb)), axis_level(bits.subspan(nb, nb))};
}

void QamConstellation::demap(cplx x, std::span<std::uint8_t> bits) const {
  const int nb = bits_per_axis();
  axis_decide(x.real(), bits.subspan(0, nb));
  axis_decide(x.imag(), bits.subspan(nb, nb));
}

std::vector<cplx> QamConstellation::map_all(std::span<const std::uint8_t> bits) const {
  if (bits.size() % bits_ != 0) throw ShapeError("bit count is not a multiple of bits per symbol");
  std::vector<cplx> out(bits.size() / bits_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = map(bits.subspan(i * bits_, bits_));
  return out;
}

}  // namespace dpfbmc

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


#ifndef DPFBMC_RNG_HPP
#define DPFBMC_RNG_HPP

#include <cstdint>
#include <random>

#include "dpfbmc/types.hpp"

namespace dpfbmc {

using Rng = std::mt19937_64;

/// Independent random streams per frame. Seeds derive from
/// (master seed, frame, role, lane) only, never from which worker runs the
/// frame, so results do not depend on the degree of parallelism.
enum class StreamRole : std::uint64_t {
  Bits = 1,
  Channel = 2,
  NoiseH = 3,
  NoiseV = 4,
  Pilots = 5,
  Payload = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t frame, StreamRole role, std::uint64_t lane = 0);

inline Rng make_rng(std::uint64_t master, std::uint64_t frame, StreamRole role, std::uint64_t lane = 0) {
  return Rng(substream_seed(master, frame, role, lane));
}

/// Circularly symmetric complex Gaussian with E|z|^2 = variance.
cplx complex_normal(Rng& rng, double variance);

}  // namespace dpfbmc

#endif  // DPFBMC_RNG_HPP

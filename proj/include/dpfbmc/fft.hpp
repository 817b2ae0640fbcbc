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


#ifndef DPFBMC_FFT_HPP
#define DPFBMC_FFT_HPP

#include <span>
#include <vector>

#include "dpfbmc/types.hpp"

// Thin wrapper over FFTW. Forward transform is unscaled with e^{-j2πnk/N};
// the inverse carries the 1/N factor. Plans are cached per size and shared
// between threads; execution goes through thread-local aligned buffers.
namespace dpfbmc::fft {

void forward(std::span<const cplx> in, std::span<cplx> out);
void inverse(std::span<const cplx> in, std::span<cplx> out);

std::vector<cplx> forward(std::span<const cplx> in);
std::vector<cplx> inverse(std::span<const cplx> in);

}  // namespace dpfbmc::fft

#endif  // DPFBMC_FFT_HPP

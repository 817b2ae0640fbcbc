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


#include "dpfbmc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace dpfbmc::fft {
namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using AlignedBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

AlignedBuffer make_buffer(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (p == nullptr) throw std::bad_alloc();
  return AlignedBuffer(p);
}

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // planning needs real arrays; aligned scratch gives the same alignment
    // as the thread-local execution buffers
    auto in = make_buffer(n);
    auto out = make_buffer(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.get(), out.get(), sign, FFTW_ESTIMATE);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

struct Workspace {
  AlignedBuffer in;
  AlignedBuffer out;
};

Workspace& workspace(std::size_t n) {
  thread_local std::unordered_map<std::size_t, Workspace> spaces;
  auto it = spaces.find(n);
  if (it == spaces.end()) it = spaces.emplace(n, Workspace{make_buffer(n), make_buffer(n)}).first;
  return it->second;
}

void run(std::span<const cplx> in, std::span<cplx> out, int sign) {
  const std::size_t n = in.size();
  if (out.size() != n) throw ShapeError("fft: input and output sizes differ");
  if (n == 0) return;
  fftw_plan plan = plans().get(n, sign);
  Workspace& ws = workspace(n);
  std::copy(in.begin(), in.end(), reinterpret_cast<cplx*>(ws.in.get()));
  fftw_execute_dft(plan, ws.in.get(), ws.out.get());
  const cplx* res = reinterpret_cast<const cplx*>(ws.out.get());
  std::copy(res, res + n, out.begin());
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, FFTW_FORWARD); }

void inverse(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= scale;
}

std::vector<cplx> forward(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  forward(in, out);
  return out;
}

std::vector<cplx> inverse(std::span<const cplx> in) {
  std::vector<cplx> out(in.size());
  inverse(in, out);
  return out;
}

}  // namespace dpfbmc::fft

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

#ifndef DPFBMC_TYPES_HPP
#define DPFBMC_TYPES_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpfbmc {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Error categories. Callers that only care about "something went wrong"
// can catch dpfbmc::Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedDesign : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct ShapeError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IntegrityError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};

/// Dense row-major matrix. Rows index subcarriers, columns index time
/// instants throughout the library.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T init = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, init) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealGrid = Matrix<double>;
using ComplexGrid = Matrix<cplx>;

enum class Polarization { H, V };

/// Complex baseband sample stream.
///
/// `frame_offsets` lists the first sample of each frame. `head_trim` and
/// `tail_trim` record how many samples were cut from each end of every frame
/// by tail truncation so a receiver can restore the untruncated geometry.
/// `tail_extension` counts samples appended after the last symbol, such as
/// the trailing window ramp of WOLA.
struct Waveform {
  std::vector<cplx> samples;
  double sample_rate = 0.0;
  std::vector<std::size_t> frame_offsets{0};
  std::size_t head_trim = 0;
  std::size_t tail_trim = 0;
  std::size_t tail_extension = 0;

  std::size_t size() const { return samples.size(); }
  double energy() const;
  double mean_power() const;
};

struct PolarizedWaveform {
  Waveform h;
  Waveform v;

  double energy() const { return h.energy() + v.energy(); }
};

/// j^(k) for integer k, exact.
inline cplx j_power(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace dpfbmc

#endif  // DPFBMC_TYPES_HPP

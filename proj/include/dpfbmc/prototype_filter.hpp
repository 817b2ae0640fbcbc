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


#ifndef DPFBMC_PROTOTYPE_FILTER_HPP
#define DPFBMC_PROTOTYPE_FILTER_HPP

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dpfbmc/types.hpp"

namespace dpfbmc {

enum class FilterKind { SRRC, PHYDYAS, IOTA };

std::string to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);

/// Discrete prototype pulse of length K*N, unit energy, even-symmetric about
/// (L-1)/2. Sample period is one sample; N samples span one symbol period T.
struct PrototypeFilter {
  FilterKind kind = FilterKind::SRRC;
  int overlap = 4;           // K
  int num_subcarriers = 0;   // N
  double rolloff = 0.0;      // SRRC only
  std::vector<double> coeffs;

  std::size_t length() const { return coeffs.size(); }
  double energy() const;
  std::string describe() const;
};

/// Builds a prototype filter. SRRC roll-off defaults to 2/K.
/// Throws UnsupportedDesign for K/kind combinations without a construction
/// and DomainError for a roll-off outside (0, 1].
PrototypeFilter design_filter(FilterKind kind, int overlap, int num_subcarriers,
                              std::optional<double> rolloff = std::nullopt);

/// Continuous square-root raised cosine with T = 1, not normalized.
/// Removable singularities at t = 0 and |t| = 1/(4 alpha) use their limits.
double srrc_value(double t, double alpha);

std::vector<double> srrc_impulse(int overlap, int num_subcarriers, double alpha);

/// Frequency-sampling synthesis from the published PHYDYAS coefficients
/// (K = 2, 3, 4).
std::vector<double> phydyas_impulse(int overlap, int num_subcarriers);

/// Isotropic orthogonal transform algorithm pulse: the unit Gaussian
/// 2^{1/4} exp(-pi t^2) orthogonalized on the (T/2, 1/T) lattice in both
/// time and frequency, truncated to K*N samples. Requires K >= 4.
std::vector<double> iota_impulse(int overlap, int num_subcarriers);

/// CSV with header `k,coeff`, 17 significant digits.
void write_filter_csv(std::ostream& os, const PrototypeFilter& filter);

}  // namespace dpfbmc

#endif  // DPFBMC_PROTOTYPE_FILTER_HPP

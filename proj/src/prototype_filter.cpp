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


#include "dpfbmc/prototype_filter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace dpfbmc {
namespace {

constexpr std::array<int, 6> kSupportedOverlap{2, 3, 4, 6, 8, 16};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void normalize_energy(std::vector<double>& h) {
  const double e = std::inner_product(h.begin(), h.end(), h.begin(), 0.0);
  const double scale = 1.0 / std::sqrt(e);
  for (auto& v : h) v *= scale;
}

// Enforce exact even symmetry; the constructions are symmetric up to rounding.
void symmetrize(std::vector<double>& h) {
  const std::size_t L = h.size();
  for (std::size_t k = 0; k < L / 2; ++k) {
    const double avg = 0.5 * (h[k] + h[L - 1 - k]);
    h[k] = avg;
    h[L - 1 - k] = avg;
  }
}

// Offset of sample k from the pulse center, in samples.
double centered(std::size_t k, std::size_t L) {
  return static_cast<double>(k) - 0.5 * static_cast<double>(L - 1);
}

}  // namespace

std::string to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::SRRC: return "srrc";
    case FilterKind::PHYDYAS: return "phydyas";
    case FilterKind::IOTA: return "iota";
  }
  return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "srrc") return FilterKind::SRRC;
  if (s == "phydyas") return FilterKind::PHYDYAS;
  if (s == "iota") return FilterKind::IOTA;
  throw ConfigError("unknown filter kind '" + std::string(name) + "'");
}

double PrototypeFilter::energy() const {
  return std::inner_product(coeffs.begin(), coeffs.end(), coeffs.begin(), 0.0);
}

std::string PrototypeFilter::describe() const {
  std::ostringstream os;
  os << to_string(kind) << " K=" << overlap << " N=" << num_subcarriers;
  if (kind == FilterKind::SRRC) os << " alpha=" << std::setprecision(6) << rolloff;
  return os.str();
}

double srrc_value(double t, double alpha) {
  constexpr double eps = 1e-10;
  if (std::abs(t) < eps) return 1.0 - alpha + 4.0 * alpha / pi;
  const double edge = 1.0 / (4.0 * alpha);
  if (std::abs(std::abs(t) - edge) < eps) {
    const double a = pi / (4.0 * alpha);
    return alpha / std::sqrt(2.0) *
           ((1.0 + 2.0 / pi) * std::sin(a) + (1.0 - 2.0 / pi) * std::cos(a));
  }
  const double num = std::sin(pi * t * (1.0 - alpha)) + 4.0 * alpha * t * std::cos(pi * t * (1.0 + alpha));
  const double den = pi * t * (1.0 - (4.0 * alpha * t) * (4.0 * alpha * t));
  return num / den;
}

std::vector<double> srrc_impulse(int overlap, int num_subcarriers, double alpha) {
  const std::size_t L = static_cast<std::size_t>(overlap) * num_subcarriers;
  std::vector<double> h(L);
  for (std::size_t k = 0; k < L; ++k) h[k] = srrc_value(centered(k, L) / num_subcarriers, alpha);
  symmetrize(h);
  normalize_energy(h);
  return h;
}

std::vector<double> phydyas_impulse(int overlap, int num_subcarriers) {
  std::vector<double> H;
  switch (overlap) {
    case 2: H = {1.0, std::sqrt(2.0) / 2.0}; break;
    case 3: H = {1.0, 0.911438, 0.411438}; break;
    case 4: H = {1.0, 0.971960, std::sqrt(2.0) / 2.0, 0.235147}; break;
    case 6: H = {1.0, 0.99722723, 0.94136732, std::sqrt(2.0) / 2.0, 0.33648588, 0.05818906}; break;
    case 8:
      H = {1.0, 0.99988389, 0.99315513, 0.92708081, std::sqrt(2.0) / 2.0, 0.34329174, 0.11680273, 0.02317627};
      break;
    default:
      throw UnsupportedDesign("unsupported design: PHYDYAS coefficients are published for K = 2, 3, 4, 6, 8 only");
  }
  const std::size_t L = static_cast<std::size_t>(overlap) * num_subcarriers;
  std::vector<double> h(L);
  for (std::size_t k = 0; k < L; ++k) {
    const double u = centered(k, L) / static_cast<double>(L);
    double v = H[0];
    for (std::size_t i = 1; i < H.size(); ++i) v += 2.0 * H[i] * std::cos(2.0 * pi * static_cast<double>(i) * u);
    h[k] = v;
  }
  symmetrize(h);
  normalize_energy(h);
  return h;
}

std::vector<double> iota_impulse(int overlap, int num_subcarriers) {
  if (overlap < 4) throw UnsupportedDesign("unsupported design: IOTA needs K >= 4");
  // Lattice in natural Gaussian units: tau0 = nu0 = 1/sqrt(2), so T = sqrt(2).
  const double tau0 = 1.0 / std::sqrt(2.0);
  const double nu0 = tau0;
  const double dt = 2.0 * tau0 / num_subcarriers;

  auto gaussian = [](double f) { return std::pow(2.0, 0.25) * std::exp(-pi * f * f); };

  // Frequency-orthogonalized Gaussian spectrum on a quadrature grid.
  constexpr double f_max = 6.0;
  constexpr double df = 2e-3;
  const auto nf = static_cast<std::size_t>(f_max / df) + 1;
  std::vector<double> weight(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const double f = static_cast<double>(i) * df;
    double s = 0.0;
    for (int k = -16; k <= 16; ++k) s += std::pow(gaussian(f - k * nu0), 2);
    weight[i] = gaussian(f) / std::sqrt(nu0 * s) * df;
  }
  weight.front() *= 0.5;
  weight.back() *= 0.5;

  // Inverse transform (real, even) on a grid with margins so that the time
  // orthogonalization sees the neighbours of every kept sample.
  const std::size_t L = static_cast<std::size_t>(overlap) * num_subcarriers;
  const std::size_t margin = 6 * static_cast<std::size_t>(num_subcarriers);
  const std::size_t ext = L + 2 * margin;
  std::vector<double> x(ext);
  for (std::size_t k = 0; k < (ext + 1) / 2; ++k) {
    const double t = centered(k, ext) * dt;
    // cos(2 pi f_i t) by the Chebyshev recurrence
    const double c1 = std::cos(2.0 * pi * df * t);
    double prev = c1;  // cos(-theta)
    double cur = 1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
      acc += weight[i] * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    x[k] = 2.0 * acc;
    x[ext - 1 - k] = x[k];
  }

  const std::size_t half = static_cast<std::size_t>(num_subcarriers) / 2;
  std::vector<double> h(L);
  for (std::size_t k = 0; k < L; ++k) {
    const std::size_t idx = margin + k;
    double s = 0.0;
    for (std::size_t j = idx % half; j < ext; j += half) s += x[j] * x[j];
    h[k] = x[idx] / std::sqrt(tau0 * s);
  }
  symmetrize(h);
  normalize_energy(h);
  return h;
}

PrototypeFilter design_filter(FilterKind kind, int overlap, int num_subcarriers, std::optional<double> rolloff) {
  if (std::find(kSupportedOverlap.begin(), kSupportedOverlap.end(), overlap) == kSupportedOverlap.end())
    throw UnsupportedDesign("unsupported design: overlap factor K=" + std::to_string(overlap));
  if (num_subcarriers < 16 || !is_power_of_two(num_subcarriers))
    throw DomainError("number of subcarriers must be a power of two >= 16");
  if (rolloff && kind != FilterKind::SRRC) throw DomainError("roll-off applies to SRRC only");

  PrototypeFilter f;
  f.kind = kind;
  f.overlap = overlap;
  f.num_subcarriers = num_subcarriers;
  switch (kind) {
    case FilterKind::SRRC: {
      const double alpha = rolloff.value_or(2.0 / overlap);
      if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("SRRC roll-off must lie in (0, 1]");
      f.rolloff = alpha;
      f.coeffs = srrc_impulse(overlap, num_subcarriers, alpha);
      break;
    }
    case FilterKind::PHYDYAS: f.coeffs = phydyas_impulse(overlap, num_subcarriers); break;
    case FilterKind::IOTA: f.coeffs = iota_impulse(overlap, num_subcarriers); break;
  }
  return f;
}

void write_filter_csv(std::ostream& os, const PrototypeFilter& filter) {
  os << "k,coeff\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < filter.coeffs.size(); ++k) os << k << ',' << filter.coeffs[k] << '\n';
}

}  // namespace dpfbmc

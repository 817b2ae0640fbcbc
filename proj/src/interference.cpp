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


#include "dpfbmc/interference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace dpfbmc {

cplx LocalizationTable::at(int dn, int dm) const {
  if (!contains(dn, dm)) throw DomainError("offset outside localization table");
  return entries(static_cast<std::size_t>(dn + delta_n), static_cast<std::size_t>(dm + delta_m));
}

LocalizationTable localization_table(const PrototypeFilter& f, int delta_n, int delta_m) {
  if (delta_n < 0 || delta_m < 0 || delta_n > 4 || delta_m > 8)
    throw DomainError("neighborhood exceeds the supported box (delta_n <= 4, delta_m <= 8)");
  const int N = f.num_subcarriers;
  if (4 * delta_n >= N) throw DomainError("neighborhood too wide for the subcarrier count");
  const int n0 = N / 4;
  const int m0 = delta_m + delta_m % 2;
  LocalizationTable t;
  t.delta_n = delta_n;
  t.delta_m = delta_m;
  t.filter = f.describe();
  t.entries = ComplexGrid(2 * delta_n + 1, 2 * delta_m + 1);
  const auto ref = basis_function(f, n0, m0);
  const double inv_energy = 1.0 / f.energy();
  for (int dn = -delta_n; dn <= delta_n; ++dn)
    for (int dm = -delta_m; dm <= delta_m; ++dm) {
      const auto q = basis_function(f, n0 + dn, m0 + dm);
      t.entries(dn + delta_n, dm + delta_m) = inner_product(q, ref) * inv_energy;
    }
  return t;
}

std::optional<cplx> localization_coefficient(const LocalizationTable& t, int N, int n, int m, int n0, int m0) {
  // circular bin difference in [-N/2, N/2)
  int d = ((n - n0) % N + N) % N;
  if (d >= N / 2) d -= N;
  const int dm = m - m0;
  if (!t.contains(d, dm)) return std::nullopt;
  cplx q = t.at(d, dm);
  // the table was taken at an even m'; odd m' flips odd frequency offsets
  if (((d % 2) != 0) && (m0 % 2 != 0)) q = -q;
  // crossing the Nyquist edge costs e^{j 2 pi (L-1)/2} = -1
  const int dnu = signed_frequency(n, N) - signed_frequency(n0, N);
  if (dnu != d) q = -q;
  return q;
}

bool Neighborhood::contains(int dn, int dm) const {
  return std::find(offsets.begin(), offsets.end(), std::pair{dn, dm}) != offsets.end();
}

Neighborhood box_neighborhood(int delta_n, int delta_m) {
  Neighborhood h;
  for (int dn = -delta_n; dn <= delta_n; ++dn)
    for (int dm = -delta_m; dm <= delta_m; ++dm)
      if (dn != 0 || dm != 0) h.offsets.emplace_back(dn, dm);
  return h;
}

std::pair<Neighborhood, Neighborhood> structure_neighborhoods(DpStructure s, int delta_n, int delta_m) {
  Neighborhood co, cross;
  cross.cross_pol = true;
  for (const auto& [dn, dm] : box_neighborhood(delta_n, delta_m).offsets) {
    // assignment depends only on index parity, so the offset parity decides
    const auto a = assigned_polarization(s, 0, 0);
    const auto b = assigned_polarization(s, static_cast<std::size_t>(std::abs(dn)), static_cast<std::size_t>(std::abs(dm)));
    (a == b ? co : cross).offsets.emplace_back(dn, dm);
  }
  return {co, cross};
}

namespace {

cplx sum_hood(const OqamGrid& a, const LocalizationTable& t, int n0, int m0, const Neighborhood& hood) {
  const int N = static_cast<int>(a.rows());
  const int M = static_cast<int>(a.cols());
  if (n0 < 0 || n0 >= N) throw DomainError("subcarrier index out of range");
  cplx s = 0.0;
  for (const auto& [dn, dm] : hood.offsets) {
    const int m = m0 + dm;
    if (m < 0 || m >= M) throw DomainError("neighborhood of the point leaves the symbol range");
    const int n = ((n0 + dn) % N + N) % N;
    const double v = a(n, m);
    if (v == 0.0) continue;
    const auto q = localization_coefficient(t, N, n, m, n0, m0);
    if (!q) throw DomainError("neighborhood offset outside the localization table");
    s += v * *q;
  }
  return s;
}

}  // namespace

cplx intrinsic_interference(const OqamGrid& a, const LocalizationTable& t, int n0, int m0, const Neighborhood& hood) {
  return sum_hood(a, t, n0, m0, hood);
}

cplx intrinsic_interference(const PolarizedOqamGrid& p, Polarization pol, const LocalizationTable& t, int n0, int m0,
                            const Neighborhood& hood) {
  return sum_hood(pol == Polarization::H ? p.h : p.v, t, n0, m0, hood);
}

// ---- rendering -----------------------------------------------------------

namespace {

std::string offset_label(const char* var, int d) {
  if (d == 0) return std::string(var) + "=" + var + "'";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s=%s'%+d", var, var, d);
  return buf;
}

std::string format_entry(cplx z) {
  const double tiny = 5e-5;
  const double re = std::abs(z.real()) < tiny ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < tiny ? 0.0 : z.imag();
  char buf[64];
  if (re == 0.0 && im == 0.0) return "0";
  if (im == 0.0) {
    std::snprintf(buf, sizeof buf, "%.4f", re);
  } else if (re == 0.0) {
    std::snprintf(buf, sizeof buf, "%.4fj", im);
  } else {
    std::snprintf(buf, sizeof buf, "%.4f%+.4fj", re, im);
  }
  return buf;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

template <typename Cell>
std::string render_grid(int delta_n, int delta_m, TableFormat format, Cell cell) {
  std::ostringstream os;
  const char* sep = format == TableFormat::Csv ? "," : " | ";
  if (format == TableFormat::Markdown) os << "| ";
  os << "(n m)";
  for (int dm = -delta_m; dm <= delta_m; ++dm) os << sep << offset_label("m", dm);
  if (format == TableFormat::Markdown) {
    os << " |\n|";
    for (int i = 0; i <= 2 * delta_m + 1; ++i) os << "---|";
  }
  os << '\n';
  for (int dn = -delta_n; dn <= delta_n; ++dn) {
    if (format == TableFormat::Markdown) os << "| ";
    os << offset_label("n", dn);
    for (int dm = -delta_m; dm <= delta_m; ++dm) os << sep << cell(dn, dm);
    if (format == TableFormat::Markdown) os << " |";
    os << '\n';
  }
  return os.str();
}

}  // namespace

std::string render_table(const LocalizationTable& t, TableFormat format) {
  return render_grid(t.delta_n, t.delta_m, format, [&](int dn, int dm) { return format_entry(t.at(dn, dm)); });
}

// ---- published reference values -------------------------------------------

namespace {

LocalizationTable imaginary_table(const std::string& filter, const double (&im)[5][7]) {
  LocalizationTable t;
  t.delta_n = 2;
  t.delta_m = 3;
  t.filter = filter;
  t.entries = ComplexGrid(5, 7);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 7; ++j) t.entries(i, j) = {0.0, im[i][j]};
  t.entries(2, 3) = 1.0;
  return t;
}

std::vector<PublishedTable> make_published() {
  const double iota[5][7] = {
      {0.0194, 0, -0.0413, 0, 0.0413, 0, 0.0194},
      {-0.0116, -0.0413, -0.2327, -0.4378, -0.2327, -0.0413, -0.0116},
      {0.0194, 0, -0.4380, 0, 0.4380, 0, 0.0194},
      {-0.0116, 0.0413, -0.2327, 0.4378, -0.2327, 0.0413, -0.0116},
      {0, 0, -0.0413, 0, 0.0413, 0, 0},
  };
  const double phydyas[5][7] = {
      {0.064, 0, 0, 0, 0, 0, 0.064},
      {-0.044, -0.125, -0.205, -0.239, -0.205, -0.125, -0.044},
      {0.064, 0, -0.564, 0, 0.564, 0, 0.064},
      {-0.044, 0.125, -0.205, 0.239, -0.205, 0.125, -0.044},
      {0, 0, 0, 0, 0, 0, 0},
  };
  const double srrc4[5][7] = {
      {0.1122, 0, 0, 0, 0, 0, 0.1122},
      {-0.095, -0.1263, -0.15, -0.1589, -0.15, -0.1260, -0.095},
      {0.1122, 0, -0.6015, 0, 0.6015, 0, 0.1122},
      {-0.095, 0.1263, -0.15, 0.1589, -0.15, 0.1260, -0.095},
      {0, 0, 0, 0, 0, 0, 0},
  };
  const double srrc8[5][7] = {
      {0.1857, 0, 0, 0, 0, 0, 0.1857},
      {-0.0646, -0.0695, -0.0725, -0.0735, -0.072, -0.0694, -0.0646},
      {0.1857, 0, -0.6278, 0, 0.627, 0, 0.1857},
      {-0.0646, 0.0695, -0.0725, 0.0735, -0.072, 0.0694, -0.0646},
      {0, 0, 0, 0, 0, 0, 0},
  };
  return {
      {"IOTA K=4", FilterKind::IOTA, 4, 0.005, imaginary_table("iota K=4", iota)},
      {"PHYDYAS K=4", FilterKind::PHYDYAS, 4, 0.002, imaginary_table("phydyas K=4", phydyas)},
      {"SRRC K=4", FilterKind::SRRC, 4, 0.002, imaginary_table("srrc K=4", srrc4)},
      {"SRRC K=8", FilterKind::SRRC, 8, 0.002, imaginary_table("srrc K=8", srrc8)},
  };
}

}  // namespace

const std::vector<PublishedTable>& published_tables() {
  static const std::vector<PublishedTable> tables = make_published();
  return tables;
}

TableComparison compare_with_published(const PublishedTable& ref, int num_subcarriers) {
  TableComparison c;
  c.reference = &ref;
  const auto f = design_filter(ref.kind, ref.overlap, num_subcarriers);
  c.computed = localization_table(f, ref.values.delta_n, ref.values.delta_m);
  c.abs_diff = RealGrid(c.computed.entries.rows(), c.computed.entries.cols());
  for (std::size_t i = 0; i < c.abs_diff.rows(); ++i)
    for (std::size_t j = 0; j < c.abs_diff.cols(); ++j) {
      const cplx want = ref.values.entries(i, j);
      const double d = std::abs(c.computed.entries(i, j) - want);
      c.abs_diff(i, j) = d;
      c.max_diff = std::max(c.max_diff, d);
      const double allowed = std::abs(want) == 0.0 ? std::min(ref.tolerance, 1e-3) : ref.tolerance;
      if (d > allowed) ++c.mismatches;
    }
  return c;
}

std::string render_diff(const TableComparison& c, TableFormat format) {
  const int dn = c.computed.delta_n;
  const int dm = c.computed.delta_m;
  return render_grid(dn, dm, format, [&](int i, int j) { return format_real(c.abs_diff(i + dn, j + dm)); });
}

}  // namespace dpfbmc

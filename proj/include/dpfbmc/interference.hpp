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


#ifndef DPFBMC_INTERFERENCE_HPP
#define DPFBMC_INTERFERENCE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpfbmc/dp_multiplex.hpp"
#include "dpfbmc/prototype_filter.hpp"

namespace dpfbmc {

/// Q_{n,m}^{n',m'} = <Q_{n,m}, Q_{n',m'}> over a box of offsets. Entry
/// (i, j) holds n - n' = i - delta_n, m - m' = j - delta_m, evaluated at an
/// interior reference point with even n' and even m'.
struct LocalizationTable {
  int delta_n = 0;
  int delta_m = 0;
  ComplexGrid entries;
  std::string filter;

  cplx at(int dn, int dm) const;
  bool contains(int dn, int dm) const { return std::abs(dn) <= delta_n && std::abs(dm) <= delta_m; }
};

LocalizationTable localization_table(const PrototypeFilter& f, int delta_n, int delta_m);

/// Q_{n,m}^{n0,m0} for arbitrary lattice points, derived from the table.
/// Handles the parity of m0 and the spectral wrap between bins N/2 - 1 and
/// N/2. Returns nullopt when the offset is outside the table.
std::optional<cplx> localization_coefficient(const LocalizationTable& t, int num_subcarriers, int n, int m, int n0,
                                             int m0);

struct Neighborhood {
  std::vector<std::pair<int, int>> offsets;  // (n - n', m - m')
  bool cross_pol = false;

  bool contains(int dn, int dm) const;
};

/// Every offset in the box except (0, 0).
Neighborhood box_neighborhood(int delta_n, int delta_m);

/// Offsets landing on the same polarization as the reference point and on
/// the opposite one, for a given structure.
std::pair<Neighborhood, Neighborhood> structure_neighborhoods(DpStructure s, int delta_n, int delta_m);

/// sum over the neighborhood of a_{n,m} Q_{n,m}^{n0,m0}. Subcarriers wrap
/// modulo N; the symbol range must contain the whole neighborhood.
cplx intrinsic_interference(const OqamGrid& a, const LocalizationTable& t, int n0, int m0, const Neighborhood& hood);

/// Same, reading the symbols of one polarization.
cplx intrinsic_interference(const PolarizedOqamGrid& p, Polarization pol, const LocalizationTable& t, int n0, int m0,
                            const Neighborhood& hood);

enum class TableFormat { Csv, Markdown };

/// Rows n = n' - delta_n .. n' + delta_n, columns m = m' - delta_m .. m' + delta_m.
std::string render_table(const LocalizationTable& t, TableFormat format = TableFormat::Csv);

/// Reference tables for IOTA K=4, PHYDYAS K=4, SRRC K=4 and SRRC K=8
/// (delta_n = 2, delta_m = 3), as published.
struct PublishedTable {
  std::string name;
  FilterKind kind;
  int overlap;
  double tolerance;
  LocalizationTable values;
};

const std::vector<PublishedTable>& published_tables();

struct TableComparison {
  const PublishedTable* reference = nullptr;
  LocalizationTable computed;
  RealGrid abs_diff;
  double max_diff = 0.0;
  int mismatches = 0;  // entries outside tolerance
};

TableComparison compare_with_published(const PublishedTable& ref, int num_subcarriers);

std::string render_diff(const TableComparison& c, TableFormat format = TableFormat::Csv);

}  // namespace dpfbmc

#endif  // DPFBMC_INTERFERENCE_HPP

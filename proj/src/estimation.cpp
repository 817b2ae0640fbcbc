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


#include "dpfbmc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dpfbmc/fft.hpp"
#include "json.hpp"

namespace dpfbmc {

namespace {

void fill_pilot_values(PilotLayout& layout) {
  Rng rng(layout.seed);
  std::uniform_int_distribution<int> bit(0, 1);
  const std::size_t n = layout.count();
  layout.ofdm_values.resize(n);
  layout.fbmc_values.resize(n);
  layout.fbmc_values2.resize(n);
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int re = bit(rng);
    const int im = bit(rng);
    layout.ofdm_values[i] = {re ? s : -s, im ? s : -s};
    layout.fbmc_values[i] = bit(rng) ? 1.0 : -1.0;
    layout.fbmc_values2[i] = bit(rng) ? 1.0 : -1.0;
  }
}

int bin_of(int nu, int N) { return ((nu % N) + N) % N; }

}  // namespace

PilotLayout make_pilot_layout(const SystemConfig& cfg, std::size_t qam_instants, int count, int period, int first,
                              std::uint64_t seed) {
  const auto mask = cfg.active_mask();
  const int N = cfg.num_subcarriers;
  PilotLayout layout;
  layout.num_subcarriers = N;
  layout.period = period;
  layout.seed = seed;
  if (count <= 0) return layout;
  if (period <= 0 || first < 0) throw ConfigError("pilot period must be positive and first instant nonnegative");
  const int span_bins = N - cfg.guard_left - cfg.guard_right;
  const int spacing = span_bins / count;
  if (spacing < 1) throw ConfigError("too many pilot subcarriers for the active band");
  const int span = (count - 1) * spacing;
  int start = -(span + 1) / 2;
  bool hits_dc = false;
  for (int i = 0; i < count; ++i) hits_dc = hits_dc || (cfg.dc_null && start + i * spacing == 0);
  if (hits_dc) --start;
  for (int i = 0; i < count; ++i) {
    const int n = bin_of(start + i * spacing, N);
    if (!mask[n]) throw ConfigError("pilot subcarrier falls on a guard or DC bin");
    layout.subcarriers.push_back(n);
  }
  for (std::size_t t = static_cast<std::size_t>(first); t < qam_instants; t += static_cast<std::size_t>(period))
    layout.instants.push_back(static_cast<int>(t));
  fill_pilot_values(layout);
  return layout;
}

std::string pilot_layout_to_json(const PilotLayout& layout) {
  nlohmann::json j;
  j["num_subcarriers"] = layout.num_subcarriers;
  j["subcarriers"] = layout.subcarriers;
  j["instants"] = layout.instants;
  j["period"] = layout.period;
  j["seed"] = layout.seed;
  j["aux_offset"] = {layout.aux_offset.first, layout.aux_offset.second};
  j["cancel_box"] = {layout.cancel_dn, layout.cancel_dm};
  auto& ov = j["ofdm_values"] = nlohmann::json::array();
  for (const auto& v : layout.ofdm_values) ov.push_back({v.real(), v.imag()});
  j["fbmc_values"] = layout.fbmc_values;
  j["fbmc_values2"] = layout.fbmc_values2;
  return j.dump(2);
}

PilotLayout pilot_layout_from_json(const std::string& text) {
  PilotLayout layout;
  try {
    const auto j = nlohmann::json::parse(text);
    layout.num_subcarriers = j.at("num_subcarriers").get<int>();
    layout.subcarriers = j.at("subcarriers").get<std::vector<int>>();
    layout.instants = j.at("instants").get<std::vector<int>>();
    layout.period = j.at("period").get<int>();
    layout.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("aux_offset")) {
      const auto a = j["aux_offset"].get<std::vector<int>>();
      if (a.size() != 2) throw ConfigError("aux_offset needs two entries");
      layout.aux_offset = {a[0], a[1]};
    }
    if (j.contains("cancel_box")) {
      const auto c = j["cancel_box"].get<std::vector<int>>();
      if (c.size() != 2) throw ConfigError("cancel_box needs two entries");
      layout.cancel_dn = c[0];
      layout.cancel_dm = c[1];
    }
    fill_pilot_values(layout);
    if (j.contains("fbmc_values") && j["fbmc_values"].get<std::vector<double>>() != layout.fbmc_values)
      throw IntegrityError("pilot values do not match the recorded seed");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed pilot layout: ") + e.what());
  }
  for (int n : layout.subcarriers)
    if (n < 0 || n >= layout.num_subcarriers) throw ConfigError("pilot subcarrier out of range");
  return layout;
}

Matrix<std::uint8_t> data_slots(const PilotLayout& layout, const std::vector<bool>& mask, std::size_t qam_instants) {
  Matrix<std::uint8_t> d(mask.size(), qam_instants, 0);
  for (std::size_t n = 0; n < mask.size(); ++n)
    if (mask[n])
      for (std::size_t t = 0; t < qam_instants; ++t) d(n, t) = 1;
  for (int t : layout.instants)
    for (int n : layout.subcarriers)
      if (static_cast<std::size_t>(t) < qam_instants) d(n, t) = 0;
  return d;
}

std::vector<PilotSlot> fbmc_pilot_slots(const PilotLayout& layout, std::optional<DpStructure> s) {
  std::vector<PilotSlot> slots;
  const int N = layout.num_subcarriers;
  const std::size_t P = layout.subcarriers.size();
  for (std::size_t g = 0; g < layout.instants.size(); ++g)
    for (std::size_t i = 0; i < P; ++i) {
      PilotSlot p;
      p.n = layout.subcarriers[i];
      p.m = 2 * layout.instants[g];
      p.group = static_cast<int>(g);
      p.value = layout.fbmc_values[g * P + i];
      PilotSlot a;
      a.n = bin_of(p.n + layout.aux_offset.first, N);
      a.m = p.m + layout.aux_offset.second;
      a.group = p.group;
      a.aux = true;
      if (s) {
        p.pol = assigned_polarization(*s, p.n, p.m);
        a.pol = assigned_polarization(*s, a.n, a.m);
        if (a.pol != p.pol) {
          a.aux = false;
          a.value = layout.fbmc_values2[g * P + i];
        }
      }
      slots.push_back(p);
      slots.push_back(a);
    }
  return slots;
}

void place_pilots(QamGrid& g, const PilotLayout& layout, const std::vector<bool>& mask) {
  const std::size_t P = layout.subcarriers.size();
  for (std::size_t k = 0; k < layout.instants.size(); ++k)
    for (std::size_t i = 0; i < P; ++i) {
      const auto n = static_cast<std::size_t>(layout.subcarriers[i]);
      const auto t = static_cast<std::size_t>(layout.instants[k]);
      if (n >= g.rows() || t >= g.cols()) throw ShapeError("pilot outside the grid");
      if (!mask[n]) throw ShapeError("pilot on a masked subcarrier");
      g(n, t) = layout.ofdm_values[k * P + i];
    }
}

void place_pilots(OqamGrid& a, const PilotLayout& layout, const std::vector<bool>& mask,
                  std::optional<DpStructure> s) {
  for (const auto& p : fbmc_pilot_slots(layout, s)) {
    if (static_cast<std::size_t>(p.n) >= a.rows() || p.m < 0 || static_cast<std::size_t>(p.m) >= a.cols())
      throw ShapeError("pilot outside the grid");
    if (!mask[p.n]) throw ShapeError("pilot on a masked subcarrier");
    a(p.n, p.m) = p.aux ? 0.0 : p.value;
  }
}

namespace {

double aux_value(const OqamGrid& a, const LocalizationTable& t, const PilotSlot& pilot, const PilotSlot& aux,
                 const Neighborhood& hood) {
  const int N = static_cast<int>(a.rows());
  const cplx interference = intrinsic_interference(a, t, pilot.n, pilot.m, hood);
  const auto q = localization_coefficient(t, N, aux.n, aux.m, pilot.n, pilot.m);
  if (!q || std::abs(q->imag()) < 1e-9)
    throw DomainError("uncancellable auxiliary position: zero localization coefficient");
  return -interference.imag() / q->imag();
}

Neighborhood cancel_hood(const PilotLayout& layout, const LocalizationTable& t, std::optional<DpStructure> s) {
  if (layout.cancel_dn > t.delta_n || layout.cancel_dm > t.delta_m)
    throw DomainError("localization table smaller than the cancellation box");
  Neighborhood hood = s ? structure_neighborhoods(*s, layout.cancel_dn, layout.cancel_dm).first
                        : box_neighborhood(layout.cancel_dn, layout.cancel_dm);
  std::erase(hood.offsets, layout.aux_offset);
  return hood;
}

}  // namespace

void insert_auxiliary_pilots(OqamGrid& a, const PilotLayout& layout, const LocalizationTable& t) {
  const auto hood = cancel_hood(layout, t, std::nullopt);
  const auto slots = fbmc_pilot_slots(layout);
  for (std::size_t k = 0; k + 1 < slots.size(); k += 2) a(slots[k + 1].n, slots[k + 1].m) = aux_value(a, t, slots[k], slots[k + 1], hood);
}

void insert_auxiliary_pilots(PolarizedOqamGrid& p, const PilotLayout& layout, const LocalizationTable& t) {
  const auto hood = cancel_hood(layout, t, p.structure);
  const auto slots = fbmc_pilot_slots(layout, p.structure);
  for (std::size_t k = 0; k + 1 < slots.size(); k += 2) {
    if (!slots[k + 1].aux) continue;
    auto& grid = slots[k].pol == Polarization::H ? p.h : p.v;
    grid(slots[k + 1].n, slots[k + 1].m) = aux_value(grid, t, slots[k], slots[k + 1], hood);
  }
}

// ---- LS estimation -------------------------------------------------------

std::vector<cplx> dft_interpolate(const std::vector<int>& nus, const std::vector<cplx>& gains, int N) {
  if (nus.size() != gains.size() || nus.empty()) throw ShapeError("pilot frequencies and gains differ in size");
  const std::size_t P = nus.size();
  std::vector<cplx> out(N);
  if (P == 1) {
    std::fill(out.begin(), out.end(), gains[0]);
    return out;
  }
  const int D = nus[1] - nus[0];
  bool uniform = D > 0;
  for (std::size_t i = 1; i < P && uniform; ++i) uniform = nus[i] - nus[i - 1] == D;

  // fine grid over [nus.front(), nus.back()]
  const std::size_t span = static_cast<std::size_t>(nus.back() - nus.front()) + 1;
  std::vector<cplx> fine(span);
  if (uniform) {
    const std::size_t Q = P * static_cast<std::size_t>(D);
    const auto taps = fft::inverse(gains);
    std::vector<cplx> padded(Q, cplx{});
    const std::size_t half = P / 2;
    for (std::size_t i = 0; i < (P + 1) / 2; ++i) padded[i] = taps[i];
    for (std::size_t i = (P + 1) / 2; i < P; ++i) padded[Q - P + i] = taps[i];
    if (P % 2 == 0) {
      // split the Nyquist term so real pilot patterns stay real
      padded[half] = 0.5 * taps[half];
      padded[Q - half] = 0.5 * taps[half];
    }
    const auto dense = fft::forward(padded);
    for (std::size_t j = 0; j < span; ++j) fine[j] = dense[j];
  } else {
    std::size_t i = 0;
    for (std::size_t j = 0; j < span; ++j) {
      const int nu = nus.front() + static_cast<int>(j);
      while (i + 1 < P && nus[i + 1] < nu) ++i;
      if (nu <= nus[i]) {
        fine[j] = gains[i];
      } else {
        const double w = static_cast<double>(nu - nus[i]) / (nus[i + 1] - nus[i]);
        fine[j] = (1.0 - w) * gains[i] + w * gains[i + 1];
      }
    }
  }
  for (int n = 0; n < N; ++n) {
    const int nu = signed_frequency(n, N);
    const int idx = std::clamp(nu - nus.front(), 0, static_cast<int>(span) - 1);
    out[n] = fine[idx];
  }
  return out;
}

ChannelEstimate ls_interpolate(const std::vector<PilotObservation>& obs, int N, std::size_t columns,
                               const std::vector<int>& group_instants) {
  if (obs.empty()) throw DomainError("no pilots to estimate from");
  std::map<int, std::vector<std::pair<int, cplx>>> by_group;
  for (const auto& o : obs) by_group[o.group].emplace_back(signed_frequency(o.n, N), o.gain);

  std::vector<int> groups;
  std::vector<std::vector<cplx>> responses;
  for (auto& [g, v] : by_group) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<int> nus;
    std::vector<cplx> gains;
    for (const auto& [nu, gain] : v) {
      nus.push_back(nu);
      gains.push_back(gain);
    }
    groups.push_back(g);
    responses.push_back(dft_interpolate(nus, gains, N));
  }

  ChannelEstimate est;
  est.method = EstimateMethod::LsDft;
  est.gains = ComplexGrid(N, columns);
  for (std::size_t c = 0; c < columns; ++c) {
    std::size_t best = 0;
    long best_d = -1;
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const auto g = static_cast<std::size_t>(groups[k]);
      if (g >= group_instants.size()) throw ShapeError("pilot group without a lattice column");
      const long d = std::labs(static_cast<long>(c) - group_instants[g]);
      if (best_d < 0 || d < best_d) {
        best_d = d;
        best = k;
      }
    }
    for (int n = 0; n < N; ++n) est.gains(n, c) = responses[best][n];
  }
  return est;
}

namespace {

cplx checked_ratio(cplx r, cplx p) {
  if (std::abs(p) == 0.0) throw DomainError("pilot with zero magnitude");
  return r / p;
}

}  // namespace

ChannelEstimate ls_estimate_ofdm(const QamGrid& r, const PilotLayout& layout) {
  std::vector<PilotObservation> obs;
  const std::size_t P = layout.subcarriers.size();
  for (std::size_t g = 0; g < layout.instants.size(); ++g)
    for (std::size_t i = 0; i < P; ++i) {
      const int n = layout.subcarriers[i];
      obs.push_back({n, static_cast<int>(g), checked_ratio(r(n, layout.instants[g]), layout.ofdm_values[g * P + i])});
    }
  return ls_interpolate(obs, static_cast<int>(r.rows()), r.cols(), layout.instants);
}

ChannelEstimate ls_estimate_fbmc(const ComplexGrid& r, const PilotLayout& layout) {
  std::vector<PilotObservation> obs;
  std::vector<int> cols;
  for (int t : layout.instants) cols.push_back(2 * t);
  for (const auto& p : fbmc_pilot_slots(layout))
    if (!p.aux) obs.push_back({p.n, p.group, checked_ratio(r(p.n, p.m), p.value)});
  return ls_interpolate(obs, static_cast<int>(r.rows()), r.cols(), cols);
}

ChannelEstimate ls_estimate_dp(const DpDemodulated& d, const PilotLayout& layout, DpStructure s) {
  std::vector<PilotObservation> obs_h, obs_v;
  std::vector<int> cols;
  for (int t : layout.instants) cols.push_back(2 * t);
  for (const auto& p : fbmc_pilot_slots(layout, s)) {
    if (p.aux) continue;
    if (p.pol == Polarization::H)
      obs_h.push_back({p.n, p.group, checked_ratio(d.h(p.n, p.m), p.value)});
    else
      obs_v.push_back({p.n, p.group, checked_ratio(d.v(p.n, p.m), p.value)});
  }
  const int N = static_cast<int>(d.h.rows());
  const auto eh = ls_interpolate(obs_h, N, d.h.cols(), cols);
  const auto ev = ls_interpolate(obs_v, N, d.v.cols(), cols);
  ChannelEstimate est;
  est.gains = merge_by_structure(eh.gains, ev.gains, s);
  return est;
}

// ---- perfect knowledge and offsets ----------------------------------------

std::vector<cplx> frequency_response(const std::vector<cplx>& taps, int N) {
  std::vector<cplx> H(N, cplx{});
  for (int n = 0; n < N; ++n) {
    const int nu = signed_frequency(n, N);
    for (std::size_t d = 0; d < taps.size(); ++d)
      if (taps[d] != cplx{}) H[n] += taps[d] * std::polar(1.0, -2.0 * pi * nu * static_cast<double>(d) / N);
  }
  return H;
}

ChannelEstimate perfect_channel_estimate(const std::vector<cplx>& taps, int N, std::size_t columns) {
  const auto H = frequency_response(taps, N);
  ChannelEstimate est;
  est.method = EstimateMethod::Pck;
  est.gains = ComplexGrid(N, columns);
  for (int n = 0; n < N; ++n)
    for (std::size_t c = 0; c < columns; ++c) est.gains(n, c) = H[n];
  return est;
}

ChannelEstimate perfect_channel_estimate(const DualPolChannelRealization& ch, int N, std::size_t columns,
                                         DpStructure s) {
  const auto eh = perfect_channel_estimate(ch.hh, N, columns);
  const auto ev = perfect_channel_estimate(ch.vv, N, columns);
  ChannelEstimate est;
  est.method = EstimateMethod::Pck;
  est.gains = merge_by_structure(eh.gains, ev.gains, s);
  return est;
}

namespace {

// sum_i h[i] h[i + cto] e^{j 2 pi cfo (i + cto) / N}
cplx fbmc_offset_core(const PrototypeFilter& f, double cfo, long cto) {
  const long L = static_cast<long>(f.length());
  const int N = f.num_subcarriers;
  cplx s = 0.0;
  for (long i = std::max(0L, -cto); i < L && i + cto < L; ++i)
    s += f.coeffs[i] * f.coeffs[i + cto] * std::polar(1.0, 2.0 * pi * cfo * static_cast<double>(i + cto) / N);
  return s / f.energy();
}

}  // namespace

cplx fbmc_offset_gain(const PrototypeFilter& f, int n, int m, double cfo, long cto) {
  const int N = f.num_subcarriers;
  const double nu = signed_frequency(n, N);
  return fbmc_offset_core(f, cfo, cto) * std::polar(1.0, 2.0 * pi * nu * static_cast<double>(cto) / N) *
         std::polar(1.0, pi * cfo * m);
}

cplx ofdm_offset_gain(const SystemConfig& cfg, int n, int s, double cfo, long cto) {
  const long N = cfg.num_subcarriers;
  const long cp = static_cast<long>(cfg.cp_length());
  const long k0 = s * (N + cp) + cp;
  cplx acc = 0.0;
  for (long k = 0; k < N; ++k) {
    const long pos = k + cto;  // relative to the body start
    if (pos < -cp || pos >= N) continue;
    acc += std::polar(1.0, 2.0 * pi * cfo * static_cast<double>(k0 + pos) / N);
  }
  const double nu = signed_frequency(n, static_cast<int>(N));
  return acc / static_cast<double>(N) * std::polar(1.0, 2.0 * pi * nu * static_cast<double>(cto) / N);
}

void apply_offset_gains(ChannelEstimate& est, const PrototypeFilter& f, double cfo, long cto) {
  if (cfo == 0.0 && cto == 0) return;
  const int N = f.num_subcarriers;
  const cplx core = fbmc_offset_core(f, cfo, cto);
  for (std::size_t n = 0; n < est.gains.rows(); ++n) {
    const cplx lin = std::polar(1.0, 2.0 * pi * signed_frequency(static_cast<int>(n), N) * static_cast<double>(cto) / N);
    for (std::size_t m = 0; m < est.gains.cols(); ++m)
      est.gains(n, m) *= core * lin * std::polar(1.0, pi * cfo * static_cast<double>(m));
  }
}

void apply_offset_gains(ChannelEstimate& est, const SystemConfig& cfg, double cfo, long cto) {
  if (cfo == 0.0 && cto == 0) return;
  for (std::size_t n = 0; n < est.gains.rows(); ++n)
    for (std::size_t s = 0; s < est.gains.cols(); ++s)
      est.gains(n, s) *= ofdm_offset_gain(cfg, static_cast<int>(n), static_cast<int>(s), cfo, cto);
}

Equalized zf_equalize(const ComplexGrid& r, const ChannelEstimate& est) {
  if (!r.same_shape(est.gains)) throw ShapeError("estimate and received grid differ in shape");
  Equalized out;
  out.values = ComplexGrid(r.rows(), r.cols());
  for (std::size_t n = 0; n < r.rows(); ++n)
    for (std::size_t m = 0; m < r.cols(); ++m) {
      const cplx g = est.gains(n, m);
      if (std::abs(g) < 1e-12) {
        out.erasures.emplace_back(n, m);
        continue;
      }
      out.values(n, m) = r(n, m) / g;
    }
  return out;
}

PolarizedWaveform xpol_cancel_ideal(const PolarizedWaveform& r, const DualPolChannelRealization& ch,
                                    const PolarizedWaveform& tx) {
  if (r.h.size() != tx.h.size() || r.v.size() != tx.v.size()) throw ShapeError("genie waveforms differ in length");
  PolarizedWaveform out = r;
  const auto vh = convolve_same(tx.v.samples, ch.vh);
  const auto hv = convolve_same(tx.h.samples, ch.hv);
  for (std::size_t k = 0; k < out.h.size(); ++k) {
    out.h.samples[k] -= vh[k];
    out.v.samples[k] -= hv[k];
  }
  return out;
}

}  // namespace dpfbmc

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


#include <cmath>
#include <sstream>

#include "dpfbmc/experiment.hpp"
#include "dpfbmc/qam.hpp"
#include "dpfbmc/rng.hpp"

namespace dpfbmc {

FrameOutcome& FrameOutcome::merge(const FrameOutcome& o) {
  ber.merge(o.ber);
  sxx += o.sxx;
  sxy += o.sxy;
  syy += o.syy;
  erasures += o.erasures;
  return *this;
}

double FrameOutcome::sinr_db() const {
  if (sxx <= 0.0) throw DomainError("no reference symbols accumulated");
  const double g = sxy / sxx;
  const double err = syy - 2.0 * g * sxy + g * g * sxx;
  if (err <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(g * g * sxx / err);
}

namespace {

struct SystemState {
  SystemSpec spec;
  SystemConfig sc;
  std::optional<PrototypeFilter> filter;
  std::optional<LocalizationTable> table;  // auxiliary-pilot cancellation box
};

}  // namespace

struct Simulator::Impl {
  ExperimentConfig cfg;
  std::vector<SystemState> systems;
  std::vector<bool> mask;
  PilotLayout layout;
  std::vector<std::pair<int, int>> data;  // (n, t), subcarrier-major
  QamConstellation qam;
  ChannelProfile profile;
  std::size_t T = 0;
  int N = 0;

  explicit Impl(const ExperimentConfig& c) : cfg(c), qam(c.modulation) {}

  std::vector<std::uint8_t> frame_bits(std::uint64_t frame) const {
    auto rng = make_rng(cfg.seed, frame, StreamRole::Bits);
    std::vector<std::uint8_t> bits(data.size() * static_cast<std::size_t>(qam.bits_per_symbol()));
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (i % 64 == 0) word = rng();
      bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    return bits;
  }

  QamGrid data_grid(const std::vector<std::uint8_t>& bits) const {
    const auto symbols = qam.map_all(bits);
    QamGrid g(N, T);
    for (std::size_t i = 0; i < data.size(); ++i) g(data[i].first, data[i].second) = symbols[i];
    return g;
  }
};

Simulator::Simulator(const ExperimentConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {
  cfg.validate();
  auto& s = *impl_;
  s.N = cfg.num_subcarriers;
  s.T = static_cast<std::size_t>(cfg.symbols_per_frame);
  s.profile = cfg.profile();
  for (const auto& spec : cfg.systems) {
    SystemState st;
    st.spec = spec;
    st.sc = cfg.system_config(spec);
    if (spec.is_fbmc()) {
      st.filter = design_filter(spec.filter, spec.overlap, s.N, spec.rolloff);
      if (cfg.pilots) st.table = localization_table(*st.filter, 2, 2);
    }
    s.systems.push_back(std::move(st));
  }
  const SystemConfig sc = s.systems.front().sc;
  s.mask = sc.active_mask();
  if (cfg.pilots) s.layout = make_pilot_layout(sc, s.T, cfg.pilot_count, cfg.pilot_period);
  const auto slots = data_slots(s.layout, s.mask, s.T);
  for (int n = 0; n < s.N; ++n)
    for (std::size_t t = 0; t < s.T; ++t)
      if (slots(n, t)) s.data.emplace_back(n, static_cast<int>(t));
}

Simulator::~Simulator() = default;

std::size_t Simulator::num_systems() const { return impl_->systems.size(); }
const SystemSpec& Simulator::system(std::size_t i) const { return impl_->systems.at(i).spec; }
std::size_t Simulator::info_bits_per_frame() const {
  return impl_->data.size() * static_cast<std::size_t>(impl_->qam.bits_per_symbol());
}

FrameConditions Simulator::conditions_at(double v) const {
  const auto& c = impl_->cfg;
  FrameConditions fc;
  fc.eb_n0_db = c.eb_n0_db;
  fc.xpd_db = c.resolved_xpd_db();
  fc.theta_deg = c.theta_deg;
  fc.cfo = c.cfo;
  fc.cto_samples = std::lround(c.cto * c.num_subcarriers);
  fc.genie_cancel = c.genie_cancel;
  fc.equalizer = c.equalizer;
  switch (c.sweep) {
    case SweepVariable::EbN0: fc.eb_n0_db = v; break;
    case SweepVariable::Xpd: fc.xpd_db = v; break;
    case SweepVariable::Theta: fc.theta_deg = v; break;
    case SweepVariable::Cfo: fc.cfo = v; break;
    case SweepVariable::Cto: fc.cto_samples = std::lround(v * c.num_subcarriers); break;
  }
  return fc;
}

namespace {

Waveform zeros_like(const Waveform& w) {
  Waveform z = w;
  std::fill(z.samples.begin(), z.samples.end(), cplx{});
  return z;
}

void scale(Waveform& w, double s) {
  for (auto& v : w.samples) v *= s;
}

void require_finite(const ComplexGrid& g, const std::string& what) {
  for (const auto& v : g.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("non-finite value in " + what);
}

}  // namespace

FrameOutcome Simulator::run_frame(std::size_t index, std::uint64_t frame, const FrameConditions& c) const {
  const auto& s = *impl_;
  const auto& st = s.systems.at(index);
  const auto structure = st.spec.structure();
  const bool dual = structure.has_value();
  const int N = s.N;
  const double fs = s.cfg.bandwidth;

  // transmitter
  const auto bits = s.frame_bits(frame);
  QamGrid g = s.data_grid(bits);
  PolarizedWaveform tx;
  OqamGrid a;
  if (!st.spec.is_fbmc()) {
    if (!s.layout.empty()) place_pilots(g, s.layout, s.mask);
    tx.h = cp_ofdm_modulate(g, st.sc);
    if (st.spec.kind == SystemKind::CpOfdmWola) tx.h = wola_window(tx.h, st.sc);
  } else {
    a = qam_to_oqam(g, s.mask);
    if (!s.layout.empty()) place_pilots(a, s.layout, s.mask, structure);
    if (dual) {
      auto p = dp_split(a, *structure);
      if (!s.layout.empty()) insert_auxiliary_pilots(p, s.layout, *st.table);
      tx = dp_modulate(p, *st.filter, fs);
    } else {
      if (!s.layout.empty()) insert_auxiliary_pilots(a, s.layout, *st.table);
      tx.h = fbmc_modulate_fast(a, *st.filter, fs);
    }
  }
  if (!dual) tx.v = zeros_like(tx.h);
  const double energy = tx.energy();

  // channel and impairments
  auto ch_rng = make_rng(s.cfg.seed, frame, StreamRole::Channel);
  const auto ch = realize_channel(s.profile, c.xpd_db, fs, ch_rng);
  PolarizedWaveform rx;
  const double ct = std::cos(c.theta_deg * pi / 180.0);
  if (dual) {
    rx = apply_dual_pol_channel(tx, ch);
    if (c.genie_cancel) rx = xpol_cancel_ideal(rx, ch, tx);
    if (c.theta_deg != 0.0) rx = apply_angular_mismatch(rx, c.theta_deg);
  } else {
    // a single-polarization link sees only its co-polar path
    rx.h = apply_channel(tx.h, ch.hh);
    scale(rx.h, ct);
  }
  const double variance = awgn_variance(energy, static_cast<double>(bits.size()), c.eb_n0_db);
  auto impair = [&](const Waveform& w, StreamRole role) {
    auto noise_rng = make_rng(s.cfg.seed, frame, role);
    return add_noise(apply_cto(apply_cfo(w, c.cfo, N), c.cto_samples), variance, noise_rng);
  };
  rx.h = impair(rx.h, StreamRole::NoiseH);
  if (dual) rx.v = impair(rx.v, StreamRole::NoiseV);

  // receiver
  ComplexGrid r;
  ChannelEstimate est;
  const bool pck = c.equalizer == EstimateMethod::Pck;
  if (!st.spec.is_fbmc()) {
    r = cp_ofdm_demodulate(rx.h, st.sc);
    if (pck) {
      est = perfect_channel_estimate(ch.hh, N, r.cols());
      apply_offset_gains(est, st.sc, c.cfo, c.cto_samples);
    } else {
      est = ls_estimate_ofdm(r, s.layout);
    }
  } else if (dual) {
    const auto d = dp_demodulate(rx, *st.filter, *structure);
    r = d.merged;
    if (pck) {
      est = perfect_channel_estimate(ch, N, r.cols(), *structure);
      apply_offset_gains(est, *st.filter, c.cfo, c.cto_samples);
    } else {
      est = ls_estimate_dp(d, s.layout, *structure);
    }
  } else {
    r = fbmc_demodulate(rx.h, *st.filter);
    if (pck) {
      est = perfect_channel_estimate(ch.hh, N, r.cols());
      apply_offset_gains(est, *st.filter, c.cfo, c.cto_samples);
    } else {
      est = ls_estimate_fbmc(r, s.layout);
    }
  }
  if (pck && ct != 1.0)
    for (auto& v : est.gains.data()) v *= ct;
  const auto eq = zf_equalize(r, est);
  require_finite(eq.values, "the equalized grid of " + st.spec.label());

  // detection
  FrameOutcome out;
  out.erasures = eq.erasures.size();
  out.ber.bits = bits.size();
  out.ber.frames = 1;
  const int bps = s.qam.bits_per_symbol();
  std::vector<std::uint8_t> decided(static_cast<std::size_t>(bps));
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    const auto [n, t] = s.data[i];
    const cplx x = g(n, t);
    const cplx y = st.spec.is_fbmc() ? cplx(eq.values(n, 2 * t).real(), eq.values(n, 2 * t + 1).real())
                                     : eq.values(n, t);
    s.qam.demap(y, decided);
    for (int b = 0; b < bps; ++b) out.ber.bit_errors += decided[b] != bits[i * bps + b];
    out.sxx += std::norm(x);
    out.sxy += x.real() * y.real() + x.imag() * y.imag();
    out.syy += std::norm(y);
  }
  return out;
}

}  // namespace dpfbmc

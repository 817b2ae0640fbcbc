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


#include "dpfbmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "dpfbmc/interference.hpp"
#include "dpfbmc/qam.hpp"
#include "dpfbmc/rng.hpp"

namespace dpfbmc {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

ResultTable empty_table(const ExperimentConfig& cfg) {
  ResultTable t;
  t.sweep_variable = to_string(cfg.sweep);
  t.config_json = config_to_json(cfg);
  t.fingerprint = config_fingerprint(cfg);
  return t;
}

unsigned resolve_workers(unsigned requested) {
  if (requested) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs job(i) for i in [0, count) on a pool. Results are written by index, so
// the caller's reduction order never depends on scheduling.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job,
                  const std::function<void(std::size_t, std::size_t)>& progress) {
  std::atomic<std::size_t> next{0}, done{0};
  std::exception_ptr failure;
  std::mutex m;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard lock(m);
        if (failure) return;
      }
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(m);
        if (!failure) failure = std::current_exception();
        return;
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(m);
        progress(d, count);
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, count))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<ResultRow> ResultTable::select(std::string_view system, std::string_view metric) const {
  std::vector<ResultRow> out;
  for (const auto& r : rows)
    if (r.system == system && r.metric == metric) out.push_back(r);
  return out;
}

std::vector<std::string> ResultTable::systems() const {
  std::vector<std::string> out;
  for (const auto& r : rows)
    if (std::find(out.begin(), out.end(), r.system) == out.end()) out.push_back(r.system);
  return out;
}

void write_csv(std::ostream& os, const ResultTable& t) {
  os << "# dpfbmc " << kVersion << '\n';
  os << "# fingerprint=" << t.fingerprint << '\n';
  os << "# sweep=" << t.sweep_variable << '\n';
  os << "# config=" << t.config_json << '\n';
  os << "sweep_value,system,metric,value,ci_halfwidth,bits,frames,seed\n";
  for (const auto& r : t.rows)
    os << fmt(r.sweep_value) << ',' << r.system << ',' << r.metric << ',' << fmt(r.value) << ','
       << fmt(r.ci_halfwidth) << ',' << r.bits << ',' << r.frames << ',' << r.seed << '\n';
}

ResultTable run_ber_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  const Simulator sim(cfg);
  const std::size_t P = cfg.values.size();
  const std::size_t F = cfg.frames;
  const std::size_t S = sim.num_systems();
  std::vector<FrameOutcome> results(P * F * S);
  std::vector<FrameConditions> conditions;
  for (double v : cfg.values) conditions.push_back(sim.conditions_at(v));

  parallel_for(
      P * F, resolve_workers(opt.workers),
      [&](std::size_t job) {
        const std::size_t p = job / F, f = job % F;
        for (std::size_t s = 0; s < S; ++s) results[job * S + s] = sim.run_frame(s, f, conditions[p]);
      },
      opt.progress);

  ResultTable t = empty_table(cfg);
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t s = 0; s < S; ++s) {
      FrameOutcome total;
      for (std::size_t f = 0; f < F; ++f) total.merge(results[(p * F + f) * S + s]);
      const auto label = sim.system(s).label();
      ResultRow row{cfg.values[p], label, "ber", total.ber.ber(), total.ber.ci_halfwidth(), total.ber.bits,
                    total.ber.frames, cfg.seed};
      t.rows.push_back(row);
      row.metric = "sinr_db";
      row.value = total.sinr_db();
      row.ci_halfwidth = 0.0;
      t.rows.push_back(row);
    }
    if (cfg.sweep == SweepVariable::EbN0 && cfg.modulation == 4)
      t.rows.push_back({cfg.values[p], "theory_qpsk_awgn", "ber", theoretical_ber_qpsk(cfg.values[p]), 0.0, 0, 0,
                        cfg.seed});
    if (cfg.sweep == SweepVariable::Theta)
      t.rows.push_back({cfg.values[p], "theory", "sinr_loss_db",
                        -theoretical_sinr_angular(0.0, cfg.values[p]), 0.0, 0, 0, cfg.seed});
  }
  return t;
}

ResultTable run_offset_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (cfg.sweep != SweepVariable::Cfo && cfg.sweep != SweepVariable::Cto)
    throw ConfigError("offset sweeps vary cfo or cto");
  if (!cfg.channel_file.empty() || cfg.channel != "awgn") throw ConfigError("offset sweeps run on the awgn profile");
  return run_ber_sweep(cfg, opt);
}

// ---- PSD ------------------------------------------------------------------------

namespace {

QamGrid random_payload(const QamConstellation& qam, const std::vector<bool>& mask, std::size_t T, Rng& rng) {
  const std::size_t N = mask.size();
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(qam.bits_per_symbol()));
  QamGrid g(N, T);
  for (std::size_t n = 0; n < N; ++n)
    if (mask[n])
      for (std::size_t t = 0; t < T; ++t) {
        const auto word = rng();
        for (std::size_t b = 0; b < bits.size(); ++b) bits[b] = (word >> b) & 1u;
        g(n, t) = qam.map(bits);
      }
  return g;
}

}  // namespace

PsdReport run_psd(const ExperimentConfig& cfg) {
  cfg.validate();
  const QamConstellation qam(cfg.modulation);
  const int N = cfg.num_subcarriers;
  const auto T = static_cast<std::size_t>(cfg.symbols_per_frame);
  PsdReport report;
  report.oob = empty_table(cfg);
  report.oob.sweep_variable = "oob_guard";
  for (const auto& spec : cfg.systems) {
    const auto sc = cfg.system_config(spec);
    const auto mask = sc.active_mask();
    Waveform h, v;
    if (!spec.is_fbmc()) {
      QamGrid all(N, T * cfg.psd.frames);
      for (std::size_t f = 0; f < cfg.psd.frames; ++f) {
        auto rng = make_rng(cfg.seed, f, StreamRole::Payload);
        const auto g = random_payload(qam, mask, T, rng);
        for (int n = 0; n < N; ++n)
          for (std::size_t t = 0; t < T; ++t) all(n, f * T + t) = g(n, t);
      }
      h = cp_ofdm_modulate(all, sc);
      if (spec.kind == SystemKind::CpOfdmWola) h = wola_window(h, sc);
    } else {
      const auto filter = design_filter(spec.filter, spec.overlap, N, spec.rolloff);
      std::vector<Waveform> hs, vs;
      for (std::size_t f = 0; f < cfg.psd.frames; ++f) {
        auto rng = make_rng(cfg.seed, f, StreamRole::Payload);
        const auto a = qam_to_oqam(random_payload(qam, mask, T, rng), mask);
        PolarizedWaveform w;
        if (auto s = spec.structure())
          w = dp_modulate(dp_split(a, *s), filter, cfg.bandwidth);
        else
          w.h = fbmc_modulate_fast(a, filter, cfg.bandwidth);
        auto cut = [&](const Waveform& x) { return cfg.psd.truncate ? truncate_tails(x, spec.overlap, N) : x; };
        hs.push_back(cut(w.h));
        if (spec.structure()) vs.push_back(cut(w.v));
      }
      h = concatenate(hs);
      if (!vs.empty()) v = concatenate(vs);
    }
    auto p = psd_periodogram(h, N, cfg.psd.segment_length, cfg.psd.overlap);
    if (!v.samples.empty()) {
      // both polarizations radiate; average their spectra
      const auto pv = psd_periodogram(v, N, cfg.psd.segment_length, cfg.psd.overlap);
      double peak = 0.0;
      for (std::size_t i = 0; i < p.density.size(); ++i) {
        p.density[i] += pv.density[i];
        peak = std::max(peak, p.density[i]);
      }
      for (std::size_t i = 0; i < p.density.size(); ++i) {
        p.density[i] /= peak;
        p.density_db[i] = p.density[i] > 0.0 ? std::max(kPsdFloorDb, 10.0 * std::log10(p.density[i])) : kPsdFloorDb;
      }
      p.segments += pv.segments;
    }
    const double band_edge = 0.5 * (N - cfg.guard_left - cfg.guard_right);
    report.oob.rows.push_back({cfg.psd.oob_guard, spec.label(), "oob_db", oob_power(p, band_edge, cfg.psd.oob_guard),
                               0.0, 0, cfg.psd.frames, cfg.seed});
    report.traces.emplace_back(spec.label(), std::move(p));
  }
  return report;
}

std::string run_table_report(int num_subcarriers) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  const auto& tables = published_tables();
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& ref = tables[i];
    const auto c = compare_with_published(ref, num_subcarriers);
    os << "## Table " << i + 1 << ": " << ref.name << "\n\n";
    os << "Computed (N=" << num_subcarriers << "):\n\n" << render_table(c.computed, TableFormat::Markdown) << '\n';
    os << "Published:\n\n" << render_table(ref.values, TableFormat::Markdown) << '\n';
    os << "Absolute difference:\n\n" << render_diff(c, TableFormat::Markdown) << '\n';
    os << "max |diff| = " << c.max_diff << ", tolerance " << ref.tolerance << ", entries outside tolerance: "
       << c.mismatches << "\n\n";
  }
  return os.str();
}

// ---- SVG ----------------------------------------------------------------------------

void write_svg(std::ostream& os, const ResultTable& t, std::string_view metric, bool log_y) {
  constexpr double W = 760, H = 480, L = 70, R = 200, TOP = 30, B = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
                                 "#17becf", "#7f7f7f", "#bcbd22"};
  struct Pt {
    double x, y;
  };
  std::vector<std::pair<std::string, std::vector<Pt>>> traces;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& sys : t.systems()) {
    std::vector<Pt> pts;
    for (const auto& r : t.select(sys, metric)) {
      if (!std::isfinite(r.sweep_value) || !std::isfinite(r.value)) continue;
      if (log_y && r.value <= 0.0) continue;
      const double y = log_y ? std::log10(r.value) : r.value;
      pts.push_back({r.sweep_value, y});
      x0 = std::min(x0, r.sweep_value);
      x1 = std::max(x1, r.sweep_value);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
    if (!pts.empty()) traces.emplace_back(sys, std::move(pts));
  }
  if (traces.empty()) {
    x0 = 0;
    x1 = 1;
    y0 = 0;
    y1 = 1;
  }
  if (log_y) {
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - TOP - B); };

  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << L << "\" y=\"" << TOP << "\" width=\"" << W - L - R << "\" height=\"" << H - TOP - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double x = x0 + (x1 - x0) * i / 5.0;
    os << "<text x=\"" << px(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  }
  const int ysteps = log_y ? static_cast<int>(y1 - y0) : 5;
  for (int i = 0; i <= ysteps; ++i) {
    const double y = y0 + (y1 - y0) * i / ysteps;
    const std::string label = log_y ? "1e" + fmt(y) : fmt(y);
    os << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(y) << "\" y2=\"" << py(y)
       << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << t.sweep_variable
     << "</text>\n";
  os << "<text x=\"" << L << "\" y=\"" << TOP - 10 << "\">" << metric << "</text>\n";
  for (std::size_t k = 0; k < traces.size(); ++k) {
    const char* color = colors[k % std::size(colors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : traces[k].second) os << px(p.x) << ',' << py(p.y) << ' ';
    os << "\"/>\n";
    for (const auto& p : traces[k].second)
      os << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    const double ly = TOP + 16 + 18.0 * k;
    os << "<line x1=\"" << W - R + 12 << "\" x2=\"" << W - R + 32 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
       << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 38 << "\" y=\"" << ly << "\">" << traces[k].first << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace dpfbmc

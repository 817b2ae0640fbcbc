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



#ifndef DPFBMC_EXPERIMENT_HPP
#define DPFBMC_EXPERIMENT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dpfbmc/channel.hpp"
#include "dpfbmc/dp_multiplex.hpp"
#include "dpfbmc/estimation.hpp"
#include "dpfbmc/metrics.hpp"
#include "dpfbmc/modem.hpp"
#include "dpfbmc/prototype_filter.hpp"

namespace dpfbmc {

inline constexpr const char* kVersion = DPFBMC_VERSION;

enum class SystemKind { CpOfdm, CpOfdmWola, Fbmc, DpFbmcS1, DpFbmcS2, DpFbmcS3 };

std::string to_string(SystemKind k);

/// One transmission scheme. FBMC variants carry their prototype filter.
struct SystemSpec {
  SystemKind kind = SystemKind::Fbmc;
  FilterKind filter = FilterKind::SRRC;
  int overlap = 4;
  std::optional<double> rolloff;

  bool is_fbmc() const { return kind != SystemKind::CpOfdm && kind != SystemKind::CpOfdmWola; }
  std::optional<DpStructure> structure() const;
  /// e.g. "cp_ofdm", "dp_fbmc_s1/srrc8".
  std::string label() const;
  /// Round-trips through parse_system_spec.
  std::string spec_string() const;
};

/// Parses `kind[:filter[:K[:alpha]]]`, taking missing filter fields from
/// `defaults`. Throws ConfigError on unknown names or a filter on CP-OFDM.
SystemSpec parse_system_spec(std::string_view text, const SystemSpec& defaults);

enum class SweepVariable { EbN0, Xpd, Theta, Cfo, Cto };

std::string to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);

struct PsdSettings {
  std::size_t frames = 64;
  std::size_t segment_length = 0;  // 0 selects 4 N
  double overlap = 0.5;
  double oob_guard = 2.0;  // subcarrier spacings past the band edge
  bool truncate = true;
};

/// Everything that determines an experiment's output. Parallelism is a run
/// option, not part of the configuration, so it never affects results.
struct ExperimentConfig {
  std::vector<SystemSpec> systems;
  SystemSpec filter;  // default filter for FBMC systems
  int num_subcarriers = 512;
  int guard_left = 17;
  int guard_right = 16;
  int symbols_per_frame = 16;
  double bandwidth = 10e6;
  int modulation = 16;
  std::string channel = "pedestrian_a";
  std::string channel_file;             // CSV profile, overrides `channel`
  std::optional<double> xpd_db;         // unset: per-channel default
  std::optional<std::pair<int, int>> cp;  // unset: per-channel default
  double wola_rolloff = 0.05;
  EstimateMethod equalizer = EstimateMethod::LsDft;
  bool pilots = true;
  int pilot_count = 30;
  int pilot_period = 4;
  double eb_n0_db = 13.0;
  double theta_deg = 0.0;
  double cfo = 0.0;
  double cto = 0.0;  // fraction of the symbol spacing N
  bool genie_cancel = false;
  SweepVariable sweep = SweepVariable::EbN0;
  std::vector<double> values{0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::uint64_t frames = 200;
  std::uint64_t seed = 1;
  PsdSettings psd;

  void validate() const;
  /// Resolved XPD (explicit or the channel default).
  double resolved_xpd_db() const;
  ChannelProfile profile() const;
  SystemConfig system_config(const SystemSpec& s) const;
};

/// Defaults for a CLI verb: "ber", "psd" or "offsets".
ExperimentConfig default_config(std::string_view verb);

/// Overlays a JSON document on `base`. Unknown keys raise ConfigError.
ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base = default_config("ber"));
/// Canonical single-line JSON (sorted keys).
std::string config_to_json(const ExperimentConfig& cfg);
/// Applies `key=value`; dotted keys reach nested sections, values parse as
/// JSON when possible and as strings otherwise.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);
/// FNV-1a 64 over the canonical JSON, as 16 hex digits.
std::string config_fingerprint(const ExperimentConfig& cfg);

/// Per-channel XPD defaults: 15, 10, 5 and 3 dB for ag_los, pedestrian_a,
/// pedestrian_b and vehicular_b; +inf otherwise.
double default_xpd_db(std::string_view channel);
std::pair<int, int> default_cp(std::string_view channel);

// ---- frame simulation ----------------------------------------------------------

struct FrameConditions {
  double eb_n0_db = 13.0;
  double xpd_db = std::numeric_limits<double>::infinity();
  double theta_deg = 0.0;
  double cfo = 0.0;
  long cto_samples = 0;
  bool genie_cancel = false;
  EstimateMethod equalizer = EstimateMethod::Pck;
};

/// Bit errors plus the sums needed for a least-squares SINR fit of the
/// detected symbols; all fields add up under merge.
struct FrameOutcome {
  BerRecord ber;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  std::uint64_t erasures = 0;

  FrameOutcome& merge(const FrameOutcome& o);
  double sinr_db() const;
};

/// Precomputed transmitter/receiver state for every system of a config.
/// Frames are pure functions of (config, frame index, conditions).
class Simulator {
 public:
  explicit Simulator(const ExperimentConfig& cfg);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  std::size_t num_systems() const;
  const SystemSpec& system(std::size_t i) const;
  std::size_t info_bits_per_frame() const;
  FrameConditions conditions_at(double sweep_value) const;

  FrameOutcome run_frame(std::size_t system, std::uint64_t frame, const FrameConditions& c) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// ---- results -------------------------------------------------------------------------

struct ResultRow {
  double sweep_value = 0.0;
  std::string system;
  std::string metric;
  double value = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t bits = 0;
  std::uint64_t frames = 0;
  std::uint64_t seed = 0;
};

struct ResultTable {
  std::string sweep_variable;
  std::string config_json;
  std::string fingerprint;
  std::vector<ResultRow> rows;

  /// Rows for one system and metric, in sweep order.
  std::vector<ResultRow> select(std::string_view system, std::string_view metric) const;
  std::vector<std::string> systems() const;
};

/// `# ` provenance lines, then `sweep_value,system,metric,value,ci_halfwidth,bits,frames,seed`.
void write_csv(std::ostream& os, const ResultTable& t);
/// Line plot of one metric against the sweep value, one trace per system.
void write_svg(std::ostream& os, const ResultTable& t, std::string_view metric, bool log_y);

struct RunOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  std::function<void(std::size_t done, std::size_t total)> progress;
};

/// BER (and SINR) of every system at every sweep value over `frames` frames,
/// paired seeds across systems and sweep points.
ResultTable run_ber_sweep(const ExperimentConfig& cfg, const RunOptions& opt = {});

/// BER versus CFO or CTO on AWGN without offset correction.
ResultTable run_offset_sweep(const ExperimentConfig& cfg, const RunOptions& opt = {});

struct PsdReport {
  std::vector<std::pair<std::string, PsdEstimate>> traces;
  ResultTable oob;  // metric oob_db per system
};

/// Long random payloads per system; FBMC frames are tail-truncated and WOLA
/// is applied to windowed CP-OFDM.
PsdReport run_psd(const ExperimentConfig& cfg);

/// The four localization tables with their differences to the published
/// values, in Markdown, plus a summary line per table.
std::string run_table_report(int num_subcarriers = 512);

}  // namespace dpfbmc

#endif  // DPFBMC_EXPERIMENT_HPP

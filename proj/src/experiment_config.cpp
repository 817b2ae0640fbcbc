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


#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dpfbmc/experiment.hpp"
#include "json.hpp"

namespace dpfbmc {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = lower(j.get<std::string>());
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  }
  throw ConfigError("'" + key + "' must be a number or \"inf\"");
}

struct KindName {
  SystemKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {SystemKind::CpOfdm, "cp_ofdm"},       {SystemKind::CpOfdmWola, "cp_ofdm_wola"}, {SystemKind::Fbmc, "fbmc"},
    {SystemKind::DpFbmcS1, "dp_fbmc_s1"},  {SystemKind::DpFbmcS2, "dp_fbmc_s2"},     {SystemKind::DpFbmcS3, "dp_fbmc_s3"},
};

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(SystemKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "unknown";
}

std::optional<DpStructure> SystemSpec::structure() const {
  switch (kind) {
    case SystemKind::DpFbmcS1: return DpStructure::I;
    case SystemKind::DpFbmcS2: return DpStructure::II;
    case SystemKind::DpFbmcS3: return DpStructure::III;
    default: return std::nullopt;
  }
}

std::string SystemSpec::label() const {
  if (!is_fbmc()) return to_string(kind);
  std::string s = to_string(kind) + "/" + to_string(filter) + std::to_string(overlap);
  if (rolloff) s += "a" + format_number(*rolloff);
  return s;
}

std::string SystemSpec::spec_string() const {
  if (!is_fbmc()) return to_string(kind);
  std::string s = to_string(kind) + ":" + to_string(filter) + ":" + std::to_string(overlap);
  if (rolloff) s += ":" + format_number(*rolloff);
  return s;
}

SystemSpec parse_system_spec(std::string_view text, const SystemSpec& defaults) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(lower(item));
  if (parts.empty() || parts.size() > 4) throw ConfigError("malformed system '" + std::string(text) + "'");
  SystemSpec s = defaults;
  bool found = false;
  for (const auto& e : kKinds)
    if (parts[0] == e.name) {
      s.kind = e.kind;
      found = true;
    }
  if (!found) throw ConfigError("unknown system '" + parts[0] + "'");
  if (!s.is_fbmc() && parts.size() > 1) throw ConfigError("CP-OFDM systems take no prototype filter");
  try {
    if (parts.size() > 1) {
      s.filter = parse_filter_kind(parts[1]);
      if (parts.size() < 4) s.rolloff.reset();
    }
    if (parts.size() > 2) s.overlap = std::stoi(parts[2]);
    if (parts.size() > 3) s.rolloff = std::stod(parts[3]);
  } catch (const std::logic_error&) {
    throw ConfigError("malformed system '" + std::string(text) + "'");
  }
  return s;
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::EbN0: return "eb_n0_db";
    case SweepVariable::Xpd: return "xpd_db";
    case SweepVariable::Theta: return "theta_deg";
    case SweepVariable::Cfo: return "cfo";
    case SweepVariable::Cto: return "cto";
  }
  return "unknown";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  const auto s = lower(name);
  for (auto v : {SweepVariable::EbN0, SweepVariable::Xpd, SweepVariable::Theta, SweepVariable::Cfo, SweepVariable::Cto})
    if (s == to_string(v)) return v;
  throw ConfigError("unknown sweep variable '" + std::string(name) + "'");
}

double default_xpd_db(std::string_view channel) {
  const auto c = lower(channel);
  if (c == "ag_los") return 15.0;
  if (c == "pedestrian_a") return 10.0;
  if (c == "pedestrian_b") return 5.0;
  if (c == "vehicular_b") return 3.0;
  return kInf;
}

std::pair<int, int> default_cp(std::string_view channel) {
  const auto c = lower(channel);
  if (c == "pedestrian_b") return {1, 16};
  if (c == "vehicular_b") return {1, 8};
  return {1, 32};
}

double ExperimentConfig::resolved_xpd_db() const { return xpd_db ? *xpd_db : default_xpd_db(channel); }

ChannelProfile ExperimentConfig::profile() const {
  if (channel_file.empty()) return builtin_profile(channel);
  std::ifstream is(channel_file);
  if (!is) throw ConfigError("cannot open channel file " + channel_file);
  return load_profile_csv(is, channel);
}

SystemConfig ExperimentConfig::system_config(const SystemSpec& s) const {
  SystemConfig sc;
  sc.num_subcarriers = num_subcarriers;
  sc.guard_left = guard_left;
  sc.guard_right = guard_right;
  sc.bandwidth = bandwidth;
  const auto c = cp ? *cp : default_cp(channel);
  sc.cp_num = c.first;
  sc.cp_den = c.second;
  sc.window_rolloff = s.kind == SystemKind::CpOfdmWola ? wola_rolloff : 0.0;
  return sc;
}

void ExperimentConfig::validate() const {
  if (systems.empty()) throw ConfigError("no systems selected");
  if (values.empty()) throw ConfigError("sweep grid is empty");
  if (frames < 1) throw ConfigError("at least one frame is required");
  if (symbols_per_frame < 1) throw ConfigError("symbols_per_frame must be positive");
  if (modulation != 4 && modulation != 16 && modulation != 64) throw ConfigError("modulation must be 4, 16 or 64");
  if (equalizer == EstimateMethod::LsDft && !pilots) throw ConfigError("LS estimation needs pilots");
  if (theta_deg < 0.0 || theta_deg >= 90.0) throw ConfigError("theta_deg must lie in [0, 90)");
  if (!(std::abs(cfo) < 0.5)) throw ConfigError("cfo must satisfy |cfo| < 0.5");
  if (std::isnan(eb_n0_db)) throw ConfigError("eb_n0_db is NaN");
  if (psd.frames < 1) throw ConfigError("psd.frames must be positive");
  if (psd.overlap < 0.0 || psd.overlap >= 1.0) throw ConfigError("psd.overlap must lie in [0, 1)");
  for (double v : values) {
    if (std::isnan(v)) throw ConfigError("sweep grid contains NaN");
    switch (sweep) {
      case SweepVariable::Cfo:
        if (!(std::abs(v) < 0.5)) throw ConfigError("CFO grid exceeds |cfo| < 0.5");
        break;
      case SweepVariable::Theta:
        if (v < 0.0 || v >= 90.0) throw ConfigError("theta grid must lie in [0, 90)");
        break;
      case SweepVariable::Cto:
        if (!std::isfinite(v)) throw ConfigError("CTO grid must be finite");
        break;
      case SweepVariable::Xpd:
        if (v == -kInf) throw ConfigError("XPD grid must not contain -inf");
        break;
      case SweepVariable::EbN0: break;
    }
  }
  try {
    for (const auto& s : systems) {
      const auto sc = system_config(s);
      sc.validate();
      if (!s.is_fbmc()) {
        sc.cp_length();
        if (sc.wola_length() > sc.cp_length()) throw ConfigError("WOLA ramp longer than the cyclic prefix");
      } else {
        design_filter(s.filter, s.overlap, num_subcarriers, s.rolloff);
      }
    }
    profile();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig default_config(std::string_view verb) {
  ExperimentConfig c;
  c.filter.kind = SystemKind::Fbmc;
  c.filter.filter = FilterKind::SRRC;
  c.filter.overlap = 8;
  const auto v = lower(verb);
  auto sys = [&](std::string_view s) { return parse_system_spec(s, c.filter); };
  if (v == "ber") {
    c.systems = {sys("cp_ofdm"), sys("fbmc"), sys("dp_fbmc_s1"), sys("dp_fbmc_s3")};
  } else if (v == "psd") {
    c.systems = {sys("cp_ofdm"), sys("cp_ofdm_wola"), sys("fbmc:phydyas:4"), sys("fbmc:srrc:4"), sys("fbmc:srrc:8"),
                 sys("dp_fbmc_s1:srrc:8")};
    c.channel = "awgn";
    c.cp = std::pair{1, 16};  // the WOLA ramp of 0.05 N must fit inside the prefix
    c.values = {0};
    c.frames = 1;
  } else if (v == "offsets") {
    c.systems = {sys("cp_ofdm"), sys("fbmc:phydyas:4"), sys("dp_fbmc_s1:srrc:4"), sys("dp_fbmc_s1:srrc:8")};
    c.bandwidth = 5e6;
    c.channel = "awgn";
    c.eb_n0_db = 12.0;
    c.equalizer = EstimateMethod::Pck;
    c.sweep = SweepVariable::Cfo;
    c.values = {0.0, 0.025, 0.05, 0.075, 0.1, 0.15, 0.2};
  } else {
    throw ConfigError("unknown experiment '" + std::string(verb) + "'");
  }
  return c;
}

namespace {

json to_json_doc(const ExperimentConfig& c) {
  json j;
  json systems = json::array();
  for (const auto& s : c.systems) systems.push_back(s.spec_string());
  j["systems"] = systems;
  j["filter"] = to_string(c.filter.filter);
  j["overlap"] = c.filter.overlap;
  j["rolloff"] = c.filter.rolloff ? json(*c.filter.rolloff) : json(nullptr);
  j["num_subcarriers"] = c.num_subcarriers;
  j["guard_left"] = c.guard_left;
  j["guard_right"] = c.guard_right;
  j["symbols_per_frame"] = c.symbols_per_frame;
  j["bandwidth"] = c.bandwidth;
  j["modulation"] = c.modulation;
  j["channel"] = c.channel;
  j["channel_file"] = c.channel_file;
  j["xpd_db"] = c.xpd_db ? number_to_json(*c.xpd_db) : json(nullptr);
  j["cp"] = c.cp ? json::array({c.cp->first, c.cp->second}) : json(nullptr);
  j["wola_rolloff"] = c.wola_rolloff;
  j["equalizer"] = c.equalizer == EstimateMethod::LsDft ? "ls" : "pck";
  j["pilots"] = c.pilots;
  j["pilot_count"] = c.pilot_count;
  j["pilot_period"] = c.pilot_period;
  j["eb_n0_db"] = number_to_json(c.eb_n0_db);
  j["theta_deg"] = c.theta_deg;
  j["cfo"] = c.cfo;
  j["cto"] = c.cto;
  j["genie_cancel"] = c.genie_cancel;
  json values = json::array();
  for (double v : c.values) values.push_back(number_to_json(v));
  j["sweep"] = {{"variable", to_string(c.sweep)}, {"values", values}};
  j["frames"] = c.frames;
  j["seed"] = c.seed;
  j["psd"] = {{"frames", c.psd.frames},
              {"segment_length", c.psd.segment_length},
              {"overlap", c.psd.overlap},
              {"oob_guard", c.psd.oob_guard},
              {"truncate", c.psd.truncate}};
  return j;
}

void overlay(json& base, const json& patch, const std::string& path) {
  if (!patch.is_object()) throw ConfigError("configuration must be a JSON object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown configuration key '" + key + "'");
    auto& slot = base[it.key()];
    if (slot.is_object() && it.value().is_object())
      overlay(slot, it.value(), key);
    else
      slot = it.value();
  }
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("invalid value for '") + key + "'");
  }
}

ExperimentConfig from_json_doc(const json& j, const std::vector<bool>& explicit_filter) {
  ExperimentConfig c;
  c.filter.kind = SystemKind::Fbmc;
  c.filter.filter = parse_filter_kind(get<std::string>(j, "filter"));
  c.filter.overlap = get<int>(j, "overlap");
  if (!j.at("rolloff").is_null()) c.filter.rolloff = number_from_json(j.at("rolloff"), "rolloff");
  const auto systems = get<std::vector<std::string>>(j, "systems");
  for (std::size_t i = 0; i < systems.size(); ++i) {
    auto s = parse_system_spec(systems[i], c.filter);
    if (s.is_fbmc() && i < explicit_filter.size() && !explicit_filter[i]) {
      s.filter = c.filter.filter;
      s.overlap = c.filter.overlap;
      s.rolloff = c.filter.rolloff;
    }
    c.systems.push_back(s);
  }
  c.num_subcarriers = get<int>(j, "num_subcarriers");
  c.guard_left = get<int>(j, "guard_left");
  c.guard_right = get<int>(j, "guard_right");
  c.symbols_per_frame = get<int>(j, "symbols_per_frame");
  c.bandwidth = get<double>(j, "bandwidth");
  c.modulation = get<int>(j, "modulation");
  c.channel = get<std::string>(j, "channel");
  c.channel_file = get<std::string>(j, "channel_file");
  if (!j.at("xpd_db").is_null()) c.xpd_db = number_from_json(j.at("xpd_db"), "xpd_db");
  if (!j.at("cp").is_null()) {
    const auto v = get<std::vector<int>>(j, "cp");
    if (v.size() != 2) throw ConfigError("'cp' must be [numerator, denominator]");
    c.cp = std::make_pair(v[0], v[1]);
  }
  c.wola_rolloff = get<double>(j, "wola_rolloff");
  const auto eq = lower(get<std::string>(j, "equalizer"));
  if (eq == "ls" || eq == "ls_dft")
    c.equalizer = EstimateMethod::LsDft;
  else if (eq == "pck")
    c.equalizer = EstimateMethod::Pck;
  else
    throw ConfigError("equalizer must be 'ls' or 'pck'");
  c.pilots = get<bool>(j, "pilots");
  c.pilot_count = get<int>(j, "pilot_count");
  c.pilot_period = get<int>(j, "pilot_period");
  c.eb_n0_db = number_from_json(j.at("eb_n0_db"), "eb_n0_db");
  c.theta_deg = get<double>(j, "theta_deg");
  c.cfo = get<double>(j, "cfo");
  c.cto = get<double>(j, "cto");
  c.genie_cancel = get<bool>(j, "genie_cancel");
  const auto& sw = j.at("sweep");
  c.sweep = parse_sweep_variable(get<std::string>(sw, "variable"));
  c.values.clear();
  if (!sw.at("values").is_array()) throw ConfigError("'sweep.values' must be an array");
  for (const auto& v : sw.at("values")) c.values.push_back(number_from_json(v, "sweep.values"));
  c.frames = get<std::uint64_t>(j, "frames");
  c.seed = get<std::uint64_t>(j, "seed");
  const auto& p = j.at("psd");
  c.psd.frames = get<std::size_t>(p, "frames");
  c.psd.segment_length = get<std::size_t>(p, "segment_length");
  c.psd.overlap = get<double>(p, "overlap");
  c.psd.oob_guard = get<double>(p, "oob_guard");
  c.psd.truncate = get<bool>(p, "truncate");
  return c;
}

// A system string names its filter when it has more than one field.
std::vector<bool> filter_flags(const json& systems) {
  std::vector<bool> flags;
  for (const auto& s : systems) flags.push_back(s.is_string() && s.get<std::string>().find(':') != std::string::npos);
  return flags;
}

// Specs of `base` whose filter equals the default are treated as implicit so
// a later `filter` change still reaches them.
std::vector<bool> implicit_flags(const ExperimentConfig& base) {
  std::vector<bool> flags;
  for (const auto& s : base.systems)
    flags.push_back(!(s.filter == base.filter.filter && s.overlap == base.filter.overlap &&
                      s.rolloff == base.filter.rolloff));
  return flags;
}

ExperimentConfig apply_patch(const ExperimentConfig& base, const json& patch) {
  json doc = to_json_doc(base);
  overlay(doc, patch, "");
  const auto flags = patch.contains("systems") ? filter_flags(patch.at("systems")) : implicit_flags(base);
  try {
    return from_json_doc(doc, flags);
  } catch (const UnsupportedDesign& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, ExperimentConfig base) {
  json patch;
  try {
    patch = json::parse(json_text, nullptr, true, true);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return apply_patch(base, patch);
}

std::string config_to_json(const ExperimentConfig& cfg) { return to_json_doc(cfg).dump(); }

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("override must look like key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json patch = json::object();
  json* slot = &patch;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) slot = &(*slot)[parts[i]];
  (*slot)[parts.back()] = value;
  cfg = apply_patch(cfg, patch);
}

std::string config_fingerprint(const ExperimentConfig& cfg) {
  const auto text = config_to_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dpfbmc

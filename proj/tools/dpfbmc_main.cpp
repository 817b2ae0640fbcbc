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


// dpfbmc: command line front end for the experiment suite.
//
//   dpfbmc ber      --config cfg.json --out-dir out
//   dpfbmc psd      --out-dir out
//   dpfbmc offsets  --variable cto --out-dir out
//   dpfbmc tables   --out-dir out
//   dpfbmc table    --filter srrc --k 8 --dn 2 --dm 3 --out table.csv
//   dpfbmc filter-export --filter phydyas --k 4 --n 512 --out h.csv
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dpfbmc/experiment.hpp"
#include "dpfbmc/interference.hpp"
#include "dpfbmc/prototype_filter.hpp"

namespace fs = std::filesystem;
using namespace dpfbmc;

namespace {

struct RunArgs {
  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> frames;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  std::vector<std::string> overrides;
  bool quiet = false;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "JSON configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", a.out_dir, "directory for CSV and SVG artifacts");
  cmd->add_option("--frames", a.frames, "frames per sweep point");
  cmd->add_option("--seed", a.seed, "master seed");
  cmd->add_option("--workers", a.workers, "worker threads (0: all cores)");
  cmd->add_option("--set", a.overrides, "override a configuration key, key=value")->allow_extra_args(false);
  cmd->add_flag("--quiet", a.quiet, "no progress output");
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig load_config(ExperimentConfig cfg, const RunArgs& a) {
  if (!a.config.empty()) cfg = parse_config(slurp(a.config), cfg);
  for (const auto& o : a.overrides) apply_override(cfg, o);
  if (a.frames) cfg.frames = *a.frames;
  if (a.seed) cfg.seed = *a.seed;
  cfg.validate();
  return cfg;
}

fs::path prepare_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write " + p.string());
  return os;
}

RunOptions run_options(const RunArgs& a) {
  RunOptions opt;
  opt.workers = a.workers;
  if (!a.quiet)
    opt.progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % std::max<std::size_t>(1, total / 20) == 0)
        std::cerr << "\r  " << done << "/" << total << " frames" << (done == total ? "\n" : "") << std::flush;
    };
  return opt;
}

void emit_sweep(const ResultTable& t, const fs::path& dir, const std::string& stem) {
  {
    auto os = open_out(dir / (stem + ".csv"));
    write_csv(os, t);
  }
  {
    auto os = open_out(dir / (stem + ".svg"));
    write_svg(os, t, "ber", true);
  }
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << " and " << (dir / (stem + ".svg")).string() << '\n';
}

int run_ber(const RunArgs& a) {
  const auto cfg = load_config(default_config("ber"), a);
  const auto dir = prepare_dir(a.out_dir);
  emit_sweep(run_ber_sweep(cfg, run_options(a)), dir, "ber");
  return 0;
}

int run_offsets(const RunArgs& a, const std::string& variable) {
  auto cfg = default_config("offsets");
  if (variable == "cto") {
    cfg.sweep = SweepVariable::Cto;
    cfg.values = {0.0, 0.005, 0.01, 0.02, 0.03, 0.04, 0.05};
  }
  const auto base = load_config(cfg, a);
  const auto dir = prepare_dir(a.out_dir);
  emit_sweep(run_offset_sweep(base, run_options(a)), dir, "offsets_" + to_string(base.sweep));
  return 0;
}

int run_psd_cmd(const RunArgs& a) {
  const auto cfg = load_config(default_config("psd"), a);
  const auto dir = prepare_dir(a.out_dir);
  const auto rep = run_psd(cfg);
  {
    auto os = open_out(dir / "psd.csv");
    os << "# dpfbmc " << kVersion << "\n# fingerprint=" << rep.oob.fingerprint << "\n# config=" << rep.oob.config_json
       << '\n';
    write_psd_csv(os, rep.traces);
  }
  {
    auto os = open_out(dir / "psd_oob.csv");
    write_csv(os, rep.oob);
  }
  {
    ResultTable plot;
    plot.sweep_variable = "frequency (subcarrier spacings)";
    for (const auto& [name, p] : rep.traces)
      for (std::size_t i = 0; i < p.frequency.size(); ++i)
        plot.rows.push_back({p.frequency[i], name, "psd_db", std::max(p.density_db[i], -120.0)});
    auto os = open_out(dir / "psd.svg");
    write_svg(os, plot, "psd_db", false);
  }
  for (const auto& r : rep.oob.rows) std::cout << r.system << ": out-of-band " << r.value << " dB\n";
  std::cout << "wrote " << (dir / "psd.csv").string() << '\n';
  return 0;
}

int run_tables(const std::string& out_dir, int n) {
  const auto text = run_table_report(n);
  std::cout << text;
  if (!out_dir.empty()) {
    const auto dir = prepare_dir(out_dir);
    auto os = open_out(dir / "tables.md");
    os << text;
  }
  return 0;
}

struct FilterArgs {
  std::string filter = "srrc";
  int k = 4;
  int n = 512;
  std::optional<double> alpha;
  std::string out;
};

void add_filter_options(CLI::App* cmd, FilterArgs& f) {
  cmd->add_option("--filter", f.filter, "srrc, phydyas or iota");
  cmd->add_option("--k", f.k, "overlapping factor K");
  cmd->add_option("--n", f.n, "number of subcarriers N");
  cmd->add_option("--alpha", f.alpha, "SRRC roll-off (default 2/K)");
  cmd->add_option("--out", f.out, "output file (stdout when omitted)");
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  auto os = open_out(out);
  os << text;
}

int run_table(const FilterArgs& f, int dn, int dm, const std::string& format) {
  const auto filter = design_filter(parse_filter_kind(f.filter), f.k, f.n, f.alpha);
  const auto t = localization_table(filter, dn, dm);
  emit(f.out, render_table(t, format == "md" ? TableFormat::Markdown : TableFormat::Csv));
  return 0;
}

int run_filter_export(const FilterArgs& f) {
  const auto filter = design_filter(parse_filter_kind(f.filter), f.k, f.n, f.alpha);
  std::ostringstream os;
  write_filter_csv(os, filter);
  emit(f.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-polarization FBMC simulation suite"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunArgs ber_args, psd_args, off_args;
  auto* ber = app.add_subcommand("ber", "BER sweep over Eb/N0, XPD or polarization mismatch");
  add_run_options(ber, ber_args);
  auto* psd = app.add_subcommand("psd", "power spectral densities and out-of-band power");
  add_run_options(psd, psd_args);
  auto* off = app.add_subcommand("offsets", "BER versus carrier frequency or timing offset");
  add_run_options(off, off_args);
  std::string variable = "cfo";
  off->add_option("--variable", variable, "cfo or cto")->check(CLI::IsMember({"cfo", "cto"}));

  std::string tables_dir;
  int tables_n = 512;
  auto* tables = app.add_subcommand("tables", "the four localization tables against the published values");
  tables->add_option("--out-dir", tables_dir, "directory for tables.md");
  tables->add_option("--n", tables_n, "number of subcarriers N");

  FilterArgs table_args;
  int dn = 2, dm = 3;
  std::string format = "csv";
  auto* table = app.add_subcommand("table", "one localization table");
  add_filter_options(table, table_args);
  table->add_option("--dn", dn, "subcarrier half-width");
  table->add_option("--dm", dm, "symbol half-width");
  table->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

  FilterArgs export_args;
  auto* fexport = app.add_subcommand("filter-export", "prototype filter coefficients as CSV");
  add_filter_options(fexport, export_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*ber) return run_ber(ber_args);
    if (*psd) return run_psd_cmd(psd_args);
    if (*off) return run_offsets(off_args, variable);
    if (*tables) return run_tables(tables_dir, tables_n);
    if (*table) return run_table(table_args, dn, dm, format);
    if (*fexport) return run_filter_export(export_args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedDesign& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

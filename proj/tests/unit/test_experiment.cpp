#include <cmath>
#include <sstream>

#include "doctest.h"
#include "dpfbmc/experiment.hpp"
#include "oracles.hpp"

using namespace dpfbmc;

namespace {

std::string csv(const ResultTable& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

ExperimentConfig small_config() {
  auto c = default_config("ber");
  c.num_subcarriers = 64;
  c.guard_left = 4;
  c.guard_right = 3;
  c.symbols_per_frame = 8;
  c.pilot_count = 6;
  c.frames = 6;
  c.values = {4, 12};
  c.filter.filter = FilterKind::PHYDYAS;
  c.filter.overlap = 4;
  c.systems = {parse_system_spec("cp_ofdm", c.filter), parse_system_spec("fbmc", c.filter),
               parse_system_spec("dp_fbmc_s1", c.filter), parse_system_spec("dp_fbmc_s2", c.filter)};
  return c;
}

}  // namespace

TEST_CASE("system specs") {
  SystemSpec d;
  d.filter = FilterKind::PHYDYAS;
  d.overlap = 4;
  const auto a = parse_system_spec("dp_fbmc_s3:srrc:8", d);
  CHECK(a.kind == SystemKind::DpFbmcS3);
  CHECK(a.structure() == DpStructure::III);
  CHECK(a.label() == "dp_fbmc_s3/srrc8");
  CHECK(parse_system_spec(a.spec_string(), d).label() == a.label());
  CHECK(parse_system_spec("fbmc", d).label() == "fbmc/phydyas4");
  CHECK(parse_system_spec("cp_ofdm_wola", d).label() == "cp_ofdm_wola");
  CHECK_THROWS_AS(parse_system_spec("cp_ofdm:srrc:4", d), ConfigError);
  CHECK_THROWS_AS(parse_system_spec("ofdm", d), ConfigError);
  CHECK_THROWS_AS(parse_system_spec("fbmc:gauss", d), ConfigError);
}

TEST_CASE("configuration defaults and parsing") {
  const auto c = default_config("ber");
  CHECK(c.num_subcarriers == 512);
  CHECK(c.symbols_per_frame == 16);
  CHECK(c.bandwidth == 10e6);
  CHECK(c.frames == 200);
  CHECK(c.resolved_xpd_db() == 10.0);
  CHECK(default_xpd_db("ag_los") == 15.0);
  CHECK(default_xpd_db("vehicular_b") == 3.0);
  CHECK(std::isinf(default_xpd_db("awgn")));
  CHECK(default_cp("pedestrian_b") == std::pair{1, 16});
  CHECK(default_config("offsets").bandwidth == 5e6);
  CHECK_THROWS_AS(default_config("dance"), ConfigError);

  const auto p = parse_config(R"({"channel": "vehicular_b", "sweep": {"variable": "xpd_db", "values": [1, 5, "inf"]},
                                  "filter": "phydyas", "overlap": 4})");
  CHECK(p.resolved_xpd_db() == 3.0);
  CHECK(p.sweep == SweepVariable::Xpd);
  CHECK(std::isinf(p.values.back()));
  CHECK(p.systems[1].label() == "fbmc/phydyas4");
  CHECK(parse_config(config_to_json(p)).systems[1].label() == "fbmc/phydyas4");
  CHECK(config_to_json(parse_config(config_to_json(p))) == config_to_json(p));

  CHECK_THROWS_AS(parse_config(R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sweep": {"step": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"equalizer": "mmse"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"filter": "iota", "overlap": 2})").validate(), ConfigError);
}

TEST_CASE("configuration overrides and fingerprint") {
  auto c = default_config("ber");
  const auto fp = config_fingerprint(c);
  CHECK(fp.size() == 16);
  apply_override(c, "frames=12");
  apply_override(c, "sweep.values=[0,3]");
  apply_override(c, "channel=awgn");
  apply_override(c, "overlap=4");
  CHECK(c.frames == 12);
  CHECK(c.values == std::vector<double>{0, 3});
  CHECK(c.channel == "awgn");
  CHECK(c.systems[1].overlap == 4);
  CHECK(config_fingerprint(c) != fp);
  CHECK_THROWS_AS(apply_override(c, "frames"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "nope=1"), ConfigError);
}

TEST_CASE("configuration validation") {
  auto c = small_config();
  c.validate();
  auto bad = c;
  bad.values.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.sweep = SweepVariable::Cfo;
  bad.values = {0.6};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.pilots = false;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.systems.push_back(parse_system_spec("cp_ofdm_wola", c.filter));
  bad.wola_rolloff = 0.2;  // 13 samples over a 2-sample prefix
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("noiseless frames decode without errors") {
  auto c = small_config();
  c.channel = "awgn";
  c.equalizer = EstimateMethod::Pck;
  c.systems.push_back(parse_system_spec("dp_fbmc_s3", c.filter));
  const Simulator sim(c);
  auto fc = sim.conditions_at(0.0);
  fc.eb_n0_db = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sim.num_systems(); ++s) {
    const auto o = sim.run_frame(s, 0, fc);
    CHECK(o.ber.bits == sim.info_bits_per_frame());
    CHECK(o.ber.bit_errors == 0);
    CHECK(o.sinr_db() > 30.0);
  }
  // every system carries the same information bits
  CHECK(sim.info_bits_per_frame() == (56 * 8 - 6 * 2) * 4);
}

TEST_CASE("qpsk on awgn follows the Q function") {
  auto c = small_config();
  c.channel = "awgn";
  c.modulation = 4;
  c.equalizer = EstimateMethod::Pck;
  c.pilots = false;
  c.systems = {parse_system_spec("fbmc", c.filter)};
  c.values = {2.0};
  c.frames = 60;
  const auto t = run_ber_sweep(c, {1});
  const auto r = t.select("fbmc/phydyas4", "ber").at(0);
  const double p = oracle::qfunc(std::sqrt(2.0 * std::pow(10.0, 0.2)));
  CHECK(std::abs(r.value - p) < 3.0 * std::sqrt(p * (1 - p) / r.bits));
  CHECK(t.select("theory_qpsk_awgn", "ber").at(0).value == doctest::Approx(p).epsilon(1e-9));
}

TEST_CASE("results do not depend on the number of workers") {
  const auto c = small_config();
  const auto one = csv(run_ber_sweep(c, {1}));
  CHECK(one == csv(run_ber_sweep(c, {4})));
  CHECK(one == csv(run_ber_sweep(c, {8})));
  CHECK(one.find("sweep_value,system,metric,value,ci_halfwidth,bits,frames,seed\n") != std::string::npos);
  CHECK(one.rfind("# dpfbmc 0.1.0\n# fingerprint=" + config_fingerprint(c), 0) == 0);
}

TEST_CASE("higher eb/n0 lowers the error rate") {
  auto c = small_config();
  c.equalizer = EstimateMethod::Pck;
  c.values = {0, 20};
  const auto t = run_ber_sweep(c, {1});
  for (const auto& sys : t.systems()) {
    const auto rows = t.select(sys, "ber");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].value < rows[0].value);
  }
}

TEST_CASE("offset sweeps need awgn and an offset variable") {
  auto c = default_config("offsets");
  c.channel = "pedestrian_a";
  CHECK_THROWS_AS(run_offset_sweep(c), ConfigError);
  c = default_config("offsets");
  c.sweep = SweepVariable::EbN0;
  CHECK_THROWS_AS(run_offset_sweep(c), ConfigError);
}

TEST_CASE("psd report") {
  auto c = default_config("psd");
  c.num_subcarriers = 64;
  c.guard_left = 4;
  c.guard_right = 3;
  c.symbols_per_frame = 8;
  c.cp = std::pair{1, 8};
  c.wola_rolloff = 0.0625;
  c.psd.frames = 8;
  const auto r = run_psd(c);
  REQUIRE(r.traces.size() == c.systems.size());
  REQUIRE(r.oob.rows.size() == c.systems.size());
  const auto again = run_psd(c);
  for (std::size_t i = 0; i < r.traces.size(); ++i) {
    CHECK(r.traces[i].first == c.systems[i].label());
    CHECK(r.traces[i].second.density == again.traces[i].second.density);
    CHECK(r.oob.rows[i].metric == "oob_db");
    CHECK(r.oob.rows[i].value < -10.0);
  }
}

TEST_CASE("table report and plots") {
  const auto rep = run_table_report(512);
  CHECK(rep.find("## Table 1: IOTA K=4") != std::string::npos);
  CHECK(rep.find("## Table 4: SRRC K=8") != std::string::npos);
  CHECK(rep.find("max |diff|") != std::string::npos);

  ResultTable t;
  t.sweep_variable = "eb_n0_db";
  t.rows = {{0, "a", "ber", 0.1}, {5, "a", "ber", 0.01}, {0, "b", "ber", 0.2}, {5, "b", "ber", 0.0}};
  std::ostringstream os;
  write_svg(os, t, "ber", true);
  const auto svg = os.str();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find(">a</text>") != std::string::npos);
}

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "dpfbmc/channel.hpp"
#include "oracles.hpp"

using namespace dpfbmc;

namespace {

Waveform random_waveform(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Waveform w;
  w.sample_rate = 10e6;
  for (std::size_t i = 0; i < n; ++i) w.samples.push_back(complex_normal(rng, 1.0));
  return w;
}

// sum_i w_i (tau_i - mean)^2 / sum w, written out independently
double rms_oracle(std::vector<std::pair<double, double>> taps) {
  double s0 = 0, s1 = 0;
  for (auto [t, p] : taps) {
    s0 += std::pow(10, p / 10);
    s1 += std::pow(10, p / 10) * t;
  }
  const double mean = s1 / s0;
  double v = 0;
  for (auto [t, p] : taps) v += std::pow(10, p / 10) * (t - mean) * (t - mean);
  return std::sqrt(v / s0);
}

}  // namespace

TEST_CASE("builtin profiles") {
  const auto ag = builtin_profile("ag_los");
  REQUIRE(ag.taps.size() == 3);
  CHECK(ag.taps[1].delay_ns == 45);
  CHECK(ag.taps[2].power_db == -22.3);
  const auto vb = builtin_profile("vehicular_b");
  CHECK(vb.taps.size() == 6);
  CHECK(vb.taps[0].power_db == -2.5);
  const auto aw = builtin_profile("awgn");
  CHECK(aw.taps.size() == 1);
  CHECK(aw.taps[0].fading == Fading::None);
  CHECK(rms_delay_spread(aw) == 0.0);
  CHECK_THROWS_AS(builtin_profile("vehicular_a"), ConfigError);
}

TEST_CASE("rms delay spread matches the declared values") {
  CHECK(rms_delay_spread(builtin_profile("ag_los")) == doctest::Approx(18.0).epsilon(0.5 / 18));
  CHECK(rms_delay_spread(builtin_profile("ag_los")) == doctest::Approx(rms_oracle({{0, 0}, {45, -12}, {200, -22.3}})));
  CHECK(rms_delay_spread(builtin_profile("pedestrian_a")) == doctest::Approx(46.0).epsilon(2.0 / 46));
  for (const auto& name : builtin_profile_names()) {
    const auto p = builtin_profile(name);
    if (p.declared_rms_ns > 0) CHECK(rms_delay_spread(p) == doctest::Approx(p.declared_rms_ns).epsilon(0.05));
  }
}

TEST_CASE("profile csv loading") {
  std::istringstream is("tau_ns,power_db,fading,k_rice_db\n0,0,ricean,10\n110,-9.7,rayleigh,\n# comment\n190,-19.2,rayleigh,0\n");
  const auto p = load_profile_csv(is, "custom");
  REQUIRE(p.taps.size() == 3);
  CHECK(p.taps[0].fading == Fading::Ricean);
  CHECK(p.taps[0].k_rice_db == 10);
  CHECK(p.taps[2].delay_ns == 190);
  std::istringstream bad("10,0,rayleigh\n5,0,rayleigh\n");
  CHECK_THROWS_AS(load_profile_csv(bad, "bad"), ConfigError);
  std::istringstream junk("abc,def\n");
  CHECK_THROWS_AS(load_profile_csv(junk, "junk"), ConfigError);
}

TEST_CASE("quantized pdp merges sub-sample taps") {
  const auto pdp = quantized_pdp(builtin_profile("ag_los"), 10e6);
  REQUIRE(pdp.size() == 3);  // 0, 45 and 200 ns -> samples 0, 0, 2
  double total = 0;
  for (double v : pdp) total += v;
  CHECK(total == doctest::Approx(1.0));
  CHECK(pdp[1] == 0.0);
  CHECK(pdp[0] == doctest::Approx((1 + std::pow(10, -1.2)) / (1 + std::pow(10, -1.2) + std::pow(10, -2.23))));
}

TEST_CASE("xpd construction") {
  const auto p = builtin_profile("pedestrian_a");
  const auto inf = realize_channel(p, std::numeric_limits<double>::infinity(), 10e6, 1);
  for (auto v : inf.hv) CHECK(v == cplx{});
  for (auto v : inf.vh) CHECK(v == cplx{});

  Rng rng(42);
  double hh = 0, vv = 0, hv = 0, vh = 0;
  const int R = 10000;
  for (int r = 0; r < R; ++r) {
    const auto ch = realize_channel(p, 3.0, 10e6, rng);
    for (auto v : ch.hh) hh += std::norm(v);
    for (auto v : ch.vv) vv += std::norm(v);
    for (auto v : ch.hv) hv += std::norm(v);
    for (auto v : ch.vh) vh += std::norm(v);
  }
  const double target = std::pow(10, 0.3);
  CHECK(hh / vh == doctest::Approx(target).epsilon(0.05));
  CHECK(vv / hv == doctest::Approx(target).epsilon(0.05));
  CHECK(hh / R == doctest::Approx(1.0).epsilon(0.01));
  CHECK(vv / R == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(realize_channel(p, std::nan(""), 10e6, 1), DomainError);

  // paired seeds: the co-polarized taps do not depend on the XPD
  const auto weak = realize_channel(p, 3.0, 10e6, 1);
  CHECK(weak.hh == inf.hh);
  CHECK(weak.vv == inf.vv);
}

TEST_CASE("ricean tap moments") {
  // single Ricean tap at K = 30 dB: scattered power is 1/(1 + 1000)
  ChannelProfile p{"one", {{0, 0, Fading::Ricean, 30}}, 0};
  Rng rng(7);
  double m2 = 0, m4 = 0;
  const int R = 20000;
  for (int r = 0; r < R; ++r) {
    const double a = std::norm(realize_channel(p, 20, 10e6, rng).hh[0]);
    m2 += a;
    m4 += a * a;
  }
  m2 /= R;
  m4 /= R;
  // Var|h|^2 = (2K + 1) / (K + 1)^2 for unit mean power
  const double k = 1000;
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.005));
  CHECK(m4 - m2 * m2 == doctest::Approx((2 * k + 1) / ((k + 1) * (k + 1))).epsilon(0.1));
}

TEST_CASE("dual-polarization channel application") {
  PolarizedWaveform pw{random_waveform(300, 1), random_waveform(300, 2)};
  DualPolChannelRealization id;
  id.hh = {1.0};
  id.vv = {1.0};
  id.hv = {0.0};
  id.vh = {0.0};
  const auto same = apply_dual_pol_channel(pw, id);
  CHECK(same.h.samples == pw.h.samples);
  CHECK(same.v.samples == pw.v.samples);

  DualPolChannelRealization leak;
  leak.hh = {0.0};
  leak.vv = {0.0};
  leak.hv = {0.0};
  leak.vh = {0.0, cplx(0.3, -0.2), 0.0, cplx(0.1, 0.1)};
  const auto only = apply_dual_pol_channel(pw, leak);
  const auto ref = convolve_same(pw.v.samples, leak.vh);
  for (std::size_t k = 0; k < 300; ++k) CHECK(std::abs(only.h.samples[k] - ref[k]) < 1e-15);
  CHECK(std::abs(only.h.samples[5] - (cplx(0.3, -0.2) * pw.v.samples[4] + cplx(0.1, 0.1) * pw.v.samples[2])) < 1e-15);

  const auto ch = realize_channel(builtin_profile("pedestrian_b"), 5.0, 10e6, 3);
  PolarizedWaveform a{pw.h, pw.v}, b{pw.h, pw.v};
  for (auto& s : a.v.samples) s = 0.0;
  for (auto& s : b.h.samples) s = 0.0;
  const auto ra = apply_dual_pol_channel(a, ch), rb = apply_dual_pol_channel(b, ch), r = apply_dual_pol_channel(pw, ch);
  double worst = 0;
  for (std::size_t k = 0; k < 300; ++k) {
    worst = std::max(worst, std::abs(ra.h.samples[k] + rb.h.samples[k] - r.h.samples[k]));
    worst = std::max(worst, std::abs(ra.v.samples[k] + rb.v.samples[k] - r.v.samples[k]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("angular mismatch") {
  PolarizedWaveform pw{random_waveform(64, 3), random_waveform(64, 4)};
  const auto z = apply_angular_mismatch(pw, 0.0);
  CHECK(z.h.samples == pw.h.samples);
  const auto r = apply_angular_mismatch(pw, 30.0);
  CHECK(std::abs(r.h.samples[7] - (std::cos(oracle::pi / 6) * pw.h.samples[7] + 0.5 * pw.v.samples[7])) < 1e-15);
  CHECK_THROWS_AS(apply_angular_mismatch(pw, 90.0), DomainError);
}

TEST_CASE("awgn calibration") {
  Waveform w;
  w.samples.assign(1000000, cplx{});
  Rng rng(5);
  const auto n = add_noise(w, 0.37, rng);
  double p = 0;
  for (auto s : n.samples) p += std::norm(s);
  CHECK(p / 1e6 == doctest::Approx(0.37).epsilon(0.02));
  CHECK(awgn_variance(100.0, 50.0, 0.0) == doctest::Approx(2.0));
  CHECK(awgn_variance(100.0, 50.0, 10.0) == doctest::Approx(0.2));
  CHECK(awgn_variance(100.0, 50.0, std::numeric_limits<double>::infinity()) == 0.0);
  const auto x = random_waveform(100, 9);
  CHECK(apply_awgn(x, std::numeric_limits<double>::infinity(), 200, rng).samples == x.samples);
  CHECK_THROWS_AS(apply_awgn(w, 5.0, 100, rng), DomainError);
}

TEST_CASE("cfo and cto") {
  const auto x = random_waveform(128, 10);
  CHECK(apply_cfo(x, 0.0, 64).samples == x.samples);
  const auto c = apply_cfo(x, 0.25, 64);
  CHECK(std::abs(c.samples[10] - x.samples[10] * std::exp(cplx(0, 2 * oracle::pi * 0.25 * 10 / 64))) < 1e-14);
  CHECK_THROWS_AS(apply_cfo(x, 0.5, 64), DomainError);
  const auto late = apply_cto(x, 3);
  CHECK(late.samples[0] == x.samples[3]);
  CHECK(late.samples[127] == cplx{});
  const auto early = apply_cto(x, -2);
  CHECK(early.samples[0] == cplx{});
  CHECK(early.samples[2] == x.samples[0]);
  CHECK_THROWS_AS(apply_cto(x, 128), DomainError);
}

TEST_CASE("substreams are stable and distinct") {
  CHECK(substream_seed(1, 2, StreamRole::Bits) == substream_seed(1, 2, StreamRole::Bits));
  CHECK(substream_seed(1, 2, StreamRole::Bits) != substream_seed(1, 3, StreamRole::Bits));
  CHECK(substream_seed(1, 2, StreamRole::Bits) != substream_seed(1, 2, StreamRole::Channel));
  CHECK(substream_seed(1, 2, StreamRole::NoiseH, 0) != substream_seed(1, 2, StreamRole::NoiseH, 1));
}

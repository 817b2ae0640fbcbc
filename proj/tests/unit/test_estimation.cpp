#include <cmath>
#include <random>

#include "doctest.h"
#include "dpfbmc/estimation.hpp"
#include "oracles.hpp"

using namespace dpfbmc;

namespace {

OqamGrid random_pam(std::size_t N, std::size_t M, const std::vector<bool>& mask, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, 3);
  const double lv[4] = {-3, -1, 1, 3};
  OqamGrid a(N, M);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t m = 0; m < M; ++m) a(n, m) = mask[n] ? lv[d(rng)] / std::sqrt(10.0) : 0.0;
  return a;
}

QamGrid random_qpsk(std::size_t N, std::size_t T, const std::vector<bool>& mask, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, 1);
  const double s = 1.0 / std::sqrt(2.0);
  QamGrid g(N, T);
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t t = 0; t < T; ++t)
      if (mask[n]) g(n, t) = {d(rng) ? s : -s, d(rng) ? s : -s};
  return g;
}

}  // namespace

TEST_CASE("default pilot layout geometry") {
  SystemConfig cfg;
  const auto layout = make_pilot_layout(cfg, 16);
  REQUIRE(layout.subcarriers.size() == 30);
  CHECK(layout.instants == std::vector<int>{1, 5, 9, 13});
  CHECK(signed_frequency(layout.subcarriers.front(), 512) == -218);
  const auto mask = cfg.active_mask();
  for (std::size_t i = 0; i < 30; ++i) {
    const int nu = signed_frequency(layout.subcarriers[i], 512);
    CHECK(nu == -218 + 15 * static_cast<int>(i));
    CHECK(nu != 0);
    CHECK(mask[layout.subcarriers[i]]);
  }
  for (std::size_t i = 0; i < layout.count(); ++i) {
    CHECK(std::abs(std::abs(layout.ofdm_values[i]) - 1.0) < 1e-12);
    CHECK(std::abs(layout.fbmc_values[i]) == 1.0);
  }
  const auto slots = data_slots(layout, mask, 16);
  std::size_t data = 0;
  for (auto v : slots.data()) data += v;
  CHECK(data == 478 * 16 - 30 * 4);
}

TEST_CASE("pilot layout round trips through json") {
  SystemConfig cfg;
  const auto layout = make_pilot_layout(cfg, 16, 30, 4, 1, 1234);
  const auto back = pilot_layout_from_json(pilot_layout_to_json(layout));
  CHECK(back.subcarriers == layout.subcarriers);
  CHECK(back.instants == layout.instants);
  CHECK(back.seed == layout.seed);
  CHECK(back.fbmc_values == layout.fbmc_values);
  CHECK(back.ofdm_values == layout.ofdm_values);
  CHECK_THROWS_AS(pilot_layout_from_json("{\"num_subcarriers\": 3}"), ConfigError);
}

TEST_CASE("pilot layout rejects impossible requests") {
  SystemConfig cfg;
  CHECK_THROWS_AS(make_pilot_layout(cfg, 16, 1000), ConfigError);
  CHECK_THROWS_AS(make_pilot_layout(cfg, 16, 30, 0), ConfigError);
  CHECK(make_pilot_layout(cfg, 16, 0).empty());
}

TEST_CASE("every structure spends the same pilot budget") {
  SystemConfig cfg;
  const auto layout = make_pilot_layout(cfg, 16);
  const auto conv = fbmc_pilot_slots(layout);
  CHECK(conv.size() == 2 * layout.count());
  for (auto s : {DpStructure::I, DpStructure::II, DpStructure::III}) {
    const auto slots = fbmc_pilot_slots(layout, s);
    CHECK(slots.size() == conv.size());
    int h = 0, v = 0;
    for (const auto& p : slots)
      if (!p.aux) (p.pol == Polarization::H ? h : v)++;
    CHECK(h > 0);
    CHECK(v > 0);
    if (s == DpStructure::II) {
      CHECK(h + v == static_cast<int>(layout.count()));
    } else {
      CHECK(h == static_cast<int>(layout.count()));
      CHECK(v == static_cast<int>(layout.count()));
    }
  }
}

TEST_CASE("auxiliary pilot cancels the tabulated interference") {
  SystemConfig cfg;
  const auto f = design_filter(FilterKind::PHYDYAS, 4, 512);
  const auto t = localization_table(f, 2, 2);
  const auto mask = cfg.active_mask();
  auto a = random_pam(512, 32, mask, 7);
  const auto layout = make_pilot_layout(cfg, 16);
  place_pilots(a, layout, mask);
  insert_auxiliary_pilots(a, layout, t);
  const auto box = box_neighborhood(2, 2);
  for (const auto& p : fbmc_pilot_slots(layout)) {
    if (p.aux) continue;
    CHECK(a(p.n, p.m) == p.value);
    CHECK(std::abs(intrinsic_interference(a, t, p.n, p.m, box).imag()) < 1e-6);
  }

  // a lone pilot next to one neighbour: aux value follows from the coefficients
  OqamGrid b(512, 32);
  PilotLayout single = layout;
  single.subcarriers = {layout.subcarriers[10]};
  single.instants = {5};
  single.fbmc_values = {1.0};
  single.fbmc_values2 = {1.0};
  single.ofdm_values = {1.0};
  const int n0 = single.subcarriers[0];
  b(n0 + 1, 10) = 1.0;
  place_pilots(b, single, mask);
  insert_auxiliary_pilots(b, single, t);
  const cplx q_nb = *localization_coefficient(t, 512, n0 + 1, 10, n0, 10);
  const cplx q_aux = *localization_coefficient(t, 512, n0, 11, n0, 10);
  CHECK(b(n0, 11) == doctest::Approx(-q_nb.imag() / q_aux.imag()).epsilon(1e-12));
}

TEST_CASE("auxiliary pilot rejects an uncancellable position") {
  SystemConfig cfg;
  const auto f = design_filter(FilterKind::PHYDYAS, 4, 512);
  const auto t = localization_table(f, 2, 2);
  auto layout = make_pilot_layout(cfg, 16);
  layout.aux_offset = {2, 0};  // Q is zero two subcarriers away at the same instant
  OqamGrid a(512, 32);
  CHECK_THROWS_AS(insert_auxiliary_pilots(a, layout, t), DomainError);
  layout.aux_offset = {0, 1};
  layout.cancel_dm = 3;
  CHECK_THROWS_AS(insert_auxiliary_pilots(a, layout, t), DomainError);
}

TEST_CASE("fbmc pilots come back real after auxiliary cancellation") {
  SystemConfig cfg;
  const auto f = design_filter(FilterKind::PHYDYAS, 4, 512);
  const auto t = localization_table(f, 2, 2);
  const auto mask = cfg.active_mask();
  auto a = random_pam(512, 32, mask, 11);
  const auto layout = make_pilot_layout(cfg, 16);
  place_pilots(a, layout, mask);
  insert_auxiliary_pilots(a, layout, t);
  const auto r = fbmc_demodulate(fbmc_modulate_fast(a, f), f);
  const auto est = ls_estimate_fbmc(r, layout);
  // what is left comes from outside the cancellation box, mostly the
  // (0, +-3) and (+-1, +-3) terms
  const auto wide = localization_table(f, 3, 5);
  const auto outer = box_neighborhood(3, 5);
  double pilot_se = 0.0;
  int pilots = 0;
  for (const auto& p : fbmc_pilot_slots(layout)) {
    if (p.aux || p.m < 5) continue;
    const double leak = intrinsic_interference(a, wide, p.n, p.m, outer).imag();
    CHECK(std::abs(r(p.n, p.m) - cplx(p.value, leak)) < 5e-3);
    pilot_se += leak * leak;
    ++pilots;
  }
  const double pilot_rms = std::sqrt(pilot_se / pilots);
  CHECK(pilot_rms > 0.03);
  double se = 0.0;
  int count = 0;
  for (std::size_t n = 0; n < 512; ++n)
    if (mask[n]) {
      se += std::norm(est.gains(n, 10) - 1.0);
      ++count;
    }
  CHECK(std::sqrt(se / count) < 1.5 * pilot_rms);
}

TEST_CASE("dft interpolation reproduces pilot gains and flat responses") {
  std::vector<int> nus;
  std::vector<cplx> flat, tilt;
  for (int i = 0; i < 30; ++i) {
    nus.push_back(-218 + 15 * i);
    flat.push_back({0.3, -0.7});
    tilt.push_back(std::polar(1.0, 0.01 * i));
  }
  const auto H = dft_interpolate(nus, flat, 512);
  for (const auto& v : H) CHECK(std::abs(v - cplx(0.3, -0.7)) < 1e-12);
  const auto T = dft_interpolate(nus, tilt, 512);
  for (int i = 0; i < 30; ++i) CHECK(std::abs(T[(nus[i] + 512) % 512] - tilt[i]) < 1e-12);
  // outside the comb the nearest pilot is held
  CHECK(T[(-240 + 512) % 512] == T[(-218 + 512) % 512]);

  // uneven spacing falls back to linear interpolation
  const auto L = dft_interpolate({-10, 0, 30}, {1.0, 2.0, 5.0}, 64);
  CHECK(std::abs(L[(-5 + 64) % 64] - 1.5) < 1e-12);
  CHECK(std::abs(L[15] - 3.5) < 1e-12);
  CHECK_THROWS_AS(dft_interpolate({}, {}, 64), ShapeError);
}

TEST_CASE("ls estimate of a two tap channel for cp-ofdm") {
  SystemConfig cfg;
  const auto mask = cfg.active_mask();
  const auto layout = make_pilot_layout(cfg, 16);
  auto g = random_qpsk(512, 16, mask, 3);
  place_pilots(g, layout, mask);
  const std::vector<cplx> taps{{0.9, 0.1}, 0.0, {0.3, -0.2}};
  const auto rx = cp_ofdm_demodulate(apply_channel(cp_ofdm_modulate(g, cfg), taps), cfg);
  const auto est = ls_estimate_ofdm(rx, layout);
  const auto H = frequency_response(taps, 512);
  for (int n : layout.subcarriers)
    for (std::size_t s = 0; s < 16; ++s) CHECK(std::abs(est.gains(n, s) - H[n]) < 1e-9);
  double worst = 0.0;
  for (int nu = -200; nu <= 200; ++nu) worst = std::max(worst, std::abs(est.gains((nu + 512) % 512, 7) - H[(nu + 512) % 512]));
  CHECK(worst < 0.05);
}

TEST_CASE("perfect knowledge equalizes cp-ofdm exactly") {
  SystemConfig cfg;
  const auto mask = cfg.active_mask();
  const auto g = random_qpsk(512, 8, mask, 5);
  const auto ch = realize_channel(builtin_profile("pedestrian_a"), std::numeric_limits<double>::infinity(), 10e6, 99);
  const auto rx = cp_ofdm_demodulate(apply_channel(cp_ofdm_modulate(g, cfg), ch.hh), cfg);
  const auto est = perfect_channel_estimate(ch.hh, 512, 8);
  CHECK(est.method == EstimateMethod::Pck);
  const auto eq = zf_equalize(rx, est);
  for (std::size_t n = 0; n < 512; ++n)
    for (std::size_t s = 0; s < 8; ++s) CHECK(std::abs(eq.values(n, s) - g(n, s)) < 1e-9);
}

TEST_CASE("zf equalization scales and records erasures") {
  ComplexGrid r(2, 2, cplx(2.0, 2.0));
  ChannelEstimate est;
  est.gains = ComplexGrid(2, 2, cplx(0.0, 2.0));
  est.gains(1, 0) = 1e-13;
  const auto eq = zf_equalize(r, est);
  CHECK(std::abs(eq.values(0, 0) - cplx(1.0, -1.0)) < 1e-15);
  CHECK(eq.values(1, 0) == cplx{});
  REQUIRE(eq.erasures.size() == 1);
  CHECK(eq.erasures[0] == std::pair<std::size_t, std::size_t>{1, 0});
  ChannelEstimate bad;
  bad.gains = ComplexGrid(3, 2);
  CHECK_THROWS_AS(zf_equalize(r, bad), ShapeError);
}

TEST_CASE("fbmc offset gain predicts the self term of an isolated symbol") {
  const auto f = design_filter(FilterKind::PHYDYAS, 4, 64);
  for (double cfo : {0.0, 0.07, -0.12})
    for (long cto : {0L, 3L, -5L}) {
      OqamGrid a(64, 12);
      a(9, 5) = 1.0;
      a(60, 6) = -1.0;
      const auto w = apply_cto(apply_cfo(fbmc_modulate_fast(a, f), cfo, 64), cto);
      const auto r = fbmc_demodulate(w, f);
      CHECK(std::abs(r(9, 5) - fbmc_offset_gain(f, 9, 5, cfo, cto)) < 1e-3);
      ChannelEstimate est;
      est.gains = ComplexGrid(64, 12, 1.0);
      apply_offset_gains(est, f, cfo, cto);
      CHECK(std::abs(est.gains(60, 6) - fbmc_offset_gain(f, 60, 6, cfo, cto)) < 1e-12);
    }
  CHECK(std::abs(fbmc_offset_gain(f, 3, 4, 0.0, 0) - 1.0) < 1e-12);
}

TEST_CASE("ofdm offset gain predicts the self term of an isolated symbol") {
  SystemConfig cfg;
  cfg.num_subcarriers = 64;
  cfg.guard_left = 4;
  cfg.guard_right = 3;
  for (double cfo : {0.0, 0.05})
    for (long cto : {0L, -1L, 1L}) {
      QamGrid g(64, 4);
      g(7, 2) = 1.0;
      const auto r = cp_ofdm_demodulate(apply_cto(apply_cfo(cp_ofdm_modulate(g, cfg), cfo, 64), cto), cfg);
      CHECK(std::abs(r(7, 2) - ofdm_offset_gain(cfg, 7, 2, cfo, cto)) < 1e-12);
    }
}

TEST_CASE("genie cross-pol cancellation removes the leakage") {
  const auto f = design_filter(FilterKind::PHYDYAS, 4, 64);
  OqamGrid a(64, 16);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (auto& v : a.data()) v = nd(rng);
  const auto p = dp_split(a, DpStructure::I);
  const auto tx = dp_modulate(p, f);
  const auto ch = realize_channel(builtin_profile("pedestrian_a"), 3.0, 10e6, 4);
  const auto rx = apply_dual_pol_channel(tx, ch);
  const auto clean = xpol_cancel_ideal(rx, ch, tx);
  const auto h_only = apply_channel(tx.h, ch.hh);
  const auto v_only = apply_channel(tx.v, ch.vv);
  double worst = 0.0;
  for (std::size_t k = 0; k < clean.h.size(); ++k) {
    worst = std::max(worst, std::abs(clean.h.samples[k] - h_only.samples[k]));
    worst = std::max(worst, std::abs(clean.v.samples[k] - v_only.samples[k]));
  }
  CHECK(worst < 1e-9);

  const auto ideal = realize_channel(builtin_profile("pedestrian_a"), std::numeric_limits<double>::infinity(), 10e6, 4);
  const auto rx2 = apply_dual_pol_channel(tx, ideal);
  const auto same = xpol_cancel_ideal(rx2, ideal, tx);
  CHECK(same.h.samples == rx2.h.samples);
}

TEST_CASE("dp perfect and ls estimates follow the structure") {
  SystemConfig cfg;
  const auto f = design_filter(FilterKind::PHYDYAS, 4, 512);
  const auto t = localization_table(f, 2, 2);
  const auto wide = localization_table(f, 4, 8);
  const auto mask = cfg.active_mask();
  const auto ch = realize_channel(builtin_profile("pedestrian_a"), 10.0, 10e6, 8);
  for (auto s : {DpStructure::I, DpStructure::II, DpStructure::III}) {
    const auto pck = perfect_channel_estimate(ch, 512, 32, s);
    const auto hh = frequency_response(ch.hh, 512);
    const auto vv = frequency_response(ch.vv, 512);
    for (std::size_t n = 0; n < 512; n += 37)
      for (std::size_t m = 0; m < 32; m += 5)
        CHECK(pck.gains(n, m) == (assigned_polarization(s, n, m) == Polarization::H ? hh[n] : vv[n]));

    auto a = random_pam(512, 48, mask, 21);
    const auto lay = make_pilot_layout(cfg, 24);
    place_pilots(a, lay, mask, s);
    auto p = dp_split(a, s);
    insert_auxiliary_pilots(p, lay, t);
    const auto d = dp_demodulate(dp_modulate(p, f), f, s);
    const auto est = ls_estimate_dp(d, lay, s);
    // without auxiliary symbols the pilot carries its co-polar interference
    const auto co = structure_neighborhoods(s, 4, 8).first;
    int checked = 0;
    for (const auto& ps : fbmc_pilot_slots(lay, s)) {
      if (ps.aux || ps.m < 8 || ps.m > 39) continue;
      const cplx predicted = ps.value + cplx(0.0, 1.0) * intrinsic_interference(p, ps.pol, wide, ps.n, ps.m, co).imag();
      CHECK(std::abs(est.gains(ps.n, ps.m) - predicted / ps.value) < 5e-3);
      ++checked;
    }
    CHECK(checked > 100);
  }
}

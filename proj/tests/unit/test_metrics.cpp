#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dpfbmc/metrics.hpp"
#include "oracles.hpp"

using namespace dpfbmc;

namespace {

Waveform tone(std::size_t len, double cycles_per_sample, double amp = 1.0) {
  Waveform w;
  w.samples.resize(len);
  for (std::size_t k = 0; k < len; ++k) w.samples[k] = std::polar(amp, 2.0 * pi * cycles_per_sample * static_cast<double>(k));
  return w;
}

}  // namespace

TEST_CASE("ber counting") {
  const std::vector<std::uint8_t> a{0, 1, 1, 0, 1, 0, 0, 1};
  std::vector<std::uint8_t> c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = 1 - a[i];
  CHECK(ber_count(a, a).ber() == 0.0);
  CHECK(ber_count(a, c).ber() == 1.0);
  CHECK(ber_count(a, c).bit_errors == 8);
  CHECK_THROWS_AS(ber_count(a, std::vector<std::uint8_t>(3)), ShapeError);
  CHECK_THROWS_AS(BerRecord{}.ber(), DomainError);
}

TEST_CASE("ber records merge associatively") {
  BerRecord x{3, 100, 1}, y{5, 200, 2}, z{0, 50, 1};
  BerRecord l = x, r = y;
  l.merge(y).merge(z);
  r.merge(z);
  BerRecord r2 = x;
  r2.merge(r);
  CHECK(l.bit_errors == r2.bit_errors);
  CHECK(l.bits == r2.bits);
  CHECK(l.frames == 4);
  CHECK(l.ber() == doctest::Approx(8.0 / 350.0));
  CHECK(l.std_error() == doctest::Approx(std::sqrt(l.ber() * (1 - l.ber()) / 350.0)));
}

TEST_CASE("periodogram localizes a subcarrier tone") {
  const int N = 64;
  const auto p = psd_periodogram(tone(N * 40, 10.0 / N), N);
  const auto peak = std::max_element(p.density.begin(), p.density.end()) - p.density.begin();
  CHECK(std::abs(p.frequency[peak] - 10.0) <= static_cast<double>(N) / p.segment_length);
  CHECK(p.density_db[peak] == 0.0);
  CHECK(p.segment_length == 256);
  CHECK(p.segment_step == 128);
  CHECK(p.frequency.front() == -32.0);
  CHECK_THROWS_AS(psd_periodogram(tone(100, 0.1), N), DomainError);
}

TEST_CASE("periodogram of white noise is flat") {
  const int N = 64;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Waveform w;
  w.samples.resize(256 * 160);
  for (auto& s : w.samples) s = {nd(rng), nd(rng)};
  const auto p = psd_periodogram(w, N);
  CHECK(p.segments >= 100);
  double mean_db = 0.0;
  for (double d : p.density_db) mean_db += d;
  mean_db /= static_cast<double>(p.density_db.size());
  for (double d : p.density_db) CHECK(std::abs(d - mean_db) < 1.5);
}

TEST_CASE("out of band power") {
  const int N = 64;
  Waveform w = tone(N * 64, 3.0 / N);
  const auto w2 = tone(N * 64, -5.0 / N);
  for (std::size_t k = 0; k < w.size(); ++k) w.samples[k] += w2.samples[k];
  const auto p = psd_periodogram(w, N);
  CHECK(oob_power(p, 6.0, 2.0) == kOobFloorDb);
  CHECK(oob_power(p, 6.0, 2.0) == oob_power(psd_periodogram(w, N), 6.0, 2.0));
  CHECK_THROWS_AS(oob_power(p, 40.0, 2.0), DomainError);

  std::ostringstream os;
  write_psd_csv(os, {{"a", p}});
  CHECK(os.str().rfind("# estimator=welch window=hann segment=256 step=128\nsystem,frequency,density_db,segments\n", 0) == 0);
}

TEST_CASE("papr ccdf") {
  const auto c = papr_ccdf(tone(1024, 7.0 / 1024), 4);
  CHECK(std::abs(c.peak_db) < 1e-9);
  CHECK(c.ccdf[1] == 0.0);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  Waveform w;
  w.samples.resize(4096);
  for (auto& s : w.samples) s = {nd(rng), nd(rng)};
  const auto g = papr_ccdf(w, 2);
  for (std::size_t i = 1; i < g.ccdf.size(); ++i) CHECK(g.ccdf[i] <= g.ccdf[i - 1]);
  // Rayleigh envelope: P(|x|^2 / mean > 3 dB) = exp(-2)
  CHECK(g.ccdf[30] == doctest::Approx(std::exp(-std::pow(10.0, 0.3))).epsilon(0.05));
  Waveform zero;
  zero.samples.resize(16);
  CHECK_THROWS_AS(papr_ccdf(zero), DomainError);
}

TEST_CASE("closed forms") {
  CHECK(qfunc(0.0) == doctest::Approx(0.5));
  CHECK(qfunc(3.0) == doctest::Approx(oracle::qfunc(3.0)).epsilon(1e-12));
  CHECK(theoretical_ber_qpsk(8.0) == doctest::Approx(1.9091e-4).epsilon(1e-3));
  CHECK(theoretical_ber_qpsk(4.0) == doctest::Approx(1.2501e-2).epsilon(1e-3));
  CHECK(qpsk_ebn0_for_ber(theoretical_ber_qpsk(6.5)) == doctest::Approx(6.5).epsilon(1e-9));
  CHECK(theoretical_sinr_angular(12.0, 0.0) == 12.0);
  CHECK(theoretical_sinr_angular(12.0, 45.0) == doctest::Approx(12.0 - 3.0103).epsilon(1e-4));
  CHECK_THROWS_AS(theoretical_sinr_angular(12.0, 90.0), DomainError);
}

TEST_CASE("measured sinr fits one gain") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  std::vector<cplx> tx(200000), rx(tx.size());
  for (std::size_t i = 0; i < tx.size(); ++i) {
    tx[i] = {nd(rng) > 0 ? 1.0 : -1.0, nd(rng) > 0 ? 1.0 : -1.0};
    rx[i] = cplx(0.5, 1.5) * tx[i] + 0.1 * cplx(nd(rng), nd(rng));
  }
  // signal 2.5 * 2, noise 0.02
  CHECK(measured_sinr_db(tx, rx) == doctest::Approx(10.0 * std::log10(5.0 / 0.02)).epsilon(2e-3));
  std::vector<double> a{1, -1, 1}, b{2, -2, 2};
  CHECK(std::isinf(measured_sinr_db(a, b)));
}

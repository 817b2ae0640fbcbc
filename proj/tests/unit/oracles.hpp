// Independent reference computations used by the tests. Written directly
// from the signal model, without going through library code paths.
#pragma once

#include <cmath>
#include <numbers>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

inline int nu(int n, int N) { return n < N / 2 ? n : n - N; }

inline cplx jpow(long k) {
  static const cplx t[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return t[((k % 4) + 4) % 4];
}

// Q_{n,m}[k] evaluated pointwise.
inline cplx basis(const std::vector<double>& h, int N, int n, int m, long k) {
  const long L = static_cast<long>(h.size());
  const long idx = k - static_cast<long>(m) * N / 2;
  if (idx < 0 || idx >= L) return 0.0;
  const double c = 0.5 * (L - 1);
  return h[idx] * std::exp(cplx(0, 2 * pi * nu(n, N) * (k - c) / N)) * jpow(n + m);
}

// <Q_{n,m}, Q_{n0,m0}> by brute-force summation over the joint support.
inline cplx localization(const std::vector<double>& h, int N, int n, int m, int n0, int m0) {
  const long L = static_cast<long>(h.size());
  const long lo = static_cast<long>(std::max(m, m0)) * N / 2;
  const long hi = static_cast<long>(std::min(m, m0)) * N / 2 + L;
  cplx s = 0.0;
  for (long k = lo; k < hi; ++k) s += basis(h, N, n, m, k) * std::conj(basis(h, N, n0, m0, k));
  return s;
}

inline double energy(const std::vector<double>& h) {
  double e = 0;
  for (double v : h) e += v * v;
  return e;
}

// Gaussian tail function.
// Gaussian tail by composite Simpson integration of the density.
inline double qfunc(double x) {
  const int steps = 200000;
  const double a = x, b = x + 40.0, h = (b - a) / steps;
  auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double s = phi(a) + phi(b);
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * phi(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle

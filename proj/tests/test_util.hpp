#pragma once

// Shared oracles and construction helpers for the test suites. Everything
// here is intentionally independent of the library's fast paths: the DFT is
// the O(n^2) definition, band-limited noise is built by brick-wall spectral
// masking, and gains are measured on interior samples.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "sqkit/fft.hpp"
#include "sqkit/rng.hpp"
#include "sqkit/signal.hpp"

namespace sqtest {

/// O(n^2) reference DFT.
inline std::vector<std::complex<double>> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(t) /
                         static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

/// RMS over the interior after trimming a fraction at each end.
inline double interior_rms(const std::vector<double>& x, double trim = 0.05) {
  const std::size_t lo = static_cast<std::size_t>(trim * static_cast<double>(x.size()));
  const std::size_t hi = x.size() - lo;
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += x[i] * x[i];
  return std::sqrt(acc / static_cast<double>(hi - lo));
}

inline double interior_max(const std::vector<double>& x, double trim = 0.05) {
  const std::size_t lo = static_cast<std::size_t>(trim * static_cast<double>(x.size()));
  const std::size_t hi = x.size() - lo;
  double m = x[lo];
  for (std::size_t i = lo; i < hi; ++i) m = std::max(m, x[i]);
  return m;
}

inline double interior_min(const std::vector<double>& x, double trim = 0.05) {
  const std::size_t lo = static_cast<std::size_t>(trim * static_cast<double>(x.size()));
  const std::size_t hi = x.size() - lo;
  double m = x[lo];
  for (std::size_t i = lo; i < hi; ++i) m = std::min(m, x[i]);
  return m;
}

/// Gaussian noise band-limited by brick-wall spectral masking: every FFT bin
/// outside [f_lo, f_hi] is zeroed, so out-of-band PSD leakage comes only from
/// the analysis window under test. Length is a power of two.
inline sqkit::Signal brickwall_noise(double f_lo, double f_hi, std::size_t n_pow2,
                                     std::uint64_t seed, double sigma = 0.1,
                                     int sample_rate = 48000) {
  sqkit::Xoshiro256ss rng(seed);
  std::vector<sqkit::Complex> buf(n_pow2);
  for (auto& v : buf) v = sqkit::Complex(sigma * rng.normal(), 0.0);
  sqkit::fft_inplace(buf);
  const double df = static_cast<double>(sample_rate) / static_cast<double>(n_pow2);
  for (std::size_t k = 0; k <= n_pow2 / 2; ++k) {
    const double f = df * static_cast<double>(k);
    if (f < f_lo || f > f_hi) {
      buf[k] = sqkit::Complex(0.0, 0.0);
      if (k > 0 && k < n_pow2 / 2) buf[n_pow2 - k] = sqkit::Complex(0.0, 0.0);
    }
  }
  sqkit::fft_inplace(buf, true);
  sqkit::Signal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n_pow2);
  for (std::size_t i = 0; i < n_pow2; ++i) out.samples[i] = buf[i].real();
  return out;
}

/// Raw AM tone without peak normalization: (1 + m cos(2 pi fm t)) sin(2 pi fc t).
inline sqkit::Signal raw_am_tone(double fc, double fm, double m, double duration_s,
                                 int sample_rate = 48000) {
  sqkit::Signal out;
  out.sample_rate = sample_rate;
  const std::size_t n = static_cast<std::size_t>(duration_s * sample_rate);
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    out.samples[i] =
        (1.0 + m * std::cos(2.0 * M_PI * fm * t)) * std::sin(2.0 * M_PI * fc * t);
  }
  return out;
}

}  // namespace sqtest

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/signal.hpp"

namespace sqkit {

using Complex = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place iterative radix-2 Cooley-Tukey. Inverse transform includes the
/// 1/n scaling. Length must be a power of two.
inline void fft_inplace(std::vector<Complex>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (!is_pow2(n)) throw ParamError("fft: length must be a power of two");
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Twiddle table for the largest stage; smaller stages stride through it.
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double ang = sign * 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
    twiddle[k] = Complex(std::cos(ang), std::sin(ang));
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex w = twiddle[k * stride];
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }

  if (inverse) {
    const double inv_n = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv_n;
  }
}

/// One-sided magnitude spectrum of an n-point transform: floor(n/2)+1 bins
/// from 0 to Nyquist.
struct Spectrum {
  std::vector<double> bin_freqs;
  std::vector<double> magnitudes;
};

/// Rectangular-window FFT magnitude with 2/n scaling on interior bins, so a
/// unit sine at an exact bin frequency reads 1.0 there. The signal is
/// truncated or zero-padded to n.
inline Spectrum fft_magnitude(const Signal& signal, std::size_t n) {
  if (!is_pow2(n) || n < 16) throw ParamError("fft_magnitude: n must be a power of two >= 16");
  validate_for_analysis(signal, 1, "fft_magnitude");

  std::vector<Complex> buf(n, Complex(0.0, 0.0));
  const std::size_t copy = std::min(n, signal.samples.size());
  for (std::size_t i = 0; i < copy; ++i) buf[i] = Complex(signal.samples[i], 0.0);
  fft_inplace(buf);

  const std::size_t bins = n / 2 + 1;
  Spectrum out;
  out.bin_freqs.resize(bins);
  out.magnitudes.resize(bins);
  const double df = static_cast<double>(signal.sample_rate) / static_cast<double>(n);
  for (std::size_t k = 0; k < bins; ++k) {
    out.bin_freqs[k] = df * static_cast<double>(k);
    const double scale = (k == 0 || k == n / 2) ? 1.0 : 2.0;
    out.magnitudes[k] = scale * std::abs(buf[k]) / static_cast<double>(n);
  }
  return out;
}

}  // namespace sqkit

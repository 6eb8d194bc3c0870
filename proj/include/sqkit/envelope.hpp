#pragma once

#include <cmath>
#include <vector>

#include "sqkit/fft.hpp"
#include "sqkit/signal.hpp"

namespace sqkit {

/// Amplitude envelope as the magnitude of the analytic signal, built in the
/// frequency domain (positive frequencies doubled, negative zeroed). Inputs
/// whose length is not a power of two are zero-padded for the transform and
/// truncated back; the resulting edge leakage decays as 1/distance, which is
/// why envelope-based metrics discard the outermost samples.
inline Envelope hilbert_envelope(const Signal& signal) {
  validate_for_analysis(signal, 16, "hilbert_envelope");
  const std::size_t n = signal.samples.size();
  const std::size_t m = next_pow2(n);

  std::vector<Complex> buf(m, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) buf[i] = Complex(signal.samples[i], 0.0);
  fft_inplace(buf);

  for (std::size_t k = 1; k < m / 2; ++k) buf[k] *= 2.0;
  for (std::size_t k = m / 2 + 1; k < m; ++k) buf[k] = Complex(0.0, 0.0);
  fft_inplace(buf, /*inverse=*/true);

  Envelope env;
  env.sample_rate = signal.sample_rate;
  env.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) env.samples[i] = std::abs(buf[i]);
  return env;
}

}  // namespace sqkit

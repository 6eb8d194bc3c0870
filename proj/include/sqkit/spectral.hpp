#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/fft.hpp"
#include "sqkit/signal.hpp"

namespace sqkit {

inline constexpr std::size_t kWelchSegment = 8192;
inline constexpr double kWelchOverlap = 0.5;

/// One-sided power spectral density (power per Hz) with the Welch parameters
/// recorded for provenance. Integrating psd * bin_width over all bins
/// recovers the signal variance for stationary input.
struct PowerSpectralDensity {
  std::vector<double> bin_freqs;
  std::vector<double> psd;
  std::size_t segment = kWelchSegment;
  double overlap = kWelchOverlap;
  std::string window = "hann";
  int sample_rate = kCanonicalSampleRate;

  double bin_width() const {
    return static_cast<double>(sample_rate) / static_cast<double>(segment);
  }
  double total_power() const {
    double acc = 0.0;
    for (double p : psd) acc += p;
    return acc * bin_width();
  }
};

/// Welch estimate: Hann-windowed segments, per-segment mean removal,
/// density scaling 1 / (fs * sum(w^2)).
inline PowerSpectralDensity welch_psd(const Signal& signal, std::size_t segment = kWelchSegment,
                                      double overlap = kWelchOverlap) {
  validate_for_analysis(signal, 1, "welch_psd");
  if (segment < 16) throw ParamError("welch_psd: segment must be >= 16 samples");
  if (segment > signal.samples.size()) {
    throw ParamError("welch_psd: segment (" + std::to_string(segment) +
                     ") exceeds signal length (" + std::to_string(signal.samples.size()) + ")");
  }
  if (!(overlap >= 0.0) || !(overlap < 1.0)) {
    throw ParamError("welch_psd: overlap must be in [0, 1)");
  }
  if (!is_pow2(segment)) throw ParamError("welch_psd: segment must be a power of two");

  const std::size_t n = signal.samples.size();
  const std::size_t noverlap = static_cast<std::size_t>(overlap * static_cast<double>(segment));
  const std::size_t step = segment - noverlap;

  std::vector<double> window(segment);
  double wsq = 0.0;
  for (std::size_t i = 0; i < segment; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                      static_cast<double>(segment)));
    wsq += window[i] * window[i];
  }
  const double scale = 1.0 / (static_cast<double>(signal.sample_rate) * wsq);

  const std::size_t bins = segment / 2 + 1;
  PowerSpectralDensity out;
  out.segment = segment;
  out.overlap = overlap;
  out.sample_rate = signal.sample_rate;
  out.psd.assign(bins, 0.0);
  out.bin_freqs.resize(bins);
  const double df = out.bin_width();
  for (std::size_t k = 0; k < bins; ++k) out.bin_freqs[k] = df * static_cast<double>(k);

  std::vector<Complex> buf(segment);
  std::size_t count = 0;
  for (std::size_t start = 0; start + segment <= n; start += step) {
    double seg_mean = 0.0;
    for (std::size_t i = 0; i < segment; ++i) seg_mean += signal.samples[start + i];
    seg_mean /= static_cast<double>(segment);
    for (std::size_t i = 0; i < segment; ++i) {
      buf[i] = Complex((signal.samples[start + i] - seg_mean) * window[i], 0.0);
    }
    fft_inplace(buf);
    for (std::size_t k = 0; k < bins; ++k) {
      const double one_sided = (k == 0 || k == segment / 2) ? 1.0 : 2.0;
      out.psd[k] += one_sided * std::norm(buf[k]) * scale;
    }
    ++count;
  }
  for (double& p : out.psd) p /= static_cast<double>(count);
  return out;
}

}  // namespace sqkit

#pragma once

#include <array>
#include <cmath>

#include "sqkit/spectral.hpp"

namespace sqkit {

inline constexpr int kBarkBands = 24;

/// Critical-band rate, Zwicker's closed-form approximation.
/// Monotone increasing; z(0) = 0, z(1 kHz) ~ 8.5.
inline double hz_to_bark(double f_hz) {
  if (f_hz < 0.0) throw ParamError("hz_to_bark: frequency must be >= 0");
  const double r = f_hz / 7500.0;
  return 13.0 * std::atan(0.00076 * f_hz) + 3.5 * std::atan(r * r);
}

/// Integrates a Welch PSD over the 24 unit-Bark intervals [z, z+1).
/// Bins at or above 24 Bark are excluded; the band sum equals the included
/// bin power exactly (same summation, just routed per band).
inline std::array<double, kBarkBands> bark_band_energies(const PowerSpectralDensity& psd) {
  std::array<double, kBarkBands> bands{};
  const double df = psd.bin_width();
  for (std::size_t k = 0; k < psd.psd.size(); ++k) {
    const double z = hz_to_bark(psd.bin_freqs[k]);
    if (z >= static_cast<double>(kBarkBands)) break;
    bands[static_cast<std::size_t>(z)] += psd.psd[k] * df;
  }
  return bands;
}

inline std::array<double, kBarkBands> bark_band_energies(const Signal& signal) {
  return bark_band_energies(welch_psd(signal));
}

}  // namespace sqkit

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/filters.hpp"
#include "sqkit/signal.hpp"

namespace sqkit {

/// K-weighting pre-filter: high shelf followed by a high-pass. Coefficients
/// are derived from the analog prototypes at any rate; at 48 kHz they
/// reproduce the published biquad tables.
/// Parameterization after Mansbridge, Finn and Reiss (AES 132nd convention).
inline SosChain k_weighting(double fs) {
  SosChain sos(2);

  {  // stage 1: high-frequency shelf
    const double db = 3.999843853973347;
    const double f0 = 1681.974450955533;
    const double q = 0.7071752369554196;
    const double k = std::tan(M_PI * f0 / fs);
    const double vh = std::pow(10.0, db / 20.0);
    const double vb = std::pow(vh, 0.4996667741545416);
    const double a0 = 1.0 + k / q + k * k;
    sos[0].b0 = (vh + vb * k / q + k * k) / a0;
    sos[0].b1 = 2.0 * (k * k - vh) / a0;
    sos[0].b2 = (vh - vb * k / q + k * k) / a0;
    sos[0].a1 = 2.0 * (k * k - 1.0) / a0;
    sos[0].a2 = (1.0 - k / q + k * k) / a0;
  }
  {  // stage 2: high-pass
    const double f0 = 38.13547087602444;
    const double q = 0.5003270373238773;
    const double k = std::tan(M_PI * f0 / fs);
    const double a0 = 1.0 + k / q + k * k;
    sos[1].b0 = 1.0;
    sos[1].b1 = -2.0;
    sos[1].b2 = 1.0;
    sos[1].a1 = 2.0 * (k * k - 1.0) / a0;
    sos[1].a2 = (1.0 - k / q + k * k) / a0;
  }
  return sos;
}

inline constexpr double kLufsAbsoluteGate = -70.0;
inline constexpr double kLufsRelativeGateLu = 10.0;
inline constexpr double kLufsOffset = -0.691;

/// Integrated program loudness: K-weighting, 400 ms blocks with 75% overlap,
/// -70 LUFS absolute gate, then a -10 LU relative gate. Returns nothing when
/// every block is gated out (e.g. silence).
inline std::optional<double> lufs_integrated_value(const Signal& signal) {
  validate_for_analysis(signal, 1, "lufs_integrated");
  if (signal.duration_s() < 0.4) {
    throw ParamError("lufs_integrated: needs at least 0.4 s of audio");
  }

  const std::vector<double> weighted = sosfilt(k_weighting(signal.sample_rate), signal.samples);

  const std::size_t block = static_cast<std::size_t>(std::llround(0.4 * signal.sample_rate));
  const std::size_t hop = static_cast<std::size_t>(std::llround(0.1 * signal.sample_rate));

  std::vector<double> block_power;
  for (std::size_t start = 0; start + block <= weighted.size(); start += hop) {
    double acc = 0.0;
    for (std::size_t i = start; i < start + block; ++i) acc += weighted[i] * weighted[i];
    block_power.push_back(acc / static_cast<double>(block));
  }
  if (block_power.empty()) return std::nullopt;

  const auto block_loudness = [](double z) {
    return z > 0.0 ? kLufsOffset + 10.0 * std::log10(z) : -std::numeric_limits<double>::infinity();
  };

  double abs_sum = 0.0;
  std::size_t abs_count = 0;
  for (double z : block_power) {
    if (block_loudness(z) > kLufsAbsoluteGate) {
      abs_sum += z;
      ++abs_count;
    }
  }
  if (abs_count == 0) return std::nullopt;

  const double relative_gate =
      block_loudness(abs_sum / static_cast<double>(abs_count)) - kLufsRelativeGateLu;

  double sum = 0.0;
  std::size_t count = 0;
  for (double z : block_power) {
    const double l = block_loudness(z);
    if (l > kLufsAbsoluteGate && l > relative_gate) {
      sum += z;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return block_loudness(sum / static_cast<double>(count));
}

}  // namespace sqkit

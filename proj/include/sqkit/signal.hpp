#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sqkit/errors.hpp"

namespace sqkit {

inline constexpr int kCanonicalSampleRate = 48000;
inline constexpr int kMinSampleRate = 8000;
inline constexpr double kDefaultCalibrationOffsetDb = 94.0;

/// Mono audio signal. Samples are dimensionless with full scale at +-1.0.
/// calibration_offset_db maps digital level to SPL: SPL = dBFS + offset.
struct Signal {
  std::vector<double> samples;
  int sample_rate = kCanonicalSampleRate;
  double calibration_offset_db = kDefaultCalibrationOffsetDb;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  double nyquist() const { return 0.5 * sample_rate; }
};

/// Instantaneous amplitude sequence, same length and rate as its source.
struct Envelope {
  std::vector<double> samples;
  int sample_rate = kCanonicalSampleRate;
};

/// Checks the Signal invariants common to every analysis operation.
inline void validate_for_analysis(const Signal& s, std::size_t min_samples = 1,
                                  const char* op = "analysis") {
  if (s.sample_rate < kMinSampleRate) {
    throw ParamError(std::string(op) + ": sample_rate must be >= 8000 Hz, got " +
                     std::to_string(s.sample_rate));
  }
  if (s.samples.size() < min_samples) {
    throw ParamError(std::string(op) + ": signal needs at least " + std::to_string(min_samples) +
                     " samples, got " + std::to_string(s.samples.size()));
  }
  for (double v : s.samples) {
    if (!std::isfinite(v)) {
      throw ParamError(std::string(op) + ": signal contains non-finite samples");
    }
  }
}

inline double mean(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v;
  return acc / static_cast<double>(x.size());
}

inline double rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

inline double peak_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace sqkit

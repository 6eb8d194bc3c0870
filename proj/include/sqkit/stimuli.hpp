#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/filters.hpp"
#include "sqkit/rng.hpp"
#include "sqkit/signal.hpp"

namespace sqkit {

enum class StimulusClass : int { kEngineBoom = 0, kWindWhistle = 1, kRoadNoise = 2 };

inline const char* class_name(StimulusClass c) {
  switch (c) {
    case StimulusClass::kEngineBoom: return "engine_boom";
    case StimulusClass::kWindWhistle: return "wind_whistle";
    case StimulusClass::kRoadNoise: return "road_noise";
  }
  throw ParamError("unknown stimulus class");
}

inline StimulusClass class_from_name(const std::string& name) {
  if (name == "engine_boom") return StimulusClass::kEngineBoom;
  if (name == "wind_whistle") return StimulusClass::kWindWhistle;
  if (name == "road_noise") return StimulusClass::kRoadNoise;
  throw ParamError("unknown stimulus class '" + name + "'");
}

/// Harmonic stack near 100-200 Hz with amplitude modulation in the
/// roughness-sensitive range.
struct EngineBoomParams {
  double f0_hz = 150.0;              // [100, 200]
  int n_harmonics = 5;
  double harmonic_rolloff_db = 4.0;  // per harmonic step
  double mod_freq_hz = 50.0;         // [30, 70]
  double mod_depth = 0.75;           // [0.5, 1.0]
};

/// Tone in the 2-5 kHz region over broadband noise. Tone level is peak
/// amplitude dBFS, noise level is RMS dBFS.
struct WindWhistleParams {
  double tone_freq_hz = 3500.0;      // [2000, 5000]
  double tone_level_dbfs = -15.0;    // [-20, -10]
  double noise_level_dbfs = -30.0;   // [-35, -25]
};

/// Low-passed broadband noise.
struct RoadNoiseParams {
  double cutoff_hz = 450.0;          // [300, 600]
  double level_dbfs = -15.0;         // [-20, -10], RMS dBFS before filtering
};

using StimulusParams = std::variant<EngineBoomParams, WindWhistleParams, RoadNoiseParams>;

inline constexpr double kDefaultStimulusDuration = 2.0;
inline constexpr double kStimulusPeakLimit = 0.99;

struct StimulusSpec {
  StimulusClass class_label = StimulusClass::kEngineBoom;
  std::uint64_t seed = 0;
  double duration_s = kDefaultStimulusDuration;
  int sample_rate = kCanonicalSampleRate;
  StimulusParams params = EngineBoomParams{};
};

namespace stimuli_detail {

inline void check_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo) || !(v <= hi)) {
    throw ParamError(std::string("stimulus: ") + what + " = " + std::to_string(v) +
                     " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

inline double dbfs_to_linear(double db) { return std::pow(10.0, db / 20.0); }

inline void peak_limit(std::vector<double>& x) {
  const double peak = peak_abs(x);
  if (peak > kStimulusPeakLimit) {
    const double gain = kStimulusPeakLimit / peak;
    for (double& v : x) v *= gain;
  }
}

}  // namespace stimuli_detail

inline void validate_spec(const StimulusSpec& spec) {
  using namespace stimuli_detail;
  if (!(spec.duration_s > 0.0)) throw ParamError("stimulus: duration must be positive");
  if (spec.sample_rate < kMinSampleRate) throw ParamError("stimulus: sample_rate below 8000 Hz");
  const double nyquist = 0.5 * spec.sample_rate;

  if (const auto* p = std::get_if<EngineBoomParams>(&spec.params)) {
    if (spec.class_label != StimulusClass::kEngineBoom) {
      throw ParamError("stimulus: params do not match class label");
    }
    check_range(p->f0_hz, 100.0, 200.0, "engine boom f0");
    check_range(p->mod_freq_hz, 30.0, 70.0, "engine boom mod_freq");
    // Jitter draws from [0.5, 1.0]; synthesis also accepts the degenerate
    // unmodulated case down to 0.
    check_range(p->mod_depth, 0.0, 1.0, "engine boom mod_depth");
    if (p->n_harmonics < 1) throw ParamError("stimulus: n_harmonics must be >= 1");
    if (p->f0_hz * p->n_harmonics >= nyquist) {
      throw ParamError("stimulus: highest harmonic above Nyquist");
    }
  } else if (const auto* p = std::get_if<WindWhistleParams>(&spec.params)) {
    if (spec.class_label != StimulusClass::kWindWhistle) {
      throw ParamError("stimulus: params do not match class label");
    }
    check_range(p->tone_freq_hz, 2000.0, 5000.0, "wind whistle tone_freq");
    check_range(p->tone_level_dbfs, -20.0, -10.0, "wind whistle tone_level");
    check_range(p->noise_level_dbfs, -35.0, -25.0, "wind whistle noise_level");
    if (p->tone_level_dbfs - p->noise_level_dbfs < 5.0) {
      throw ParamError("stimulus: tone level must exceed noise level by >= 5 dB");
    }
    if (p->tone_freq_hz >= nyquist) throw ParamError("stimulus: tone above Nyquist");
  } else if (const auto* p = std::get_if<RoadNoiseParams>(&spec.params)) {
    if (spec.class_label != StimulusClass::kRoadNoise) {
      throw ParamError("stimulus: params do not match class label");
    }
    check_range(p->cutoff_hz, 300.0, 600.0, "road noise cutoff");
    check_range(p->level_dbfs, -20.0, -10.0, "road noise level");
  }
}

/// Deterministic synthesis: identical specs (including seed) give identical
/// sample sequences. Output peak is limited to |x| <= 0.99 by rescaling.
inline Signal synth(const StimulusSpec& spec) {
  using namespace stimuli_detail;
  validate_spec(spec);

  const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate));
  if (n == 0) throw ParamError("stimulus: zero-length synthesis");
  const double fs = spec.sample_rate;

  Signal out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(n, 0.0);
  Xoshiro256ss rng(spec.seed);

  if (const auto* p = std::get_if<EngineBoomParams>(&spec.params)) {
    std::vector<double> amp(static_cast<std::size_t>(p->n_harmonics));
    for (int k = 0; k < p->n_harmonics; ++k) {
      amp[static_cast<std::size_t>(k)] = dbfs_to_linear(-p->harmonic_rolloff_db * k);
    }
    const double m = p->mod_depth;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      double sum = 0.0;
      for (int k = 0; k < p->n_harmonics; ++k) {
        sum += amp[static_cast<std::size_t>(k)] *
               std::sin(2.0 * M_PI * p->f0_hz * (k + 1.0) * t);
      }
      const double mod = (1.0 + m * std::cos(2.0 * M_PI * p->mod_freq_hz * t)) / (1.0 + m);
      out.samples[i] = sum * mod;
    }
  } else if (const auto* p = std::get_if<WindWhistleParams>(&spec.params)) {
    const double tone_amp = dbfs_to_linear(p->tone_level_dbfs);
    const double noise_sigma = dbfs_to_linear(p->noise_level_dbfs);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      out.samples[i] = tone_amp * std::sin(2.0 * M_PI * p->tone_freq_hz * t) +
                       noise_sigma * rng.normal();
    }
  } else if (const auto* p = std::get_if<RoadNoiseParams>(&spec.params)) {
    const double sigma = dbfs_to_linear(p->level_dbfs);
    Signal noise;
    noise.sample_rate = spec.sample_rate;
    noise.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) noise.samples[i] = sigma * rng.normal();
    out.samples = lowpass(noise, p->cutoff_hz).samples;
  }

  peak_limit(out.samples);
  return out;
}

/// Per-item spec with uniformly jittered parameters. Item i's spec depends
/// only on (class, base_seed, index): per-item seed = SplitMix64(base ^ index),
/// parameter stream seeded one mix further so synthesis does not replay it.
inline StimulusSpec jittered_spec(StimulusClass cls, std::uint64_t base_seed, std::uint64_t index) {
  const std::uint64_t item_seed = mix_seed(base_seed ^ index);
  Xoshiro256ss rng(mix_seed(item_seed));

  StimulusSpec spec;
  spec.class_label = cls;
  spec.seed = item_seed;

  switch (cls) {
    case StimulusClass::kEngineBoom: {
      EngineBoomParams p;
      p.f0_hz = rng.uniform(100.0, 200.0);
      p.mod_freq_hz = rng.uniform(30.0, 70.0);
      p.mod_depth = rng.uniform(0.5, 1.0);
      spec.params = p;
      break;
    }
    case StimulusClass::kWindWhistle: {
      WindWhistleParams p;
      p.tone_freq_hz = rng.uniform(2000.0, 5000.0);
      p.tone_level_dbfs = rng.uniform(-20.0, -10.0);
      p.noise_level_dbfs = rng.uniform(-35.0, -25.0);
      spec.params = p;
      break;
    }
    case StimulusClass::kRoadNoise: {
      RoadNoiseParams p;
      p.cutoff_hz = rng.uniform(300.0, 600.0);
      p.level_dbfs = rng.uniform(-20.0, -10.0);
      spec.params = p;
      break;
    }
  }
  return spec;
}

// Parametric calibration/test tones.

inline Signal sine_tone(double freq_hz, double amplitude, double duration_s,
                        int sample_rate = kCanonicalSampleRate) {
  if (!(freq_hz > 0.0) || freq_hz >= 0.5 * sample_rate) {
    throw ParamError("sine_tone: frequency must be in (0, Nyquist)");
  }
  if (!(duration_s > 0.0)) throw ParamError("sine_tone: duration must be positive");
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = amplitude * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(i) /
                                          static_cast<double>(sample_rate));
  }
  return out;
}

/// a(t) = amplitude * (1 + m cos(2 pi f_m t)) sin(2 pi f_c t) / (1 + m),
/// normalized so the peak stays at or below |amplitude|.
inline Signal am_tone(double carrier_hz, double mod_hz, double depth, double duration_s,
                      int sample_rate = kCanonicalSampleRate, double amplitude = 1.0) {
  if (!(carrier_hz > 0.0) || carrier_hz >= 0.5 * sample_rate) {
    throw ParamError("am_tone: carrier must be in (0, Nyquist)");
  }
  if (!(mod_hz >= 0.0) || mod_hz >= 0.5 * sample_rate) {
    throw ParamError("am_tone: modulation frequency must be in [0, Nyquist)");
  }
  if (!(depth >= 0.0) || !(depth <= 1.0)) throw ParamError("am_tone: depth must be in [0, 1]");
  if (!(duration_s > 0.0)) throw ParamError("am_tone: duration must be positive");
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(sample_rate);
    out.samples[i] = amplitude * (1.0 + depth * std::cos(2.0 * M_PI * mod_hz * t)) *
                     std::sin(2.0 * M_PI * carrier_hz * t) / (1.0 + depth);
  }
  return out;
}

inline Signal tone_in_noise(double tone_hz, double tone_amplitude, double noise_sigma,
                            double duration_s, std::uint64_t seed,
                            int sample_rate = kCanonicalSampleRate) {
  Signal out = sine_tone(tone_hz, tone_amplitude, duration_s, sample_rate);
  Xoshiro256ss rng(seed);
  for (double& v : out.samples) v += noise_sigma * rng.normal();
  return out;
}

inline Signal silence(double duration_s, int sample_rate = kCanonicalSampleRate) {
  if (!(duration_s > 0.0)) throw ParamError("silence: duration must be positive");
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.assign(static_cast<std::size_t>(std::llround(duration_s * sample_rate)), 0.0);
  return out;
}

inline Signal white_noise(double sigma, double duration_s, std::uint64_t seed,
                          int sample_rate = kCanonicalSampleRate) {
  if (!(duration_s > 0.0)) throw ParamError("white_noise: duration must be positive");
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.resize(static_cast<std::size_t>(std::llround(duration_s * sample_rate)));
  Xoshiro256ss rng(seed);
  for (double& v : out.samples) v = sigma * rng.normal();
  return out;
}

}  // namespace sqkit

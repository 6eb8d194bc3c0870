#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sqkit/bark.hpp"
#include "sqkit/envelope.hpp"
#include "sqkit/errors.hpp"
#include "sqkit/fft.hpp"
#include "sqkit/filters.hpp"
#include "sqkit/lufs.hpp"
#include "sqkit/signal.hpp"
#include "sqkit/spectral.hpp"

namespace sqkit {

/// A metric value with its unit and the identifier of the recipe that
/// produced it, so proxy and band-model variants stay distinguishable.
struct MetricValue {
  double value = 0.0;
  std::string unit;
  std::string variant;
};

/// Reference thresholds for the annoyance composite (defaults 0).
struct AnnoyanceThresholds {
  double s0 = 0.0;
  double r0 = 0.0;
  double f0 = 0.0;
};

struct TonalPeak {
  double freq_hz = 0.0;
  double level_db = 0.0;
  double baseline_db = 0.0;
  double prominence_db = 0.0;
};

struct TonalityResult {
  MetricValue metric;
  std::vector<TonalPeak> peaks;
};

/// The six-metric feature vector [N, S, R, F, T, PA].
struct FeatureVector {
  double n = 0.0;
  double s = 0.0;
  double r = 0.0;
  double f = 0.0;
  double t = 0.0;
  double pa = 0.0;
};

// Pinned analysis constants.
inline constexpr double kSpecificLoudnessExponent = 0.23;
inline constexpr double kLoudnessRefDbfs = -34.0;                       // 1-Bark noise band ref
inline const double kLoudnessRefEnergy = std::pow(10.0, kLoudnessRefDbfs / 10.0);
inline constexpr double kSharpnessKnee = 15.8;                          // Bark
inline constexpr double kRoughnessBandLo = 15.0;                        // Hz
inline constexpr double kRoughnessBandHi = 300.0;                       // Hz
inline constexpr double kFluctuationCutoff = 20.0;                      // Hz
inline constexpr double kTonalSmoothingBark = 2.0;                      // moving-average width
inline constexpr double kTonalProminenceThresholdDb = 6.0;
inline constexpr double kTonalDeltaLRefDb = 1.0;
inline constexpr double kPsdDbFloor = -400.0;
inline constexpr double kInteriorTrimFraction = 0.05;                   // per edge
inline constexpr double kSilenceEnvelopeEps = 1e-12;

namespace metrics_detail {

struct InteriorRange {
  std::size_t lo, hi;  // [lo, hi)
};

inline InteriorRange interior(std::size_t n) {
  const std::size_t trim = static_cast<std::size_t>(kInteriorTrimFraction * static_cast<double>(n));
  return {trim, n - trim};
}

inline double mean_over(const std::vector<double>& x, InteriorRange r) {
  double acc = 0.0;
  for (std::size_t i = r.lo; i < r.hi; ++i) acc += x[i];
  return acc / static_cast<double>(r.hi - r.lo);
}

inline double rms_over(const std::vector<double>& x, InteriorRange r) {
  double acc = 0.0;
  for (std::size_t i = r.lo; i < r.hi; ++i) acc += x[i] * x[i];
  return std::sqrt(acc / static_cast<double>(r.hi - r.lo));
}

inline double variance_over(const std::vector<double>& x, InteriorRange r) {
  const double m = mean_over(x, r);
  double acc = 0.0;
  for (std::size_t i = r.lo; i < r.hi; ++i) acc += (x[i] - m) * (x[i] - m);
  return acc / static_cast<double>(r.hi - r.lo);
}

}  // namespace metrics_detail

/// Plain RMS of the sample sequence.
inline MetricValue loudness_rms(const Signal& signal) {
  validate_for_analysis(signal, 1, "loudness_rms");
  return {rms(signal.samples), "rms", "time-domain-rms"};
}

/// Per-band specific loudness proxy: N'_z = (E_z / E_ref)^0.23 over the 24
/// Bark band energies.
inline std::array<double, kBarkBands> specific_loudness(const Signal& signal) {
  const auto energies = bark_band_energies(signal);
  std::array<double, kBarkBands> nprime{};
  for (int z = 0; z < kBarkBands; ++z) {
    nprime[static_cast<std::size_t>(z)] =
        std::pow(energies[static_cast<std::size_t>(z)] / kLoudnessRefEnergy,
                 kSpecificLoudnessExponent);
  }
  return nprime;
}

/// Total loudness proxy: sum of specific loudness over all bands.
inline MetricValue loudness_zwicker_proxy(const Signal& signal) {
  const auto nprime = specific_loudness(signal);
  double total = 0.0;
  for (double v : nprime) total += v;
  return {total, "sone-proxy", "bark24-powerlaw023"};
}

/// BS.1770 integrated loudness; empty when fully gated out.
inline std::optional<MetricValue> lufs_integrated(const Signal& signal) {
  const auto value = lufs_integrated_value(signal);
  if (!value) return std::nullopt;
  return MetricValue{*value, "LUFS", "bs1770-integrated"};
}

/// Magnitude-weighted mean frequency of the full-signal spectrum, in kHz.
/// The signal is Hann-windowed before the padded transform; rectangular
/// leakage skirts otherwise bias the centroid of narrowband content upward.
inline MetricValue sharpness_centroid(const Signal& signal) {
  validate_for_analysis(signal, 1, "sharpness_centroid");
  Signal windowed = signal;
  const std::size_t len = windowed.samples.size();
  for (std::size_t i = 0; i < len; ++i) {
    windowed.samples[i] *=
        0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(len)));
  }
  const std::size_t n = std::max<std::size_t>(16, next_pow2(len));
  const Spectrum spec = fft_magnitude(windowed, n);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < spec.magnitudes.size(); ++k) {
    num += spec.bin_freqs[k] * spec.magnitudes[k];
    den += spec.magnitudes[k];
  }
  if (den <= 0.0) throw DegenerateInputError("sharpness_centroid: silent signal");
  return {num / den / 1000.0, "acum-proxy", "spectral-centroid-khz"};
}

/// Weighting curve over band center z: unity up to 15.8 Bark, exponential
/// high-frequency emphasis above.
inline double sharpness_g(double z_center) {
  return z_center <= kSharpnessKnee ? 1.0 : 0.066 * std::exp(0.171 * z_center);
}

/// Loudness-weighted spectral balance over Bark bands:
/// S = sum g(z) N'_z (z + 0.5) / sum N'_z.
inline MetricValue sharpness_weighted(const Signal& signal) {
  const auto nprime = specific_loudness(signal);
  double num = 0.0, den = 0.0;
  for (int z = 0; z < kBarkBands; ++z) {
    const double zc = static_cast<double>(z) + 0.5;
    num += sharpness_g(zc) * nprime[static_cast<std::size_t>(z)] * zc;
    den += nprime[static_cast<std::size_t>(z)];
  }
  if (den <= 0.0) throw DegenerateInputError("sharpness_weighted: silent signal");
  return {num / den, "acum-proxy", "bark-weighted-centroid"};
}

/// Roughness from an existing envelope (the Signal overload composes this
/// with hilbert_envelope; results are bitwise identical).
inline MetricValue roughness_proxy(const Envelope& env) {
  using namespace metrics_detail;
  const Envelope filtered = bandpass(env, kRoughnessBandLo, kRoughnessBandHi);
  const InteriorRange r = interior(env.samples.size());
  const double env_mean = mean_over(env.samples, r);
  if (env_mean < kSilenceEnvelopeEps) {
    throw DegenerateInputError("roughness_proxy: near-zero mean envelope");
  }
  return {rms_over(filtered.samples, r) / env_mean, "asper-proxy", "envelope-bandpass-15-300"};
}

inline MetricValue roughness_proxy(const Signal& signal) {
  validate_for_analysis(signal, 16, "roughness_proxy");
  if (signal.duration_s() < 0.5) throw ParamError("roughness_proxy: needs at least 0.5 s");
  return roughness_proxy(hilbert_envelope(signal));
}

/// Fluctuation strength from an existing envelope.
inline MetricValue fluctuation_proxy(const Envelope& env) {
  using namespace metrics_detail;
  const double full_mean = mean(env.samples);
  Envelope centered;
  centered.sample_rate = env.sample_rate;
  centered.samples.resize(env.samples.size());
  for (std::size_t i = 0; i < env.samples.size(); ++i) {
    centered.samples[i] = env.samples[i] - full_mean;
  }
  const Envelope low = lowpass(centered, kFluctuationCutoff);
  const InteriorRange r = interior(env.samples.size());
  const double env_mean = mean_over(env.samples, r);
  if (env_mean < kSilenceEnvelopeEps) {
    throw DegenerateInputError("fluctuation_proxy: near-zero mean envelope");
  }
  return {variance_over(low.samples, r) / (env_mean * env_mean), "vacil-proxy",
          "envelope-lowpass-20-variance"};
}

inline MetricValue fluctuation_proxy(const Signal& signal) {
  validate_for_analysis(signal, 16, "fluctuation_proxy");
  if (signal.duration_s() < 1.0) throw ParamError("fluctuation_proxy: needs at least 1.0 s");
  return fluctuation_proxy(hilbert_envelope(signal));
}

/// dB spectrum and its 2-Bark centered moving-average baseline.
struct SmoothedPsdDb {
  std::vector<double> db;
  std::vector<double> baseline;
};

inline SmoothedPsdDb smoothed_psd_db(const PowerSpectralDensity& psd) {
  const std::size_t n = psd.psd.size();
  SmoothedPsdDb out;
  out.db.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.db[i] = psd.psd[i] > 1e-40 ? 10.0 * std::log10(psd.psd[i]) : kPsdDbFloor;
  }
  std::vector<double> bark(n);
  for (std::size_t i = 0; i < n; ++i) bark[i] = hz_to_bark(psd.bin_freqs[i]);

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + out.db[i];

  const double half = kTonalSmoothingBark / 2.0;
  out.baseline.resize(n);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (bark[lo] < bark[i] - half) ++lo;
    while (hi < n && bark[hi] <= bark[i] + half) ++hi;
    out.baseline[i] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

/// Tonal peak detector on a PSD: local maxima of the dB spectrum at least
/// 6 dB above the 2-Bark moving-average baseline.
inline std::vector<TonalPeak> tonal_peaks(const PowerSpectralDensity& psd) {
  const std::size_t n = psd.psd.size();
  const SmoothedPsdDb smoothed = smoothed_psd_db(psd);
  const std::vector<double>& db = smoothed.db;
  const std::vector<double>& baseline = smoothed.baseline;

  std::vector<TonalPeak> peaks;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (db[i] > db[i - 1] && db[i] > db[i + 1]) {
      const double prominence = db[i] - baseline[i];
      if (prominence >= kTonalProminenceThresholdDb) {
        peaks.push_back({psd.bin_freqs[i], db[i], baseline[i], prominence});
      }
    }
  }
  return peaks;
}

/// T = max tonal prominence / delta-L-ref (1 dB), so T reads in dB; zero
/// when no peak clears the 6 dB threshold.
inline TonalityResult tonality_proxy(const Signal& signal) {
  const PowerSpectralDensity psd = welch_psd(signal);
  TonalityResult out;
  out.peaks = tonal_peaks(psd);
  double t = 0.0;
  for (const TonalPeak& p : out.peaks) t = std::max(t, p.prominence_db / kTonalDeltaLRefDb);
  out.metric = {t, "tonality-units", "psd-prominence-db"};
  return out;
}

/// PA = N (1 + sqrt(((S-S0)^2 + (R-R0)^2 + (F-F0)^2) / 3)).
inline MetricValue annoyance(double n, double s, double r, double f,
                             const AnnoyanceThresholds& th = {}) {
  if (!(n >= 0.0)) throw ParamError("annoyance: loudness must be >= 0");
  const double ds = s - th.s0;
  const double dr = r - th.r0;
  const double df = f - th.f0;
  const double deviation = std::sqrt((ds * ds + dr * dr + df * df) / 3.0);
  return {n * (1.0 + deviation), "pa-units", "zwicker-pa"};
}

namespace metrics_detail {

template <typename Fn>
auto with_metric_context(const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError(std::string(name) + ": " + e.what());
  } catch (const ParamError& e) {
    throw ParamError(std::string(name) + ": " + e.what());
  }
}

}  // namespace metrics_detail

/// Computes the full feature vector [N, S, R, F, T, PA]. Equals the tuple of
/// individually invoked metrics bitwise; the envelope is shared between
/// roughness and fluctuation, which compute identically either way.
inline FeatureVector analyze_all(const Signal& signal, const AnnoyanceThresholds& th = {}) {
  using metrics_detail::with_metric_context;
  validate_for_analysis(signal, 16, "analyze_all");
  if (signal.duration_s() < 1.0) throw ParamError("analyze_all: needs at least 1.0 s");

  FeatureVector fv;
  const auto nprime = with_metric_context("loudness", [&] { return specific_loudness(signal); });
  double total = 0.0;
  for (double v : nprime) total += v;
  fv.n = total;

  fv.s = with_metric_context("sharpness", [&] {
           double num = 0.0, den = 0.0;
           for (int z = 0; z < kBarkBands; ++z) {
             const double zc = static_cast<double>(z) + 0.5;
             num += sharpness_g(zc) * nprime[static_cast<std::size_t>(z)] * zc;
             den += nprime[static_cast<std::size_t>(z)];
           }
           if (den <= 0.0) throw DegenerateInputError("silent signal");
           return num / den;
         });

  const Envelope env = hilbert_envelope(signal);
  fv.r = with_metric_context("roughness", [&] { return roughness_proxy(env).value; });
  fv.f = with_metric_context("fluctuation", [&] { return fluctuation_proxy(env).value; });
  fv.t = with_metric_context("tonality", [&] { return tonality_proxy(signal).metric.value; });
  fv.pa = annoyance(fv.n, fv.s, fv.r, fv.f, th).value;
  return fv;
}

}  // namespace sqkit

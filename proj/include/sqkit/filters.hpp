#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "sqkit/errors.hpp"
#include "sqkit/signal.hpp"

namespace sqkit {

/// One second-order section, denominator normalized to a0 = 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

using SosChain = std::vector<Biquad>;

namespace filter_detail {

using Cplx = std::complex<double>;

/// Left-half-plane Butterworth prototype poles, unit cutoff.
inline std::vector<Cplx> butter_prototype(int order) {
  std::vector<Cplx> poles;
  poles.reserve(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const double theta = M_PI * (2.0 * k + order + 1.0) / (2.0 * order);
    poles.emplace_back(std::cos(theta), std::sin(theta));
  }
  return poles;
}

inline Cplx bilinear_pole(Cplx p, double fs2) { return (fs2 + p) / (fs2 - p); }

/// Groups digital poles into conjugate pairs and emits denominators.
/// Real poles (rare for the designs used here) are paired among themselves.
inline SosChain sections_from_poles(const std::vector<Cplx>& poles) {
  std::vector<Cplx> complex_upper;
  std::vector<double> reals;
  for (const Cplx& p : poles) {
    if (std::abs(p.imag()) < 1e-12 * std::max(1.0, std::abs(p.real()))) {
      reals.push_back(p.real());
    } else if (p.imag() > 0.0) {
      complex_upper.push_back(p);
    }
  }
  std::sort(complex_upper.begin(), complex_upper.end(),
            [](const Cplx& a, const Cplx& b) {
              return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
            });
  std::sort(reals.begin(), reals.end());

  SosChain sos;
  for (const Cplx& p : complex_upper) {
    Biquad s;
    s.a1 = -2.0 * p.real();
    s.a2 = std::norm(p);
    sos.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    Biquad s;
    s.a1 = -(reals[i] + reals[i + 1]);
    s.a2 = reals[i] * reals[i + 1];
    sos.push_back(s);
  }
  return sos;
}

inline Cplx section_response(const Biquad& s, Cplx z_inv) {
  const Cplx num = s.b0 + z_inv * (s.b1 + z_inv * s.b2);
  const Cplx den = 1.0 + z_inv * (s.a1 + z_inv * s.a2);
  return num / den;
}

inline Cplx chain_response(const SosChain& sos, double omega) {
  const Cplx z_inv = std::exp(Cplx(0.0, -omega));
  Cplx h(1.0, 0.0);
  for (const Biquad& s : sos) h *= section_response(s, z_inv);
  return h;
}

inline void normalize_gain_at(SosChain& sos, double omega) {
  const double g = std::abs(chain_response(sos, omega));
  if (g <= 0.0 || !std::isfinite(g)) throw ParamError("filter design: degenerate gain");
  const double scale = 1.0 / g;
  sos.front().b0 *= scale;
  sos.front().b1 *= scale;
  sos.front().b2 *= scale;
}

}  // namespace filter_detail

/// Digital Butterworth low-pass of the given order via bilinear transform
/// with frequency prewarping. Unity gain at DC.
inline SosChain butter_lowpass(int order, double cutoff_hz, double fs) {
  using namespace filter_detail;
  if (order < 1 || order > 16) throw ParamError("butter_lowpass: order out of range");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * fs)) {
    throw ParamError("butter_lowpass: cutoff must satisfy 0 < cutoff < Nyquist");
  }
  const double fs2 = 2.0 * fs;
  const double warped = fs2 * std::tan(M_PI * cutoff_hz / fs);

  std::vector<Cplx> digital;
  for (Cplx p : butter_prototype(order)) digital.push_back(bilinear_pole(p * warped, fs2));

  SosChain sos = sections_from_poles(digital);
  for (Biquad& s : sos) {  // all analog zeros at infinity -> (1 + z^-1)^2
    s.b0 = 1.0;
    s.b1 = 2.0;
    s.b2 = 1.0;
  }
  normalize_gain_at(sos, 0.0);
  return sos;
}

/// Digital Butterworth band-pass: an order-N prototype maps to 2N poles.
/// Unity gain at the (warped) geometric center frequency.
inline SosChain butter_bandpass(int order, double lo_hz, double hi_hz, double fs) {
  using namespace filter_detail;
  if (order < 1 || order > 16) throw ParamError("butter_bandpass: order out of range");
  if (!(lo_hz > 0.0) || !(lo_hz < hi_hz) || !(hi_hz < 0.5 * fs)) {
    throw ParamError("butter_bandpass: band must satisfy 0 < lo < hi < Nyquist");
  }
  const double fs2 = 2.0 * fs;
  const double w_lo = fs2 * std::tan(M_PI * lo_hz / fs);
  const double w_hi = fs2 * std::tan(M_PI * hi_hz / fs);
  const double bw = w_hi - w_lo;
  const double w0 = std::sqrt(w_lo * w_hi);

  std::vector<Cplx> analog;
  for (Cplx p : butter_prototype(order)) {
    const Cplx q = p * (bw / 2.0);
    const Cplx r = std::sqrt(q * q - w0 * w0);
    analog.push_back(q + r);
    analog.push_back(q - r);
  }
  std::vector<Cplx> digital;
  for (Cplx p : analog) digital.push_back(bilinear_pole(p, fs2));

  SosChain sos = sections_from_poles(digital);
  for (Biquad& s : sos) {  // zeros at z = +1 and z = -1 per section
    s.b0 = 1.0;
    s.b1 = 0.0;
    s.b2 = -1.0;
  }
  const double omega_center = 2.0 * std::atan(w0 / fs2);
  normalize_gain_at(sos, omega_center);
  return sos;
}

/// Causal cascade with zero initial state.
inline std::vector<double> sosfilt(const SosChain& sos, const std::vector<double>& x) {
  std::vector<double> y = x;
  for (const Biquad& s : sos) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

namespace filter_detail {

/// DF2T steady state for a unit-step input; scaled by the first sample it
/// removes the startup transient (DC passes through exactly).
inline std::array<double, 2> unit_step_state(const Biquad& s) {
  const double den = 1.0 + s.a1 + s.a2;
  const double g = (s.b0 + s.b1 + s.b2) / den;
  const double z2 = s.b2 - s.a2 * g;
  const double z1 = s.b1 - s.a1 * g + z2;
  return {z1, z2};
}

inline void one_pass(const SosChain& sos, std::vector<double>& y) {
  for (const Biquad& s : sos) {
    const auto zi = unit_step_state(s);
    double z1 = zi[0] * y.front();
    double z2 = zi[1] * y.front();
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

}  // namespace filter_detail

/// Forward-backward (zero-phase) filtering with odd-reflection end padding.
inline std::vector<double> filtfilt(const SosChain& sos, const std::vector<double>& x) {
  if (x.empty()) return {};
  const std::size_t n = x.size();
  const std::size_t padlen = std::min(n - 1, 3 * (2 * sos.size() + 1));

  std::vector<double> buf;
  buf.reserve(n + 2 * padlen);
  for (std::size_t i = 0; i < padlen; ++i) buf.push_back(2.0 * x.front() - x[padlen - i]);
  buf.insert(buf.end(), x.begin(), x.end());
  for (std::size_t i = 0; i < padlen; ++i) buf.push_back(2.0 * x.back() - x[n - 2 - i]);

  filter_detail::one_pass(sos, buf);
  std::reverse(buf.begin(), buf.end());
  filter_detail::one_pass(sos, buf);
  std::reverse(buf.begin(), buf.end());

  return {buf.begin() + static_cast<std::ptrdiff_t>(padlen),
          buf.begin() + static_cast<std::ptrdiff_t>(padlen + n)};
}

inline constexpr int kFilterOrder = 4;

inline Signal bandpass(const Signal& s, double lo_hz, double hi_hz) {
  validate_for_analysis(s, 2, "bandpass");
  const SosChain sos = butter_bandpass(kFilterOrder, lo_hz, hi_hz, s.sample_rate);
  Signal out = s;
  out.samples = filtfilt(sos, s.samples);
  return out;
}

inline Envelope bandpass(const Envelope& e, double lo_hz, double hi_hz) {
  const SosChain sos = butter_bandpass(kFilterOrder, lo_hz, hi_hz, e.sample_rate);
  Envelope out;
  out.sample_rate = e.sample_rate;
  out.samples = filtfilt(sos, e.samples);
  return out;
}

inline Signal lowpass(const Signal& s, double cutoff_hz) {
  validate_for_analysis(s, 2, "lowpass");
  const SosChain sos = butter_lowpass(kFilterOrder, cutoff_hz, s.sample_rate);
  Signal out = s;
  out.samples = filtfilt(sos, s.samples);
  return out;
}

inline Envelope lowpass(const Envelope& e, double cutoff_hz) {
  const SosChain sos = butter_lowpass(kFilterOrder, cutoff_hz, e.sample_rate);
  Envelope out;
  out.sample_rate = e.sample_rate;
  out.samples = filtfilt(sos, e.samples);
  return out;
}

}  // namespace sqkit

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "jvmd/errors.hpp"
#include "jvmd/fft.hpp"
#include "jvmd/types.hpp"

namespace jvmd {

/// splitmix64 finalizer; derives independent sub-seeds from one user seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Sentinel for "no noise".
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Component frequencies (Hz) and amplitudes of the three-tone test signal.
inline constexpr double kToneFrequenciesHz[3] = {2.0, 24.0, 600.0};
inline constexpr double kToneAmplitudes[3] = {1.0, 0.25, 0.0625};

/// cos(4 pi t) + 1/4 cos(48 pi t) + 1/16 cos(1200 pi t), t = n / fs, noiseless.
inline RealFrame tone_mixture(std::size_t length, double sample_rate_hz) {
  if (!(sample_rate_hz > 2.0 * kToneFrequenciesHz[2])) {
    throw InvalidConfig("sample rate must exceed 1200 Hz to carry the 600 Hz tone");
  }
  std::vector<double> x(length);
  for (std::size_t n = 0; n < length; ++n) {
    const double t = static_cast<double>(n) / sample_rate_hz;
    double v = 0.0;
    for (int c = 0; c < 3; ++c) {
      v += kToneAmplitudes[c] * std::cos(2.0 * std::numbers::pi * kToneFrequenciesHz[c] * t);
    }
    x[n] = v;
  }
  return RealFrame(std::move(x), sample_rate_hz);
}

inline double mean_power(std::span<const double> x) {
  double p = 0.0;
  for (double v : x) p += v * v;
  return x.empty() ? 0.0 : p / static_cast<double>(x.size());
}

/// Adds white Gaussian noise of power P / 10^(snr_db / 10), P the mean
/// sample power of the frame; the realized noise power matches exactly.
/// snr_db = +inf returns the frame unchanged.
inline RealFrame add_awgn(const RealFrame& frame, double snr_db, std::uint64_t seed) {
  if (snr_db == kNoNoise) return frame;
  if (std::isnan(snr_db)) throw InvalidInput("snr_db is NaN");
  const double power = mean_power(frame.samples());
  if (!(power > 0.0)) throw InvalidInput("cannot set an SNR on a zero-power frame");
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  std::vector<double> noise(frame.size());
  for (auto& v : noise) v = gauss(rng);
  // Rescale the draw so its realized power is exactly sigma^2.
  const double realized = mean_power(noise);
  const double gain = realized > 0.0 ? sigma / std::sqrt(realized) : 1.0;
  std::vector<double> out(frame.samples().begin(), frame.samples().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += gain * noise[i];
  return RealFrame(std::move(out), frame.sample_rate_hz());
}

/// eta = sum_k ((f_k - f_c,k) / f_c,k)^2 after sorting both vectors ascending.
inline double center_freq_error(std::span<const double> estimated, std::span<const double> actual) {
  if (estimated.size() != actual.size()) {
    throw InvalidInput("center_freq_error: estimated and actual differ in length");
  }
  std::vector<double> est(estimated.begin(), estimated.end());
  std::vector<double> act(actual.begin(), actual.end());
  std::sort(est.begin(), est.end());
  std::sort(act.begin(), act.end());
  double eta = 0.0;
  for (std::size_t k = 0; k < act.size(); ++k) {
    if (act[k] == 0.0) throw InvalidInput("center_freq_error: zero actual frequency");
    const double r = (est[k] - act[k]) / act[k];
    eta += r * r;
  }
  return eta;
}

// ---------------------------------------------------------------------------
// Synthetic emitters

/// Per-emitter hardware impairments. The real frame is read as the in-phase
/// rail of a complex baseband signal whose quadrature rail is its Hilbert
/// transform; impairments act on that complex signal and the real part is kept.
struct EmitterProfile {
  std::string emitter_id;
  double iq_gain_imbalance_db = 0.0;
  double iq_phase_skew = 0.0;           // radians
  std::vector<double> harmonic_coeffs;  // relative amplitudes of the 2nd, 3rd, ... harmonics
  double freq_offset = 0.0;             // cycles/sample
  double phase_noise_std = 0.0;         // radians/sample, random-walk increment

  void validate() const {
    for (double h : harmonic_coeffs) {
      if (!(std::abs(h) < 1.0)) throw InvalidConfig("harmonic coefficients must be < 1 in magnitude");
    }
    if (!(phase_noise_std >= 0.0)) throw InvalidConfig("phase noise std must be >= 0");
    if (!std::isfinite(iq_gain_imbalance_db) || !std::isfinite(iq_phase_skew) ||
        !std::isfinite(freq_offset)) {
      throw InvalidConfig("emitter profile has non-finite parameters");
    }
  }
};

namespace detail {

/// FNV-1a, used to key an emitter's phase-noise walk to its id.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// T_n(u) by the three-term recurrence.
inline double chebyshev(std::size_t n, double u) {
  double t0 = 1.0;
  double t1 = u;
  if (n == 0) return t0;
  for (std::size_t k = 1; k < n; ++k) {
    const double t2 = 2.0 * u * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

/// Periodic analytic signal x + j H(x) of a real sequence.
inline std::vector<std::complex<double>> analytic_signal(std::span<const double> x) {
  std::vector<std::complex<double>> buf(x.begin(), x.end());
  const std::size_t n = buf.size();
  fft::forward(buf);
  for (std::size_t i = 1; i < (n + 1) / 2; ++i) buf[i] *= 2.0;
  for (std::size_t i = n / 2 + 1; i < n; ++i) buf[i] = 0.0;
  fft::inverse(buf);
  return buf;
}

}  // namespace detail

/// Applies the deterministic part of an emitter's impairments:
///   1. memoryless nonlinearity x + p * sum_m h_m T_{m+2}(x / p), p = max|x|,
///      so a full-scale tone gains harmonics of relative amplitude h_m;
///   2. IQ imbalance z' = mu z + nu conj(z) with mu = (1 + g e^{-j phi}) / 2,
///      nu = (1 - g e^{j phi}) / 2, g the linear gain ratio;
///   3. carrier offset and a phase-noise random walk fixed by the emitter id.
/// The identity profile returns the input unchanged.
inline RealFrame apply_emitter_impairments(const EmitterProfile& profile, const RealFrame& message) {
  profile.validate();
  const auto x = message.samples();
  const std::size_t n = x.size();

  std::vector<double> shaped(x.begin(), x.end());
  if (!profile.harmonic_coeffs.empty()) {
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        const double u = x[i] / peak;
        double extra = 0.0;
        for (std::size_t m = 0; m < profile.harmonic_coeffs.size(); ++m) {
          extra += profile.harmonic_coeffs[m] * detail::chebyshev(m + 2, u);
        }
        shaped[i] += peak * extra;
      }
    }
  }

  const bool iq = profile.iq_gain_imbalance_db != 0.0 || profile.iq_phase_skew != 0.0;
  const bool rotate = profile.freq_offset != 0.0 || profile.phase_noise_std > 0.0;
  if (!rotate) {
    // Re(mu z + nu conj(z)) = Re(z) because mu + conj(nu) = 1: imbalance is invisible
    // without a carrier rotation.
    return RealFrame(std::move(shaped), message.sample_rate_hz());
  }

  auto z = detail::analytic_signal(shaped);
  if (iq) {
    const double g = std::pow(10.0, profile.iq_gain_imbalance_db / 20.0);
    const std::complex<double> mu = 0.5 * (1.0 + g * std::polar(1.0, -profile.iq_phase_skew));
    const std::complex<double> nu = 0.5 * (1.0 - g * std::polar(1.0, profile.iq_phase_skew));
    for (auto& v : z) v = mu * v + nu * std::conj(v);
  }
  std::mt19937_64 rng(derive_seed(detail::fnv1a(profile.emitter_id), 0x5eed));
  std::normal_distribution<double> walk(0.0, profile.phase_noise_std);
  double phase_noise = 0.0;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (profile.phase_noise_std > 0.0) phase_noise += walk(rng);
    const double psi =
        2.0 * std::numbers::pi * profile.freq_offset * static_cast<double>(i) + phase_noise;
    out[i] = (z[i] * std::polar(1.0, psi)).real();
  }
  return RealFrame(std::move(out), message.sample_rate_hz());
}

/// num_frames copies of the impaired message, each with independent AWGN at
/// snr_db (noise stream j of `seed`). The impairment signature is identical
/// across frames and seeds.
inline FrameBatch synth_emitter_frames(const EmitterProfile& profile, const RealFrame& base_message,
                                       std::size_t num_frames, double snr_db, std::uint64_t seed) {
  if (num_frames == 0) throw InvalidInput("synth_emitter_frames: zero frames requested");
  const RealFrame clean = apply_emitter_impairments(profile, base_message);
  std::vector<RealFrame> frames;
  frames.reserve(num_frames);
  for (std::size_t j = 0; j < num_frames; ++j) {
    frames.push_back(add_awgn(clean, snr_db, derive_seed(seed, j)));
  }
  return FrameBatch(std::move(frames));
}

}  // namespace jvmd

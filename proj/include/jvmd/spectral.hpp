#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "jvmd/fft.hpp"
#include "jvmd/types.hpp"

namespace jvmd {

/// Half-reflection boundary extension: reverse(first L/2) ++ frame ++ reverse(last L/2).
/// The original samples occupy offsets L/2 .. L/2+L-1 of the 2L-sample output.
inline RealFrame mirror_extend(const RealFrame& frame) {
  const auto x = frame.samples();
  const std::size_t n = x.size();
  const std::size_t half = n / 2;
  std::vector<double> out;
  out.reserve(2 * n);
  for (std::size_t i = half; i-- > 0;) out.push_back(x[i]);
  out.insert(out.end(), x.begin(), x.end());
  for (std::size_t i = n; i-- > half;) out.push_back(x[i]);
  return RealFrame(std::move(out), frame.sample_rate_hz());
}

/// Forward DFT of an (already mirrored) frame with every bin at or above
/// half the sample rate zeroed. Bin 0 is kept.
inline AnalyticSpectrum analytic_spectrum(const RealFrame& mirrored) {
  const auto x = mirrored.samples();
  std::vector<Complex> buf(x.begin(), x.end());
  fft::forward(buf);
  std::fill(buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2), buf.end(), Complex{});
  return AnalyticSpectrum(std::move(buf));
}

/// mirror_extend followed by analytic_spectrum.
inline AnalyticSpectrum frame_spectrum(const RealFrame& frame) {
  return analytic_spectrum(mirror_extend(frame));
}

/// Inverse of the one-sided convention: conjugate-symmetric extension, inverse
/// DFT, real part, and the centre `original_length` samples.
inline RealFrame synthesize_time(const AnalyticSpectrum& spectrum, std::size_t original_length,
                                 double sample_rate_hz = 1.0) {
  const std::size_t t = spectrum.size();
  if (t != 2 * original_length) {
    throw DimensionMismatch("spectrum of length " + std::to_string(t) +
                            " cannot synthesize a frame of length " +
                            std::to_string(original_length));
  }
  const auto half = spectrum.positive_half();
  std::vector<Complex> buf(t);
  buf[0] = half[0];
  for (std::size_t i = 1; i < half.size(); ++i) {
    buf[i] = half[i];
    buf[t - i] = std::conj(half[i]);
  }
  fft::inverse(buf);
  std::vector<double> out(original_length);
  const std::size_t offset = original_length / 2;
  for (std::size_t n = 0; n < original_length; ++n) out[n] = buf[offset + n].real();
  return RealFrame(std::move(out), sample_rate_hz);
}

}  // namespace jvmd

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jvmd/errors.hpp"

namespace jvmd {

using Complex = std::complex<double>;

/// A finite, even-length, uniformly sampled real signal (L >= 4).
class RealFrame {
public:
  RealFrame(std::vector<double> samples, double sample_rate_hz)
      : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    if (samples_.size() < 4 || samples_.size() % 2 != 0) {
      throw InvalidFrame("frame length must be even and >= 4, got " +
                         std::to_string(samples_.size()));
    }
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_)) {
      throw InvalidFrame("sample rate must be positive and finite");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      if (!std::isfinite(samples_[i])) {
        throw InvalidFrame("non-finite sample at index " + std::to_string(i));
      }
    }
  }

  std::size_t size() const noexcept { return samples_.size(); }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }

  bool operator==(const RealFrame&) const = default;

private:
  std::vector<double> samples_;
  double sample_rate_hz_;
};

/// One-sided DFT of a mirrored frame. Holds all T coefficients; bins with
/// normalized frequency i/T >= 1/2 are exactly zero.
class AnalyticSpectrum {
public:
  AnalyticSpectrum() = default;

  explicit AnalyticSpectrum(std::vector<Complex> coefficients)
      : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty() || coefficients_.size() % 2 != 0) {
      throw DimensionMismatch("analytic spectrum length must be even and nonzero");
    }
    for (std::size_t i = coefficients_.size() / 2; i < coefficients_.size(); ++i) {
      if (coefficients_[i] != Complex{}) {
        throw InvalidInput("analytic spectrum has energy at non-positive frequency bin " +
                           std::to_string(i));
      }
    }
  }

  /// Builds a spectrum of length 2 * half.size() from its positive half.
  static AnalyticSpectrum from_positive_half(std::span<const Complex> half) {
    std::vector<Complex> full(2 * half.size());
    std::copy(half.begin(), half.end(), full.begin());
    return AnalyticSpectrum(std::move(full));
  }

  std::size_t size() const noexcept { return coefficients_.size(); }
  std::size_t positive_bins() const noexcept { return coefficients_.size() / 2; }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }
  std::span<const Complex> positive_half() const noexcept {
    return std::span<const Complex>(coefficients_).first(positive_bins());
  }
  Complex operator[](std::size_t i) const noexcept { return coefficients_[i]; }

  /// Normalized frequency of bin i in cycles/sample.
  double frequency(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(coefficients_.size());
  }

  bool operator==(const AnalyticSpectrum&) const = default;

private:
  std::vector<Complex> coefficients_;
};

/// M time-aligned frames sharing length and sample rate (M >= 1).
class FrameBatch {
public:
  explicit FrameBatch(std::vector<RealFrame> frames) : frames_(std::move(frames)) {
    if (frames_.empty()) throw InvalidInput("frame batch is empty");
    for (const auto& f : frames_) {
      if (f.size() != frames_.front().size() ||
          f.sample_rate_hz() != frames_.front().sample_rate_hz()) {
        throw InvalidInput("frames in a batch must share length and sample rate");
      }
    }
  }

  std::size_t size() const noexcept { return frames_.size(); }
  std::size_t frame_length() const noexcept { return frames_.front().size(); }
  double sample_rate_hz() const noexcept { return frames_.front().sample_rate_hz(); }
  const std::vector<RealFrame>& frames() const noexcept { return frames_; }
  const RealFrame& operator[](std::size_t j) const noexcept { return frames_[j]; }

private:
  std::vector<RealFrame> frames_;
};

}  // namespace jvmd

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "jvmd/admm.hpp"
#include "jvmd/spectral.hpp"
#include "jvmd/types.hpp"

namespace jvmd {

struct VmdConfig {
  std::size_t num_modes = 3;
  double alpha = 2000.0;
  double tau = 0.0;
  std::size_t max_iters = 500;
  double tol = 1e-7;
  OmegaInit omega_init = OmegaInit::uniform;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_modes < 1) throw InvalidConfig("num_modes must be >= 1");
    if (!(alpha > 0.0)) throw InvalidConfig("alpha must be > 0");
    if (!(tau >= 0.0)) throw InvalidConfig("tau must be >= 0");
    if (max_iters < 1) throw InvalidConfig("max_iters must be >= 1");
    if (!(tol > 0.0)) throw InvalidConfig("tol must be > 0");
  }
};

struct VmdResult {
  std::vector<AnalyticSpectrum> mode_spectra;
  std::vector<RealFrame> modes;
  std::vector<double> omegas;  // cycles/sample, ascending
  AnalyticSpectrum multiplier;
  std::size_t iterations = 0;
  std::vector<double> kappa_history;
  bool converged = false;
  double sample_rate_hz = 1.0;
};

/// Wiener-filter update of one mode over the positive bins:
/// S_k = (Y - others + lambda/2) / (1 + 2 alpha (w - w_k)^2), with w = i / (2 * bins).
inline void mode_update_vmd(std::span<const Complex> y, std::span<const Complex> others,
                            std::span<const Complex> multiplier, double alpha, double omega_k,
                            std::span<Complex> out) {
  const std::size_t bins = y.size();
  if (others.size() != bins || multiplier.size() != bins || out.size() != bins) {
    throw DimensionMismatch("mode_update_vmd: spectra on different grids");
  }
  const double t = 2.0 * static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double d = static_cast<double>(i) / t - omega_k;
    out[i] = (y[i] - others[i] + 0.5 * multiplier[i]) / (1.0 + 2.0 * alpha * d * d);
  }
}

/// Same update with the off-mode sum taken from `modes` (every entry except k).
inline std::vector<Complex> mode_update_vmd(std::span<const Complex> y,
                                            std::span<const std::vector<Complex>> modes,
                                            std::size_t k, double alpha, double omega_k,
                                            std::span<const Complex> multiplier) {
  std::vector<Complex> others(y.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i == k) continue;
    if (modes[i].size() != y.size()) throw DimensionMismatch("mode_update_vmd: mode length");
    for (std::size_t b = 0; b < y.size(); ++b) others[b] += modes[i][b];
  }
  std::vector<Complex> out(y.size());
  mode_update_vmd(y, others, multiplier, alpha, omega_k, out);
  return out;
}

/// Dual ascent: lambda += tau * (Y - sum_i S_i), bin-wise, in place.
inline void lambda_update_vmd(std::span<Complex> multiplier, std::span<const Complex> y,
                              std::span<const Complex> mode_sum, double tau) {
  if (y.size() != multiplier.size() || mode_sum.size() != multiplier.size()) {
    throw DimensionMismatch("lambda_update_vmd: spectra on different grids");
  }
  if (tau == 0.0) return;
  for (std::size_t i = 0; i < multiplier.size(); ++i) {
    multiplier[i] += tau * (y[i] - mode_sum[i]);
  }
}

namespace detail {

/// Fills `others` with sum_{i != k} modes[i], bin by bin.
inline void off_mode_sum(const std::vector<std::vector<Complex>>& modes, std::size_t k,
                         std::vector<Complex>& others) {
  const std::size_t bins = others.size();
  std::fill(others.begin(), others.end(), Complex{});
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i == k) continue;
    const Complex* src = modes[i].data();
    for (std::size_t b = 0; b < bins; ++b) others[b] += src[b];
  }
}

inline void mode_sum(const std::vector<std::vector<Complex>>& modes, std::vector<Complex>& sum) {
  std::fill(sum.begin(), sum.end(), Complex{});
  for (const auto& m : modes) {
    for (std::size_t b = 0; b < sum.size(); ++b) sum[b] += m[b];
  }
}

}  // namespace detail

/// Single-frame variational mode decomposition via ADMM with a Gauss-Seidel
/// sweep over modes. Stops when kappa <= tol or after max_iters (counting the
/// initial state as iteration 1). Modes are returned with ascending omegas.
inline VmdResult vmd_decompose(const RealFrame& frame, const VmdConfig& config) {
  config.validate();
  const std::size_t num_modes = config.num_modes;
  const AnalyticSpectrum y_full = frame_spectrum(frame);
  const auto y = y_full.positive_half();
  const std::size_t bins = y.size();

  std::vector<std::vector<Complex>> modes(num_modes, std::vector<Complex>(bins));
  std::vector<std::vector<Complex>> previous = modes;
  std::vector<double> omegas = initial_omegas(num_modes, config.omega_init, config.seed);
  std::vector<Complex> multiplier(bins);
  std::vector<Complex> others(bins);
  std::vector<Complex> sum(bins);

  VmdResult result;
  std::size_t n = 1;
  double kappa = std::numeric_limits<double>::infinity();
  while (n < config.max_iters && kappa > config.tol) {
    ++n;
    previous = modes;
    // Gauss-Seidel: modes[i < k] already hold this sweep's values.
    for (std::size_t k = 0; k < num_modes; ++k) {
      detail::off_mode_sum(modes, k, others);
      mode_update_vmd(y, others, multiplier, config.alpha, omegas[k], modes[k]);
      omegas[k] = omega_update(modes[k], omegas[k]);
    }
    detail::mode_sum(modes, sum);
    lambda_update_vmd(multiplier, y, sum, config.tau);

    kappa = convergence_kappa(modes, previous);
    if (!std::isfinite(kappa) || !detail::all_finite(multiplier)) throw Divergence("vmd", n);
    result.kappa_history.push_back(kappa);
  }

  const auto order = ascending_order(omegas);
  modes = detail::permute(std::move(modes), order);
  omegas = detail::permute(std::move(omegas), order);

  result.iterations = n;
  result.converged = kappa <= config.tol;
  result.omegas = std::move(omegas);
  result.sample_rate_hz = frame.sample_rate_hz();
  result.multiplier = AnalyticSpectrum::from_positive_half(multiplier);
  result.mode_spectra.reserve(num_modes);
  result.modes.reserve(num_modes);
  for (auto& m : modes) {
    result.mode_spectra.push_back(AnalyticSpectrum::from_positive_half(m));
    result.modes.push_back(
        synthesize_time(result.mode_spectra.back(), frame.size(), frame.sample_rate_hz()));
  }
  return result;
}

}  // namespace jvmd

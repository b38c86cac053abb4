#pragma once

// Joint variational mode decomposition: M frames share K modes and center
// frequencies; each frame j carries its own noise term b_j and multiplier
// lambda_j. Four-block ADMM, one sweep per iteration:
//
//   for k: S_k  <- sum_j (U_j - sum_{i!=k} S_i) / (M + 2 alpha (w - w_k)^2)
//          w_k  <- spectral centroid of S_k
//   for j: b_j  <- (Y_j - sum_i S_i + lambda_j/2) / (1 + alpha eps)
//          lambda_j <- cbrt(4 (Y_j - sum_i S_i - b_j + lambda_j/2))
//
// with U_j = Y_j - b_j + lambda_j/2. Everything lives on the positive half of
// the one-sided spectrum of the mirrored frames.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "jvmd/admm.hpp"
#include "jvmd/spectral.hpp"
#include "jvmd/types.hpp"
#include "jvmd/vmd.hpp"

namespace jvmd {

enum class LambdaRule { cube_root, dual_ascent };

inline std::string_view to_string(LambdaRule rule) {
  return rule == LambdaRule::cube_root ? "cube-root" : "dual-ascent";
}

inline LambdaRule parse_lambda_rule(std::string_view s) {
  if (s == "cube-root") return LambdaRule::cube_root;
  if (s == "dual-ascent") return LambdaRule::dual_ascent;
  throw InvalidConfig("unknown lambda rule '" + std::string(s) + "'");
}

struct JvmdConfig {
  std::size_t num_modes = 3;
  double alpha = 2000.0;
  /// Noise weighting; unset means 1/alpha (alpha * epsilon = 1).
  std::optional<double> epsilon;
  std::size_t max_iters = 500;
  double tol = 1e-7;
  OmegaInit omega_init = OmegaInit::zero;
  std::uint64_t seed = 0;
  LambdaRule lambda_rule = LambdaRule::cube_root;
  /// Step for LambdaRule::dual_ascent.
  double dual_step = 0.0;

  double effective_epsilon() const { return epsilon.value_or(1.0 / alpha); }

  void validate() const {
    if (num_modes < 1) throw InvalidConfig("num_modes must be >= 1");
    if (!(alpha > 0.0)) throw InvalidConfig("alpha must be > 0");
    if (!(effective_epsilon() > 0.0)) throw InvalidConfig("epsilon must be > 0");
    if (max_iters < 1) throw InvalidConfig("max_iters must be >= 1");
    if (!(tol > 0.0)) throw InvalidConfig("tol must be > 0");
    if (!(dual_step >= 0.0)) throw InvalidConfig("dual step must be >= 0");
  }
};

struct JvmdResult {
  std::vector<AnalyticSpectrum> mode_spectra;
  std::vector<RealFrame> modes;
  std::vector<double> omegas;  // cycles/sample, ascending
  std::vector<AnalyticSpectrum> noise_estimates;
  std::vector<AnalyticSpectrum> multipliers;
  std::size_t iterations = 0;
  std::vector<double> kappa_history;
  bool converged = false;
  double sample_rate_hz = 1.0;
};

namespace detail {

/// Real cube root of r > 0: exponent-bit estimate refined by two Halley steps
/// and one Newton step. Falls back to libm outside the normal range.
inline double cbrt_positive(double r) {
  if (r < 1e-290 || r > 1e290) return std::cbrt(r);
  std::uint64_t bits;
  std::memcpy(&bits, &r, sizeof bits);
  bits = bits / 3 + 0x2A9F7893782DA1CEULL;
  double t;
  std::memcpy(&t, &bits, sizeof t);
  for (int i = 0; i < 2; ++i) {
    const double t3 = t * t * t;
    t = t * (t3 + 2.0 * r) / (2.0 * t3 + r);
  }
  return t - (t * t * t - r) / (3.0 * t * t);
}

}  // namespace detail

/// Principal cube root |z|^(1/3) exp(i arg(z) / 3) with arg in (-pi, pi].
///
/// The start point combines a one-Halley-step real cube root of |z| with a
/// polynomial estimate of exp(i arg/3), both good to ~1e-5. Two complex
/// Newton steps w <- (2w + z / w^2) / 3 bring it to ~1e-15 relative; starting
/// that close to the principal root, Newton cannot jump branches.
inline Complex principal_cbrt(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  if (x == 0.0 && y == 0.0) return {};
  if (y == 0.0) {
    if (x > 0.0) return {detail::cbrt_positive(x), 0.0};
    // arg = pi, never -pi
    const double rc = detail::cbrt_positive(-x);
    return {0.5 * rc, rc * (std::numbers::sqrt3 / 2.0)};
  }
  const double r2 = x * x + y * y;
  if (!(r2 > 1e-290 && r2 < 1e290)) {
    return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
  }
  const double r = std::sqrt(r2);

  std::uint64_t bits;
  std::memcpy(&bits, &r, sizeof bits);
  bits = bits / 3 + 0x2A9F7893782DA1CEULL;
  double rc;
  std::memcpy(&rc, &bits, sizeof rc);
  const double rc3 = rc * rc * rc;
  rc = rc * (rc3 + 2.0 * r) / (2.0 * rc3 + r);

  const double ax = std::abs(x);
  const double ay = std::abs(y);
  const bool steep = ay > ax;
  const double a = (steep ? ax : ay) / (steep ? ay : ax);
  const double s = a * a;
  double theta = ((((0.0208351 * s - 0.085133) * s + 0.180141) * s - 0.3302995) * s + 0.999866) * a;
  theta = steep ? std::numbers::pi / 2.0 - theta : theta;
  theta = x < 0.0 ? std::numbers::pi - theta : theta;
  theta = std::copysign(theta, y);

  const double phi = theta * (1.0 / 3.0);
  const double p2 = phi * phi;
  double wx = rc * (1.0 - p2 * (0.5 - p2 * (1.0 / 24.0 - p2 * (1.0 / 720.0))));
  double wy = rc * phi * (1.0 - p2 * (1.0 / 6.0 - p2 * (1.0 / 120.0 - p2 * (1.0 / 5040.0))));
  for (int i = 0; i < 2; ++i) {
    // z / w^2 = z conj(w)^2 / |w|^4
    const double cx = wx * wx - wy * wy;
    const double cy = -2.0 * wx * wy;
    const double n2 = wx * wx + wy * wy;
    const double inv = 1.0 / (n2 * n2);
    wx = (2.0 * wx + (x * cx - y * cy) * inv) * (1.0 / 3.0);
    wy = (2.0 * wy + (x * cy + y * cx) * inv) * (1.0 / 3.0);
  }
  return {wx, wy};
}

/// U_j = Y_j - b_j + lambda_j / 2.
inline void jvmd_u(std::span<const Complex> y, std::span<const Complex> noise,
                   std::span<const Complex> multiplier, std::span<Complex> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] - noise[i] + 0.5 * multiplier[i];
}

/// Shared-mode update given sum_j U_j and the off-mode sum:
/// S_k = (sum_u - M * others) / (M + 2 alpha (w - w_k)^2).
inline void mode_update_jvmd(std::span<const Complex> sum_u, std::span<const Complex> others,
                             std::size_t num_frames, double alpha, double omega_k,
                             std::span<Complex> out) {
  const std::size_t bins = sum_u.size();
  if (others.size() != bins || out.size() != bins) {
    throw DimensionMismatch("mode_update_jvmd: spectra on different grids");
  }
  const double m = static_cast<double>(num_frames);
  const double t = 2.0 * static_cast<double>(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const double d = static_cast<double>(i) / t - omega_k;
    out[i] = (sum_u[i] - m * others[i]) / (m + 2.0 * alpha * d * d);
  }
}

/// Shared-mode update from per-frame state; forms U_j and the off-mode sum.
inline std::vector<Complex> mode_update_jvmd(std::span<const std::vector<Complex>> frames,
                                             std::span<const std::vector<Complex>> modes,
                                             std::span<const std::vector<Complex>> noise,
                                             std::span<const std::vector<Complex>> multipliers,
                                             std::size_t k, double alpha, double omega_k) {
  if (frames.empty() || noise.size() != frames.size() || multipliers.size() != frames.size()) {
    throw DimensionMismatch("mode_update_jvmd: per-frame state count mismatch");
  }
  const std::size_t bins = frames.front().size();
  std::vector<Complex> sum_u(bins);
  std::vector<Complex> u(bins);
  for (std::size_t j = 0; j < frames.size(); ++j) {
    jvmd_u(frames[j], noise[j], multipliers[j], u);
    for (std::size_t i = 0; i < bins; ++i) sum_u[i] += u[i];
  }
  std::vector<Complex> others(bins);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i == k) continue;
    for (std::size_t b = 0; b < bins; ++b) others[b] += modes[i][b];
  }
  std::vector<Complex> out(bins);
  mode_update_jvmd(sum_u, others, frames.size(), alpha, omega_k, out);
  return out;
}

/// b_j = (Y_j - sum_i S_i + lambda_j / 2) / (1 + alpha * epsilon).
inline void noise_update(std::span<const Complex> y, std::span<const Complex> mode_sum,
                         std::span<const Complex> multiplier, double alpha, double epsilon,
                         std::span<Complex> out) {
  if (mode_sum.size() != y.size() || multiplier.size() != y.size() || out.size() != y.size()) {
    throw DimensionMismatch("noise_update: spectra on different grids");
  }
  const double scale = 1.0 / (1.0 + alpha * epsilon);
  for (std::size_t i = 0; i < y.size(); ++i) {
    out[i] = (y[i] - mode_sum[i] + 0.5 * multiplier[i]) * scale;
  }
}

/// In-place multiplier update. cube_root: lambda <- cbrt(4 (Y - sum S - b + lambda/2));
/// dual_ascent: lambda <- lambda + step (Y - sum S - b).
inline void lambda_update_jvmd(std::span<const Complex> y, std::span<const Complex> mode_sum,
                               std::span<const Complex> noise, std::span<Complex> multiplier,
                               LambdaRule rule, double step = 0.0) {
  if (mode_sum.size() != y.size() || noise.size() != y.size() || multiplier.size() != y.size()) {
    throw DimensionMismatch("lambda_update_jvmd: spectra on different grids");
  }
  if (rule == LambdaRule::cube_root) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      multiplier[i] = principal_cbrt(4.0 * (y[i] - mode_sum[i] - noise[i] + 0.5 * multiplier[i]));
    }
  } else if (step != 0.0) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      multiplier[i] += step * (y[i] - mode_sum[i] - noise[i]);
    }
  }
}

/// Joint decomposition of a frame batch. Follows the update order above
/// exactly; stops when kappa <= tol or after max_iters (the zero state counts
/// as iteration 1). Modes are returned with ascending omegas.
inline JvmdResult jvmd_decompose(const FrameBatch& batch, const JvmdConfig& config) {
  config.validate();
  const std::size_t num_modes = config.num_modes;
  const std::size_t num_frames = batch.size();
  const double alpha = config.alpha;
  const double epsilon = config.effective_epsilon();

  std::vector<std::vector<Complex>> y;
  y.reserve(num_frames);
  for (const auto& f : batch.frames()) {
    const auto spec = frame_spectrum(f);
    y.emplace_back(spec.positive_half().begin(), spec.positive_half().end());
  }
  const std::size_t bins = y.front().size();

  std::vector<std::vector<Complex>> modes(num_modes, std::vector<Complex>(bins));
  std::vector<std::vector<Complex>> previous = modes;
  std::vector<double> omegas = initial_omegas(num_modes, config.omega_init, config.seed);
  std::vector<std::vector<Complex>> noise(num_frames, std::vector<Complex>(bins));
  std::vector<std::vector<Complex>> multipliers(num_frames, std::vector<Complex>(bins));
  std::vector<Complex> sum_u(bins);
  std::vector<Complex> others(bins);
  std::vector<Complex> sum(bins);

  JvmdResult result;
  std::size_t n = 1;
  double kappa = std::numeric_limits<double>::infinity();
  const double noise_scale = 1.0 / (1.0 + alpha * epsilon);

  // sum_j U_j only changes in the frame loop; with b = lambda = 0 it starts as sum_j Y_j.
  for (const auto& yj : y) {
    for (std::size_t i = 0; i < bins; ++i) sum_u[i] += yj[i];
  }

  while (n < config.max_iters && kappa > config.tol) {
    ++n;
    previous = modes;

    for (std::size_t k = 0; k < num_modes; ++k) {
      detail::off_mode_sum(modes, k, others);
      mode_update_jvmd(sum_u, others, num_frames, alpha, omegas[k], modes[k]);
      omegas[k] = omega_update(modes[k], omegas[k]);
    }

    detail::mode_sum(modes, sum);
    // noise_update then lambda_update_jvmd for each frame, fused into one pass
    // that also accumulates next sweep's sum_j U_j.
    std::fill(sum_u.begin(), sum_u.end(), Complex{});
    for (std::size_t j = 0; j < num_frames; ++j) {
      const Complex* yj = y[j].data();
      Complex* bj = noise[j].data();
      Complex* lj = multipliers[j].data();
      for (std::size_t i = 0; i < bins; ++i) {
        const Complex residual = yj[i] - sum[i];
        const Complex half_lambda = 0.5 * lj[i];
        bj[i] = (residual + half_lambda) * noise_scale;
        if (config.lambda_rule == LambdaRule::cube_root) {
          lj[i] = principal_cbrt(4.0 * (residual - bj[i] + half_lambda));
        } else {
          lj[i] += config.dual_step * (residual - bj[i]);
        }
        sum_u[i] += yj[i] - bj[i] + 0.5 * lj[i];
      }
    }

    // A non-finite b_j or lambda_j reaches the modes, and so kappa, one sweep later.
    kappa = convergence_kappa(modes, previous);
    if (!std::isfinite(kappa)) throw Divergence("jvmd", n);
    result.kappa_history.push_back(kappa);
  }
  for (std::size_t j = 0; j < num_frames; ++j) {
    if (!detail::all_finite(noise[j]) || !detail::all_finite(multipliers[j])) {
      throw Divergence("jvmd", n);
    }
  }

  const auto order = ascending_order(omegas);
  modes = detail::permute(std::move(modes), order);
  omegas = detail::permute(std::move(omegas), order);

  const std::size_t length = batch.frame_length();
  const double fs = batch.sample_rate_hz();
  result.iterations = n;
  result.converged = kappa <= config.tol;
  result.omegas = std::move(omegas);
  result.sample_rate_hz = fs;
  for (auto& m : modes) {
    result.mode_spectra.push_back(AnalyticSpectrum::from_positive_half(m));
    result.modes.push_back(synthesize_time(result.mode_spectra.back(), length, fs));
  }
  for (std::size_t j = 0; j < num_frames; ++j) {
    result.noise_estimates.push_back(AnalyticSpectrum::from_positive_half(noise[j]));
    result.multipliers.push_back(AnalyticSpectrum::from_positive_half(multipliers[j]));
  }
  return result;
}

}  // namespace jvmd

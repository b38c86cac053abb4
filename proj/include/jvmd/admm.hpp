#pragma once

// Pieces shared by the single-frame and joint solvers: center-frequency
// initialization and update, the relative-change stopping measure, and the
// ascending reorder of the final modes.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "jvmd/types.hpp"

namespace jvmd {

enum class OmegaInit { zero, uniform, seeded_random };

inline std::string_view to_string(OmegaInit init) {
  switch (init) {
    case OmegaInit::zero: return "zero";
    case OmegaInit::uniform: return "uniform";
    case OmegaInit::seeded_random: return "seeded-random";
  }
  return "?";
}

inline OmegaInit parse_omega_init(std::string_view s) {
  if (s == "zero") return OmegaInit::zero;
  if (s == "uniform") return OmegaInit::uniform;
  if (s == "seeded-random" || s == "random") return OmegaInit::seeded_random;
  throw InvalidConfig("unknown omega init '" + std::string(s) + "'");
}

/// Starting center frequencies in cycles/sample. uniform places mode k (1-based)
/// at k / (2K + 2); seeded-random draws uniformly from (0, 1/2).
inline std::vector<double> initial_omegas(std::size_t num_modes, OmegaInit init,
                                          std::uint64_t seed) {
  std::vector<double> omegas(num_modes, 0.0);
  switch (init) {
    case OmegaInit::zero:
      break;
    case OmegaInit::uniform:
      for (std::size_t k = 0; k < num_modes; ++k) {
        omegas[k] = static_cast<double>(k + 1) / static_cast<double>(2 * num_modes + 2);
      }
      break;
    case OmegaInit::seeded_random: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(0.0, 0.5);
      for (auto& w : omegas) {
        do {
          w = dist(rng);
        } while (w == 0.0);
      }
      break;
    }
  }
  return omegas;
}

/// Power-spectral centroid over the positive half of a one-sided spectrum of
/// length 2 * half.size(). Returns `previous` when the spectrum has no energy.
inline double omega_update(std::span<const Complex> half, double previous) {
  const double t = 2.0 * static_cast<double>(half.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < half.size(); ++i) {
    const double p = std::norm(half[i]);
    num += static_cast<double>(i) * p;
    den += p;
  }
  if (den == 0.0) return previous;
  return num / (den * t);
}

inline double omega_update(const AnalyticSpectrum& s, double previous) {
  return omega_update(s.positive_half(), previous);
}

inline double squared_norm(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& c : v) acc += std::norm(c);
  return acc;
}

/// kappa = sum_k ||S_k - S_k_prev||^2 / ||S_k||^2. Modes whose current energy is
/// zero contribute nothing, so all-zero mode sets give 0.
inline double convergence_kappa(std::span<const std::vector<Complex>> current,
                                std::span<const std::vector<Complex>> previous) {
  if (current.size() != previous.size()) {
    throw DimensionMismatch("kappa needs mode sets of equal size");
  }
  double kappa = 0.0;
  for (std::size_t k = 0; k < current.size(); ++k) {
    const auto& cur = current[k];
    const auto& prev = previous[k];
    if (cur.size() != prev.size()) throw DimensionMismatch("kappa needs equal-length modes");
    double diff = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      diff += std::norm(cur[i] - prev[i]);
      energy += std::norm(cur[i]);
    }
    if (energy > 0.0) kappa += diff / energy;
  }
  return kappa;
}

/// Indices that sort `omegas` ascending; equal values keep their original order.
inline std::vector<std::size_t> ascending_order(std::span<const double> omegas) {
  std::vector<std::size_t> order(omegas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return omegas[a] < omegas[b]; });
  return order;
}

namespace detail {

inline bool all_finite(std::span<const Complex> v) {
  for (const auto& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

template <typename T>
std::vector<T> permute(std::vector<T> values, std::span<const std::size_t> order) {
  std::vector<T> out;
  out.reserve(values.size());
  for (auto idx : order) out.push_back(std::move(values[idx]));
  return out;
}

}  // namespace detail

}  // namespace jvmd

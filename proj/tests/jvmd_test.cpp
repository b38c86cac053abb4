#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "jvmd/jvmd.hpp"
#include "jvmd/signal_lab.hpp"
#include "jvmd/vmd.hpp"
#include "oracles.hpp"

using jvmd::Complex;
using jvmd::FrameBatch;
using jvmd::JvmdConfig;
using jvmd::RealFrame;

namespace {

FrameBatch noisy_mixture(std::size_t m, double snr_db, std::uint64_t seed) {
  const auto clean = jvmd::tone_mixture(1500, 1500.0);
  std::vector<RealFrame> frames;
  for (std::size_t j = 0; j < m; ++j) frames.push_back(jvmd::add_awgn(clean, snr_db, jvmd::derive_seed(seed, j)));
  return FrameBatch(std::move(frames));
}

std::vector<std::vector<Complex>> halves(const FrameBatch& b) {
  std::vector<std::vector<Complex>> out;
  for (const auto& f : b.frames()) {
    const auto s = jvmd::frame_spectrum(f);
    out.emplace_back(s.positive_half().begin(), s.positive_half().end());
  }
  return out;
}

}  // namespace

TEST(ModeUpdateJvmd, Examples) {
  const std::size_t bins = 8;  // T = 16
  std::mt19937_64 rng(1);
  const auto y = oracle::random_spectrum(bins, rng);
  std::vector<Complex> zero(bins);
  std::vector<Complex> out(bins);
  std::vector<Complex> ref(bins);
  // M = 1 with zero noise and multiplier is the single-frame update.
  jvmd::mode_update_jvmd(y, zero, 1, 300.0, 0.2, out);
  jvmd::mode_update_vmd(y, zero, zero, 300.0, 0.2, ref);
  for (std::size_t i = 0; i < bins; ++i) EXPECT_EQ(out[i], ref[i]);

  // M identical frames: the centre bin passes U unchanged for every M.
  for (std::size_t m : {1u, 2u, 5u, 8u}) {
    std::vector<Complex> sum_u(bins);
    for (std::size_t i = 0; i < bins; ++i) sum_u[i] = static_cast<double>(m) * y[i];
    jvmd::mode_update_jvmd(sum_u, zero, m, 2000.0, 3.0 / 16.0, out);
    EXPECT_NEAR(std::abs(out[3] - y[3]), 0.0, 1e-15);
  }

  // M = 2, U = 1, alpha (w - w_k)^2 = 1 at bin 2 (w = 1/8, w_k = 0, alpha = 64).
  std::vector<Complex> two(bins, 2.0);
  jvmd::mode_update_jvmd(two, zero, 2, 64.0, 0.0, out);
  EXPECT_DOUBLE_EQ(out[2].real(), 0.5);
}

TEST(ModeUpdateJvmd, PerFrameOverloadFormsU) {
  const std::vector<std::vector<Complex>> frames{{4, 4}, {6, 6}};
  const std::vector<std::vector<Complex>> noise{{1, 1}, {1, 1}};
  const std::vector<std::vector<Complex>> mult{{2, 2}, {0, 0}};
  const std::vector<std::vector<Complex>> modes{{0, 0}, {1, 1}};
  // sum U = (4 - 1 + 1) + (6 - 1 + 0) = 9, minus M * others = 2, over M = 2.
  const auto s = jvmd::mode_update_jvmd(frames, modes, noise, mult, 0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(s[0].real(), 3.5);
  EXPECT_DOUBLE_EQ(s[1].real(), 3.5);
}

TEST(ModeUpdateJvmd, FiniteDifferenceStationarity) {
  std::mt19937_64 rng(17);
  const std::size_t bins = 48;
  const std::size_t m = 3;
  std::uniform_int_distribution<std::size_t> pick(0, bins - 1);
  std::uniform_real_distribution<double> uw(0.0, 0.5);
  for (int state = 0; state < 10; ++state) {
    std::vector<std::vector<Complex>> u;
    std::vector<Complex> sum_u(bins);
    for (std::size_t j = 0; j < m; ++j) {
      u.push_back(oracle::random_spectrum(bins, rng));
      for (std::size_t i = 0; i < bins; ++i) sum_u[i] += u.back()[i];
    }
    const auto others = oracle::random_spectrum(bins, rng, 0.5);
    const double alpha = 80.0;
    const double wk = uw(rng);
    std::vector<Complex> out(bins);
    jvmd::mode_update_jvmd(sum_u, others, m, alpha, wk, out);
    for (int b = 0; b < 10; ++b) {
      const std::size_t i = pick(rng);
      const double d = static_cast<double>(i) / (2.0 * bins) - wk;
      auto f = [&](Complex s) {
        double acc = 2.0 * alpha * d * d * std::norm(s);
        for (std::size_t j = 0; j < m; ++j) acc += std::norm(u[j][i] - others[i] - s);
        return acc;
      };
      for (Complex dir : {Complex(1, 0), Complex(0, 1)}) {
        const auto [g, curv] = oracle::central_difference(f, out[i], dir, 1e-4);
        EXPECT_LE(std::abs(g), 1e-8 * curv);
      }
    }
  }
}

TEST(NoiseUpdate, Examples) {
  const std::vector<Complex> y{1.0, Complex(0.3, 0.4)};
  const std::vector<Complex> zero(2);
  std::vector<Complex> out(2);
  jvmd::noise_update(y, zero, zero, 500.0, 0.002, out);
  EXPECT_DOUBLE_EQ(out[0].real(), 0.5);
  jvmd::noise_update(y, zero, zero, 1.0, 1e12, out);
  EXPECT_LT(std::abs(out[0]), 1e-9);
  EXPECT_LT(std::abs(out[1]), 1e-9);
  jvmd::noise_update(y, y, zero, 3.0, 0.5, out);
  EXPECT_EQ(out[0], Complex{});
  EXPECT_EQ(out[1], Complex{});
}

TEST(NoiseUpdate, FiniteDifferenceStationarity) {
  std::mt19937_64 rng(23);
  const std::size_t bins = 32;
  std::uniform_int_distribution<std::size_t> pick(0, bins - 1);
  for (int state = 0; state < 10; ++state) {
    const auto y = oracle::random_spectrum(bins, rng);
    const auto sum = oracle::random_spectrum(bins, rng, 0.5);
    const auto lambda = oracle::random_spectrum(bins, rng, 0.2);
    const double alpha = 500.0;
    const double eps = 0.004;
    std::vector<Complex> b(bins);
    jvmd::noise_update(y, sum, lambda, alpha, eps, b);
    for (int k = 0; k < 10; ++k) {
      const std::size_t i = pick(rng);
      auto f = [&](Complex bb) {
        return alpha * eps * std::norm(bb) + std::norm(y[i] - sum[i] - bb + 0.5 * lambda[i]);
      };
      for (Complex dir : {Complex(1, 0), Complex(0, 1)}) {
        const auto [g, curv] = oracle::central_difference(f, b[i], dir, 1e-4);
        EXPECT_LE(std::abs(g), 1e-8 * curv);
      }
    }
  }
}

TEST(PrincipalCbrt, Examples) {
  EXPECT_NEAR(std::abs(jvmd::principal_cbrt(8.0) - Complex(2.0)), 0.0, 1e-15);
  EXPECT_EQ(jvmd::principal_cbrt(0.0), Complex{});
  const Complex r = jvmd::principal_cbrt(Complex(0.0, 8.0));
  EXPECT_NEAR(std::abs(r - 2.0 * std::polar(1.0, std::numbers::pi / 6.0)), 0.0, 1e-14);
  // arg(-8) = pi, never -pi
  const Complex neg = jvmd::principal_cbrt(-8.0);
  EXPECT_NEAR(neg.real(), 1.0, 1e-14);
  EXPECT_NEAR(neg.imag(), std::sqrt(3.0), 1e-14);
}

TEST(PrincipalCbrt, AgreesWithPolarFormula) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> mag(-30.0, 30.0);
  double worst = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const Complex z = std::polar(std::pow(10.0, mag(rng)), ang(rng));
    const Complex ref = oracle::cbrt_polar(z);
    worst = std::max(worst, std::abs(jvmd::principal_cbrt(z) - ref) / std::abs(ref));
  }
  EXPECT_LT(worst, 1e-13);
  for (Complex z : {Complex(1e-200, 1e-200), Complex(-1e300, 1e-300), Complex(0, -1e-310),
                    Complex(-1, -1e-300)}) {
    const Complex ref = oracle::cbrt_polar(z);
    EXPECT_LT(std::abs(jvmd::principal_cbrt(z) - ref) / std::abs(ref), 1e-13) << z;
  }
}

TEST(LambdaUpdateJvmd, Examples) {
  // Inner value w = Y - sum S - b + lambda/2; the update is cbrt(4 w).
  std::vector<Complex> lambda{0.0, 0.0, 0.0};
  const std::vector<Complex> y{2.0, 0.0, Complex(0.0, 2.0)};
  const std::vector<Complex> zero(3);
  jvmd::lambda_update_jvmd(y, zero, zero, lambda, jvmd::LambdaRule::cube_root);
  EXPECT_NEAR(std::abs(lambda[0] - Complex(2.0)), 0.0, 1e-15);
  EXPECT_EQ(lambda[1], Complex{});
  EXPECT_NEAR(std::abs(lambda[2] - 2.0 * std::polar(1.0, std::numbers::pi / 6.0)), 0.0, 1e-14);

  std::vector<Complex> l2{1.0, 1.0, 1.0};
  jvmd::lambda_update_jvmd(y, zero, zero, l2, jvmd::LambdaRule::dual_ascent, 0.0);
  EXPECT_EQ(l2, (std::vector<Complex>{1.0, 1.0, 1.0}));
  jvmd::lambda_update_jvmd(y, zero, zero, l2, jvmd::LambdaRule::dual_ascent, 0.5);
  EXPECT_EQ(l2[0], Complex(2.0));
  EXPECT_EQ(l2[2], Complex(1.0, 1.0));
}

TEST(LambdaUpdateJvmd, CubeRootIsStationaryPoint) {
  // lambda^3 = 4 w makes w lambda - lambda^4 / 16 stationary (complex derivative).
  std::mt19937_64 rng(31);
  for (int state = 0; state < 10; ++state) {
    const auto y = oracle::random_spectrum(10, rng);
    const auto sum = oracle::random_spectrum(10, rng, 0.4);
    const auto b = oracle::random_spectrum(10, rng, 0.1);
    auto lambda = oracle::random_spectrum(10, rng, 0.2);
    std::vector<Complex> w(10);
    for (std::size_t i = 0; i < 10; ++i) w[i] = y[i] - sum[i] - b[i] + 0.5 * lambda[i];
    jvmd::lambda_update_jvmd(y, sum, b, lambda, jvmd::LambdaRule::cube_root);
    for (std::size_t i = 0; i < 10; ++i) {
      auto h = [&](Complex l) { return w[i] * l - l * l * l * l / 16.0; };
      const double step = 1e-5;
      for (Complex dir : {Complex(1, 0), Complex(0, 1)}) {
        const Complex g = (h(lambda[i] + step * dir) - h(lambda[i] - step * dir)) / (2.0 * step);
        const double curv = std::abs(3.0 * lambda[i] * lambda[i] / 4.0);
        EXPECT_LE(std::abs(g), 1e-8 * std::max(curv, 1.0));
      }
      EXPECT_LT(std::abs(lambda[i] - oracle::cbrt_polar(4.0 * w[i])), 1e-13 * std::abs(lambda[i]));
    }
  }
}

TEST(JvmdDecompose, ZeroBatch) {
  std::vector<RealFrame> frames(4, RealFrame(std::vector<double>(20, 0.0), 1.0));
  const auto r = jvmd::jvmd_decompose(FrameBatch(frames), JvmdConfig{});
  EXPECT_EQ(r.iterations, 2u);
  EXPECT_TRUE(r.converged);
  ASSERT_EQ(r.noise_estimates.size(), 4u);
  for (const auto& m : r.mode_spectra) {
    for (auto c : m.coefficients()) EXPECT_EQ(c, Complex{});
  }
  for (const auto& b : r.noise_estimates) {
    for (auto c : b.coefficients()) EXPECT_EQ(c, Complex{});
  }
}

TEST(JvmdDecompose, EmptyBatchRejected) {
  EXPECT_THROW(FrameBatch(std::vector<RealFrame>{}), jvmd::InvalidInput);
}

TEST(JvmdDecompose, MatchesStepByStepComposition) {
  // Drive the public per-step operations in Algorithm 1 order and compare.
  const auto batch = noisy_mixture(3, 10.0, 77);
  JvmdConfig cfg;
  cfg.max_iters = 6;
  cfg.tol = 1e-300;
  const auto r = jvmd::jvmd_decompose(batch, cfg);

  const auto y = halves(batch);
  const std::size_t bins = y[0].size();
  const std::size_t k_modes = cfg.num_modes;
  std::vector<std::vector<Complex>> modes(k_modes, std::vector<Complex>(bins));
  std::vector<std::vector<Complex>> noise(3, std::vector<Complex>(bins));
  std::vector<std::vector<Complex>> mult(3, std::vector<Complex>(bins));
  std::vector<double> omegas(k_modes, 0.0);
  for (std::size_t n = 2; n <= cfg.max_iters; ++n) {
    for (std::size_t k = 0; k < k_modes; ++k) {
      modes[k] = jvmd::mode_update_jvmd(y, modes, noise, mult, k, cfg.alpha, omegas[k]);
      omegas[k] = jvmd::omega_update(modes[k], omegas[k]);
    }
    std::vector<Complex> sum(bins);
    for (const auto& m : modes) {
      for (std::size_t i = 0; i < bins; ++i) sum[i] += m[i];
    }
    for (std::size_t j = 0; j < 3; ++j) {
      jvmd::noise_update(y[j], sum, mult[j], cfg.alpha, cfg.effective_epsilon(), noise[j]);
      jvmd::lambda_update_jvmd(y[j], sum, noise[j], mult[j], cfg.lambda_rule);
    }
  }
  EXPECT_EQ(r.iterations, cfg.max_iters);
  const auto order = jvmd::ascending_order(omegas);
  for (std::size_t k = 0; k < k_modes; ++k) {
    EXPECT_NEAR(r.omegas[k], omegas[order[k]], 1e-12);
    const auto& got = r.mode_spectra[k];
    const auto& want = modes[order[k]];
    double scale = 0.0;
    for (auto c : want) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i < bins; ++i) EXPECT_LE(std::abs(got[i] - want[i]), 1e-10 * scale);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t i = 0; i < bins; ++i) {
      EXPECT_LE(std::abs(r.noise_estimates[j][i] - noise[j][i]), 1e-9 * (1.0 + std::abs(noise[j][i])));
      EXPECT_LE(std::abs(r.multipliers[j][i] - mult[j][i]), 1e-9 * (1.0 + std::abs(mult[j][i])));
    }
  }
}

TEST(JvmdDecompose, SingleFrameReducesToVmd) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RealFrame f(oracle::random_frame(128, 900 + seed), 1.0);
    jvmd::VmdConfig vc;
    vc.num_modes = 3;
    vc.tau = 0.0;
    vc.max_iters = 60;
    vc.tol = 1e-300;
    vc.omega_init = jvmd::OmegaInit::uniform;
    JvmdConfig jc;
    jc.num_modes = 3;
    jc.epsilon = 1e12;
    jc.lambda_rule = jvmd::LambdaRule::dual_ascent;
    jc.dual_step = 0.0;
    jc.max_iters = 60;
    jc.tol = 1e-300;
    jc.omega_init = jvmd::OmegaInit::uniform;
    const auto v = jvmd::vmd_decompose(f, vc);
    const auto j = jvmd::jvmd_decompose(FrameBatch({f}), jc);
    ASSERT_EQ(v.iterations, j.iterations);
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i < v.mode_spectra[k].size(); ++i) {
        EXPECT_LE(std::abs(v.mode_spectra[k][i] - j.mode_spectra[k][i]), 1e-9);
      }
    }
  }
}

TEST(JvmdDecompose, ToneMixtureAt30dB) {
  const auto r = jvmd::jvmd_decompose(noisy_mixture(8, 30.0, 5), JvmdConfig{});
  ASSERT_EQ(r.omegas.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(r.omegas[k] * 1500.0 / jvmd::kToneFrequenciesHz[k], 1.0, 1e-2);
  }
  EXPECT_EQ(r.mode_spectra.size(), 3u);
  EXPECT_EQ(r.noise_estimates.size(), 8u);
  EXPECT_EQ(r.multipliers.size(), 8u);
  for (double k : r.kappa_history) EXPECT_TRUE(std::isfinite(k));
}

TEST(JvmdDecompose, SoftReconstructionResidualAt10dB) {
  const auto batch = noisy_mixture(8, 10.0, 12);
  const auto r = jvmd::jvmd_decompose(batch, JvmdConfig{});
  const auto y = halves(batch);
  for (std::size_t j = 0; j < y.size(); ++j) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y[j].size(); ++i) {
      Complex rec = r.noise_estimates[j][i];
      for (const auto& m : r.mode_spectra) rec += m[i];
      num += std::norm(y[j][i] - rec);
      den += std::norm(y[j][i]);
    }
    EXPECT_LE(std::sqrt(num / den), 0.05) << "frame " << j;
  }
}

TEST(JvmdDecompose, NoiseEstimatesDifferButModesShared) {
  const auto profile = jvmd::EmitterProfile{"e", 0.5, 0.05, {0.1}, 0.01, 0.0};
  std::vector<double> msg(256);
  for (std::size_t n = 0; n < msg.size(); ++n) msg[n] = std::cos(0.3 * static_cast<double>(n));
  for (std::size_t m : {1u, 3u, 6u}) {
    const auto batch = jvmd::synth_emitter_frames(profile, RealFrame(msg, 1.0), m, 5.0, 9);
    JvmdConfig cfg;
    cfg.num_modes = 4;
    cfg.max_iters = 40;
    const auto r = jvmd::jvmd_decompose(batch, cfg);
    EXPECT_EQ(r.mode_spectra.size(), 4u);
    EXPECT_EQ(r.modes.size(), 4u);
    EXPECT_EQ(r.noise_estimates.size(), m);
    if (m > 1) {
      EXPECT_NE(r.noise_estimates[0], r.noise_estimates[1]);
    }
  }
}

TEST(JvmdDecompose, EtaNonIncreasingInM) {
  // 50 trials at 10 dB; one inversion of at most 5% is tolerated.
  const std::vector<std::size_t> ms{1, 2, 4, 8};
  std::vector<double> mean_eta;
  for (std::size_t m : ms) {
    double acc = 0.0;
    for (std::uint64_t t = 0; t < 50; ++t) {
      const auto r = jvmd::jvmd_decompose(noisy_mixture(m, 10.0, 4000 + t), JvmdConfig{});
      std::vector<double> hz;
      for (double w : r.omegas) hz.push_back(w * 1500.0);
      acc += jvmd::center_freq_error(hz, jvmd::kToneFrequenciesHz);
    }
    mean_eta.push_back(acc / 50.0);
  }
  int inversions = 0;
  for (std::size_t i = 0; i + 1 < mean_eta.size(); ++i) {
    if (mean_eta[i + 1] > mean_eta[i]) {
      ++inversions;
      EXPECT_LE(mean_eta[i + 1], 1.05 * mean_eta[i]) << "M=" << ms[i + 1];
    }
  }
  EXPECT_LE(inversions, 1);
}

TEST(JvmdConfig, Validation) {
  JvmdConfig c;
  EXPECT_DOUBLE_EQ(c.effective_epsilon(), 1.0 / 2000.0);
  c.epsilon = 0.0;
  EXPECT_THROW(c.validate(), jvmd::InvalidConfig);
  c = {};
  c.num_modes = 0;
  EXPECT_THROW(c.validate(), jvmd::InvalidConfig);
  EXPECT_EQ(jvmd::parse_lambda_rule("dual-ascent"), jvmd::LambdaRule::dual_ascent);
  EXPECT_THROW(jvmd::parse_lambda_rule("x"), jvmd::InvalidConfig);
}

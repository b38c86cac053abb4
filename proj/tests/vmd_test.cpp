#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "jvmd/signal_lab.hpp"
#include "jvmd/vmd.hpp"
#include "oracles.hpp"

using jvmd::Complex;
using jvmd::RealFrame;
using jvmd::VmdConfig;

namespace {

// |R - S|^2 + 2 alpha d^2 |S|^2, the per-bin objective whose minimizer is the mode update.
double vmd_bin_objective(Complex r, Complex s, double alpha, double d) {
  return std::norm(r - s) + 2.0 * alpha * d * d * std::norm(s);
}

}  // namespace

TEST(ModeUpdateVmd, Examples) {
  const std::size_t bins = 8;
  std::vector<Complex> y(bins, 1.0);
  std::vector<Complex> zero(bins);
  std::vector<Complex> out(bins);
  jvmd::mode_update_vmd(y, zero, zero, 0.0, 0.1, out);
  for (auto c : out) EXPECT_EQ(c, Complex(1.0));

  // omega_k on bin 3 of T = 16: no attenuation there.
  std::vector<Complex> n(bins, Complex(0.7, -0.2));
  jvmd::mode_update_vmd(n, zero, zero, 2000.0, 3.0 / 16.0, out);
  EXPECT_EQ(out[3], Complex(0.7, -0.2));

  // alpha (w - w_k)^2 = 0.5 at bin 2: w = 1/8, w_k = 0, alpha = 32.
  jvmd::mode_update_vmd(y, zero, zero, 32.0, 0.0, out);
  EXPECT_DOUBLE_EQ(out[2].real(), 0.5);
}

TEST(ModeUpdateVmd, ConvenienceOverloadSubtractsOtherModes) {
  const std::vector<Complex> y{4.0, 4.0, 4.0, 4.0};
  const std::vector<std::vector<Complex>> modes{{1, 1, 1, 1}, {9, 9, 9, 9}, {2, 2, 2, 2}};
  const std::vector<Complex> lambda{2.0, 2.0, 2.0, 2.0};
  const auto s = jvmd::mode_update_vmd(y, modes, 1, 0.0, 0.0, lambda);
  for (auto c : s) EXPECT_EQ(c, Complex(4.0 - 3.0 + 1.0));
}

TEST(ModeUpdateVmd, FiniteDifferenceStationarity) {
  std::mt19937_64 rng(7);
  const std::size_t bins = 64;
  std::uniform_int_distribution<std::size_t> pick(0, bins - 1);
  std::uniform_real_distribution<double> uw(0.0, 0.5);
  for (int state = 0; state < 10; ++state) {
    const auto y = oracle::random_spectrum(bins, rng);
    const auto others = oracle::random_spectrum(bins, rng, 0.3);
    const auto lambda = oracle::random_spectrum(bins, rng, 0.1);
    const double alpha = 50.0;
    const double wk = uw(rng);
    std::vector<Complex> out(bins);
    jvmd::mode_update_vmd(y, others, lambda, alpha, wk, out);
    for (int b = 0; b < 10; ++b) {
      const std::size_t i = pick(rng);
      const double d = static_cast<double>(i) / (2.0 * bins) - wk;
      const Complex r = y[i] - others[i] + 0.5 * lambda[i];
      auto f = [&](Complex s) { return vmd_bin_objective(r, s, alpha, d); };
      for (Complex dir : {Complex(1, 0), Complex(0, 1)}) {
        const auto [g, curv] = oracle::central_difference(f, out[i], dir, 1e-4);
        EXPECT_LE(std::abs(g), 1e-8 * curv) << "state " << state << " bin " << i;
      }
    }
  }
}

TEST(OmegaUpdate, Examples) {
  // T = 20: bin 5 is 0.25, bins 4 and 6 are 0.2 and 0.3, bins 2,4,6 are 0.1,0.2,0.3.
  std::vector<Complex> s(10);
  s[5] = 3.0;
  EXPECT_DOUBLE_EQ(jvmd::omega_update(s, 0.0), 0.25);
  s.assign(10, 0.0);
  s[4] = 1.0;
  s[6] = Complex(0.0, 1.0);
  EXPECT_DOUBLE_EQ(jvmd::omega_update(s, 0.0), 0.25);
  s.assign(10, 0.0);
  s[2] = 1.0;
  s[4] = std::sqrt(2.0);
  s[6] = std::sqrt(3.0);
  EXPECT_NEAR(jvmd::omega_update(s, 0.0), 1.4 / 6.0, 1e-15);
  s.assign(10, 0.0);
  EXPECT_EQ(jvmd::omega_update(s, 0.123), 0.123);
}

TEST(OmegaUpdate, MinimizesWeightedSpread) {
  std::mt19937_64 rng(11);
  for (int state = 0; state < 10; ++state) {
    const auto s = oracle::random_spectrum(40, rng);
    const double w = jvmd::omega_update(s, 0.0);
    auto f = [&](Complex om) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = static_cast<double>(i) / 80.0 - om.real();
        acc += d * d * std::norm(s[i]);
      }
      return acc;
    };
    const auto [g, curv] = oracle::central_difference(f, Complex(w), Complex(1.0), 1e-4);
    EXPECT_LE(std::abs(g), 1e-8 * curv);
  }
}

TEST(LambdaUpdateVmd, Examples) {
  std::vector<Complex> lambda{Complex(1, 1), Complex(2, 0)};
  const std::vector<Complex> y{Complex(3, 0), Complex(0, 5)};
  const std::vector<Complex> sum{Complex(1, 0), Complex(0, 1)};
  auto l0 = lambda;
  jvmd::lambda_update_vmd(l0, y, sum, 0.0);
  EXPECT_EQ(l0, lambda);

  std::vector<Complex> l1(2);
  jvmd::lambda_update_vmd(l1, y, sum, 1.0);
  EXPECT_EQ(l1[0], Complex(2, 0));
  EXPECT_EQ(l1[1], Complex(0, 4));

  auto l2 = lambda;
  jvmd::lambda_update_vmd(l2, y, y, 0.7);
  EXPECT_EQ(l2, lambda);
}

TEST(Kappa, Examples) {
  const std::vector<std::vector<Complex>> s{{1, 2}, {Complex(0, 1), 3}};
  EXPECT_EQ(jvmd::convergence_kappa(s, s), 0.0);
  const std::vector<std::vector<Complex>> z{{0, 0}, {0, 0}};
  EXPECT_DOUBLE_EQ(jvmd::convergence_kappa(s, z), 2.0);
  const std::vector<std::vector<Complex>> one{{1, 2}};
  const std::vector<std::vector<Complex>> two{{2, 4}};
  EXPECT_DOUBLE_EQ(jvmd::convergence_kappa(two, one), 0.25);
  EXPECT_EQ(jvmd::convergence_kappa(z, z), 0.0);
}

TEST(VmdDecompose, ZeroFrame) {
  VmdConfig cfg;
  const auto r = jvmd::vmd_decompose(RealFrame(std::vector<double>(32, 0.0), 1.0), cfg);
  EXPECT_EQ(r.iterations, 2u);
  ASSERT_EQ(r.kappa_history.size(), 1u);
  EXPECT_EQ(r.kappa_history[0], 0.0);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.omegas, jvmd::initial_omegas(3, jvmd::OmegaInit::uniform, 0));
  for (const auto& m : r.modes) {
    for (double v : m.samples()) EXPECT_EQ(v, 0.0);
  }
}

TEST(VmdDecompose, SingleTone) {
  std::vector<double> x(1000);
  for (std::size_t n = 0; n < x.size(); ++n) {
    x[n] = std::cos(2.0 * std::numbers::pi * 100.0 * static_cast<double>(n) / 1000.0);
  }
  VmdConfig cfg;
  cfg.num_modes = 1;
  const auto r = jvmd::vmd_decompose(RealFrame(x, 1000.0), cfg);
  EXPECT_NEAR(r.omegas[0], 0.1, 1e-4);
}

TEST(VmdDecompose, CleanToneMixture) {
  VmdConfig cfg;
  const auto r = jvmd::vmd_decompose(jvmd::tone_mixture(1500, 1500.0), cfg);
  ASSERT_EQ(r.omegas.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    const double hz = r.omegas[k] * 1500.0;
    EXPECT_NEAR(hz / jvmd::kToneFrequenciesHz[k], 1.0, 1e-3) << hz;
  }
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.kappa_history.back(), cfg.tol);
  ASSERT_GE(r.kappa_history.size(), 10u);
  const auto& h = r.kappa_history;
  for (std::size_t i = h.size() - 10; i + 1 < h.size(); ++i) EXPECT_LE(h[i + 1], h[i]) << i;
  for (double w : r.omegas) {
    EXPECT_GE(w, 0.0);
    EXPECT_LT(w, 0.5);
  }
}

TEST(VmdDecompose, TinyAlphaIsIdentity) {
  const auto x = oracle::random_frame(64, 3);
  const RealFrame f(x, 1.0);
  VmdConfig cfg;
  cfg.num_modes = 1;
  cfg.alpha = 1e-8;
  cfg.max_iters = 2;
  const auto r = jvmd::vmd_decompose(f, cfg);
  EXPECT_EQ(r.iterations, 2u);
  const auto y = jvmd::frame_spectrum(f);
  for (std::size_t i = 0; i < y.positive_bins(); ++i) {
    EXPECT_LE(std::abs(r.mode_spectra[0][i] - y[i]), 1e-6 * std::max(1.0, std::abs(y[i])));
  }
}

TEST(VmdDecompose, SortingKeepsModeSumBitExact) {
  // Seeded-random init starts modes out of order, so the result is reordered.
  const auto x = oracle::random_frame(128, 21);
  VmdConfig cfg;
  cfg.num_modes = 2;
  cfg.omega_init = jvmd::OmegaInit::seeded_random;
  cfg.max_iters = 30;
  bool reordered = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto init = jvmd::initial_omegas(2, cfg.omega_init, seed);
    const auto r = jvmd::vmd_decompose(RealFrame(x, 1.0), cfg);
    ASSERT_LE(r.omegas[0], r.omegas[1]);
    reordered = reordered || init[0] > init[1];
    const std::vector<std::size_t> swap{1, 0};
    const auto swapped = jvmd::detail::permute(r.mode_spectra, swap);
    for (std::size_t i = 0; i < r.mode_spectra[0].size(); ++i) {
      EXPECT_EQ(r.mode_spectra[0][i] + r.mode_spectra[1][i], swapped[0][i] + swapped[1][i]);
    }
    std::vector<double> sum(x.size());
    for (const auto& m : r.modes) {
      for (std::size_t n = 0; n < sum.size(); ++n) sum[n] += m[n];
    }
    std::vector<Complex> spec_sum(r.mode_spectra[0].size());
    for (const auto& m : r.mode_spectra) {
      for (std::size_t i = 0; i < spec_sum.size(); ++i) spec_sum[i] += m[i];
    }
    const auto direct = jvmd::synthesize_time(jvmd::AnalyticSpectrum(spec_sum), x.size());
    for (std::size_t n = 0; n < sum.size(); ++n) EXPECT_NEAR(sum[n], direct[n], 1e-12);
  }
  EXPECT_TRUE(reordered);
}

TEST(AscendingOrder, StableTies) {
  const std::vector<double> w{0.3, 0.1, 0.3, 0.1};
  EXPECT_EQ(jvmd::ascending_order(w), (std::vector<std::size_t>{1, 3, 0, 2}));
}

TEST(InitialOmegas, Strategies) {
  EXPECT_EQ(jvmd::initial_omegas(3, jvmd::OmegaInit::zero, 0), (std::vector<double>{0, 0, 0}));
  const auto u = jvmd::initial_omegas(3, jvmd::OmegaInit::uniform, 0);
  EXPECT_DOUBLE_EQ(u[0], 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(u[2], 3.0 / 8.0);
  const auto a = jvmd::initial_omegas(5, jvmd::OmegaInit::seeded_random, 42);
  EXPECT_EQ(a, jvmd::initial_omegas(5, jvmd::OmegaInit::seeded_random, 42));
  for (double w : a) {
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, 0.5);
  }
  EXPECT_EQ(jvmd::parse_omega_init("seeded-random"), jvmd::OmegaInit::seeded_random);
  EXPECT_THROW(jvmd::parse_omega_init("bogus"), jvmd::InvalidConfig);
}

TEST(VmdConfig, Validation) {
  VmdConfig c;
  c.num_modes = 0;
  EXPECT_THROW(c.validate(), jvmd::InvalidConfig);
  c = {};
  c.alpha = 0;
  EXPECT_THROW(c.validate(), jvmd::InvalidConfig);
  c = {};
  c.tau = -1;
  EXPECT_THROW(c.validate(), jvmd::InvalidConfig);
  c = {};
  c.tol = 0;
  EXPECT_THROW(c.validate(), jvmd::InvalidConfig);
  c = {};
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), jvmd::InvalidConfig);
}

#pragma once

// Thin FFTW3 wrapper. Plans are created once per (length, direction) under a
// mutex and executed with the new-array interface, which FFTW guarantees to be
// thread-safe.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace jvmd::fft {

namespace detail {

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void execute(std::span<std::complex<double>> data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = PlanCache::instance().get(data.size(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace detail

/// In-place unnormalized forward DFT: X[i] = sum_n x[n] exp(-2 pi i n / T).
inline void forward(std::span<std::complex<double>> data) { detail::execute(data, FFTW_FORWARD); }

/// In-place inverse DFT including the 1/T factor.
inline void inverse(std::span<std::complex<double>> data) {
  detail::execute(data, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

}  // namespace jvmd::fft

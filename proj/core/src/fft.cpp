#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace cosmic::detail {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Eigen::Index n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(static_cast<std::size_t>(n));
    auto* out = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<Eigen::Index, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

ComplexVector run(ComplexVector data, int sign) {
  const Eigen::Index n = data.size();
  ComplexVector out(n);
  if (n == 0) return out;
  fftw_plan plan = cache().get(n, sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

ComplexVector fft(const ComplexVector& x, Eigen::Index n) {
  ComplexVector padded = ComplexVector::Zero(n);
  const Eigen::Index copy = std::min(n, x.size());
  padded.head(copy) = x.head(copy);
  return run(std::move(padded), FFTW_FORWARD);
}

ComplexVector ifft(const ComplexVector& x) {
  ComplexVector out = run(x, FFTW_BACKWARD);
  if (x.size() > 0) out /= static_cast<double>(x.size());
  return out;
}

double bin_frequency(Eigen::Index k, Eigen::Index n) noexcept {
  const Eigen::Index signed_k = (2 * k < n) ? k : k - n;
  return static_cast<double>(signed_k) / static_cast<double>(n);
}

Eigen::Index good_fft_size(Eigen::Index n) noexcept {
  for (Eigen::Index m = std::max<Eigen::Index>(n, 1);; ++m) {
    Eigen::Index r = m;
    for (Eigen::Index p : {2, 3, 5}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace cosmic::detail

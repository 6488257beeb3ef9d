#include "nvsoliton/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace nvsoliton::fft {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n1, int n2, int sign) {
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(n1, n2, sign);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    // Planning scratch; FFTW_ESTIMATE does not touch the contents.
    const std::size_t count = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
    auto* in = fftw_alloc_complex(count);
    auto* out = fftw_alloc_complex(count);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = (n2 == 1) ? fftw_plan_dft_1d(n1, in, out, sign, flags)
                               : fftw_plan_dft_2d(n2, n1, in, out, sign, flags);
    fftw_free(in);
    fftw_free(out);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<const cplx> in, std::span<cplx> out, int n1, int n2, int sign) {
  const std::size_t count = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  if (in.size() != count || out.size() != count) throw std::invalid_argument("fft: size mismatch");
  fftw_plan plan = cache().get(n1, n2, sign);
  // FFTW never writes to the input of an out-of-place c2c transform.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  if (src == dst) {
    fftw_execute_dft(plan, dst, dst);
  } else {
    fftw_execute_dft(plan, src, dst);
  }
}

void scale(std::span<cplx> data, double factor) {
  for (auto& value : data) value *= factor;
}

}  // namespace

void forward_2d(std::span<const cplx> in, std::span<cplx> out, int n1, int n2) {
  run(in, out, n1, n2, FFTW_FORWARD);
}

void inverse_2d(std::span<const cplx> in, std::span<cplx> out, int n1, int n2) {
  run(in, out, n1, n2, FFTW_BACKWARD);
  scale(out, 1.0 / (static_cast<double>(n1) * n2));
}

void forward_1d(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, static_cast<int>(in.size()), 1, FFTW_FORWARD);
}

void inverse_1d(std::span<const cplx> in, std::span<cplx> out) {
  run(in, out, static_cast<int>(in.size()), 1, FFTW_BACKWARD);
  scale(out, 1.0 / static_cast<double>(in.size()));
}

int good_size(int n) {
  if (n <= 1) return 1;
  for (int candidate = n;; ++candidate) {
    int rest = candidate;
    for (int p : {2, 3, 5, 7})
      while (rest % p == 0) rest /= p;
    if (rest == 1) return candidate;
  }
}

}  // namespace nvsoliton::fft

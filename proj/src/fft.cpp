#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "wavelab/error.hpp"

namespace wavelab::detail {
namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanPair {
  explicit PlanPair(std::size_t n) : n(n) {
    buffer = fftw_alloc_complex(n);
    if (buffer == nullptr) throw NumericalError("fftw_alloc_complex failed");
    std::lock_guard lock(planner_mutex());
    const int size = static_cast<int>(n);
    forward = fftw_plan_dft_1d(size, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    inverse = fftw_plan_dft_1d(size, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (forward == nullptr || inverse == nullptr) {
      throw NumericalError("FFTW plan creation failed for n = " + std::to_string(n));
    }
  }
  ~PlanPair() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
    fftw_free(buffer);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;

  std::size_t n;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// One plan set and scratch buffer per thread and size.
PlanPair& plans_for(std::size_t n) {
  thread_local std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<PlanPair>(n);
  return *slot;
}

void run(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
         bool forward) {
  if (in.size() != out.size()) throw StructuralError("fft: input/output length mismatch");
  if (in.empty()) return;
  PlanPair& p = plans_for(in.size());
  auto* buf = reinterpret_cast<std::complex<double>*>(p.buffer);
  std::copy(in.begin(), in.end(), buf);
  fftw_execute(forward ? p.forward : p.inverse);
  std::copy(buf, buf + in.size(), out.begin());
}

}  // namespace

void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  run(in, out, true);
}

void fft_inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  run(in, out, false);
}

}  // namespace wavelab::detail

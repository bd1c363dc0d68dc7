#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the variant is chosen once at runtime from the
// CPU features (override with WAVELAB_SIMD=scalar|avx2|auto).
//
// Pointwise kernels round identically in every variant. Reductions may differ
// in the last bits because the summation order differs.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace wavelab::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;
  // a[i] *= b[i]
  void (*mul)(cplx* a, const cplx* b, std::size_t n);
  // a[i] *= r[i]
  void (*mul_real)(cplx* a, const double* r, std::size_t n);
  // a[i] *= i * r[i]
  void (*mul_imag)(cplx* a, const double* r, std::size_t n);
  // out[i] = |a[i]|^2
  void (*abs2)(const cplx* a, double* out, std::size_t n);
  // sum |a[i]|^2
  double (*sum_abs2)(const cplx* a, std::size_t n);
  // sum conj(a[i]) * b[i]
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double* y, double alpha, const double* x, std::size_t n);
  // sum x[i]
  double (*sum)(const double* x, std::size_t n);
};

enum class Variant { scalar, avx2 };

const KernelTable& scalar_table() noexcept;
// nullptr when the build has no AVX2 variant or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

const KernelTable& active() noexcept;
// Returns false (and changes nothing) when the variant is unavailable.
bool select(Variant v) noexcept;

inline void mul(std::span<cplx> a, std::span<const cplx> b) {
  active().mul(a.data(), b.data(), a.size());
}
inline void mul_real(std::span<cplx> a, std::span<const double> r) {
  active().mul_real(a.data(), r.data(), a.size());
}
inline void mul_imag(std::span<cplx> a, std::span<const double> r) {
  active().mul_imag(a.data(), r.data(), a.size());
}
inline void abs2(std::span<const cplx> a, std::span<double> out) {
  active().abs2(a.data(), out.data(), a.size());
}
inline double sum_abs2(std::span<const cplx> a) {
  return active().sum_abs2(a.data(), a.size());
}
inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(std::span<double> y, double alpha, std::span<const double> x) {
  active().axpy(y.data(), alpha, x.data(), y.size());
}
inline double sum(std::span<const double> x) {
  return active().sum(x.data(), x.size());
}

}  // namespace wavelab::kernels

#include "kernels/tables.hpp"

namespace wavelab::kernels {
namespace {

// Complex products are spelled out so the AVX2 variant can reproduce the
// rounding exactly (std::complex operator* may route through __muldc3).
void mul(cplx* a, const cplx* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    a[i] = cplx(ar * br - ai * bi, ai * br + ar * bi);
  }
}

void mul_real(cplx* a, const double* r, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = cplx(a[i].real() * r[i], a[i].imag() * r[i]);
  }
}

void mul_imag(cplx* a, const double* r, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = cplx(-(a[i].imag() * r[i]), a[i].real() * r[i]);
  }
}

void abs2(const cplx* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  }
}

double sum_abs2(const cplx* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  }
  return s;
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{"scalar", mul, mul_real, mul_imag, abs2,
                                 sum_abs2, dot,  axpy,     sum};
  return table;
}

}  // namespace wavelab::kernels

#include <immintrin.h>

#include "kernels/tables.hpp"

namespace wavelab::kernels {
namespace {

inline const double* dptr(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

// [ar br - ai bi, ai br + ar bi] for two packed complex numbers.
inline __m256d cmul2(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0b1111);
  const __m256d a_sw = _mm256_permute_pd(a, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_sw, b_im));
}

// [r0 r0 r1 r1] from two consecutive reals.
inline __m256d dup2(const double* r) {
  const __m128d v = _mm_loadu_pd(r);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(v), 0b01010000);
}

void mul(cplx* a, const cplx* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dptr(a + i));
    const __m256d vb = _mm256_loadu_pd(dptr(b + i));
    _mm256_storeu_pd(dptr(a + i), cmul2(va, vb));
  }
  scalar_table().mul(a + i, b + i, n - i);
}

void mul_real(cplx* a, const double* r, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dptr(a + i));
    _mm256_storeu_pd(dptr(a + i), _mm256_mul_pd(va, dup2(r + i)));
  }
  scalar_table().mul_real(a + i, r + i, n - i);
}

void mul_imag(cplx* a, const double* r, std::size_t n) {
  const __m256d neg_even = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dptr(a + i));
    const __m256d sw = _mm256_permute_pd(va, 0b0101);
    const __m256d prod = _mm256_mul_pd(sw, dup2(r + i));
    _mm256_storeu_pd(dptr(a + i), _mm256_xor_pd(prod, neg_even));
  }
  scalar_table().mul_imag(a + i, r + i, n - i);
}

void abs2(const cplx* a, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(dptr(a + i));
    const __m256d v1 = _mm256_loadu_pd(dptr(a + i + 2));
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0b11011000));
  }
  scalar_table().abs2(a + i, out + i, n - i);
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_abs2(const cplx* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(dptr(a + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  return hsum(acc) + scalar_table().sum_abs2(a + i, n - i);
}

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  // re lanes accumulate ar*br + ai*bi, im lanes ar*bi - ai*br.
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(dptr(a + i));
    const __m256d vb = _mm256_loadu_pd(dptr(b + i));
    acc_re = _mm256_add_pd(acc_re, _mm256_mul_pd(va, vb));
    const __m256d b_sw = _mm256_permute_pd(vb, 0b0101);
    acc_im = _mm256_add_pd(acc_im, _mm256_mul_pd(va, b_sw));
  }
  // acc_im holds [ar*bi, ai*br, ...]: subtract odd lanes from even lanes.
  alignas(32) double im_lanes[4];
  _mm256_store_pd(im_lanes, acc_im);
  const double im = (im_lanes[0] + im_lanes[2]) - (im_lanes[1] + im_lanes[3]);
  const cplx tail = scalar_table().dot(a + i, b + i, n - i);
  return {hsum(acc_re) + tail.real(), im + tail.imag()};
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  scalar_table().axpy(y + i, alpha, x + i, n - i);
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return hsum(acc) + scalar_table().sum(x + i, n - i);
}

}  // namespace

const KernelTable& avx2_table_unchecked() noexcept {
  static const KernelTable table{"avx2", mul, mul_real, mul_imag, abs2,
                                 sum_abs2, dot, axpy, sum};
  return table;
}

}  // namespace wavelab::kernels

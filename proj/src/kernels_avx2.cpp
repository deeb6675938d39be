#include "chshfid/kernels.hpp"

#ifdef CHSHFID_HAVE_AVX2_KERNELS

#include <immintrin.h>

// Compiled with a per-function target attribute instead of -mavx2 so that no inline
// function from a shared header is emitted with AVX2 instructions in this unit.
#define CHSHFID_AVX2 __attribute__((target("avx2")))

namespace chshfid::kernels::detail {

namespace {

// (ar + i ai) * (br0 + i bi0, br1 + i bi1) without FMA.
CHSHFID_AVX2 inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d b) {
  const __m256d bsw = _mm256_permute_pd(b, 0b0101);
  return _mm256_addsub_pd(_mm256_mul_pd(ar, b), _mm256_mul_pd(ai, bsw));
}

}  // namespace

CHSHFID_AVX2 void mul4_avx2(Mat4 a, Mat4 b, Mat4Out out) {
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (int i = 0; i < 4; ++i) {
    __m256d lo = _mm256_setzero_pd();
    __m256d hi = _mm256_setzero_pd();
    for (int k = 0; k < 4; ++k) {
      const __m256d ar = _mm256_broadcast_sd(pa + 2 * (4 * i + k));
      const __m256d ai = _mm256_broadcast_sd(pa + 2 * (4 * i + k) + 1);
      const __m256d plo = cmul_bcast(ar, ai, _mm256_loadu_pd(pb + 8 * k));
      const __m256d phi = cmul_bcast(ar, ai, _mm256_loadu_pd(pb + 8 * k + 4));
      if (k == 0) {
        lo = plo;
        hi = phi;
      } else {
        lo = _mm256_add_pd(lo, plo);
        hi = _mm256_add_pd(hi, phi);
      }
    }
    _mm256_storeu_pd(po + 8 * i, lo);
    _mm256_storeu_pd(po + 8 * i + 4, hi);
  }
}

CHSHFID_AVX2 void mul4_adj_avx2(Mat4 a, Mat4 b, Mat4Out out) {
  alignas(32) double bt[32];
  adjoint4(b, Mat4Out(bt));
  mul4_avx2(a, Mat4(bt), out);
}

CHSHFID_AVX2 double frobenius_re4_avx2(Mat4 a, Mat4 b) {
  __m256d acc = _mm256_setzero_pd();
  for (int i = 0; i < 8; ++i) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a.data() + 4 * i),
                                           _mm256_loadu_pd(b.data() + 4 * i)));
  }
  const __m128d pair = _mm_add_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace chshfid::kernels::detail

#endif

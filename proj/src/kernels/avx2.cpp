#include <immintrin.h>

#include "variants.hpp"

// Built with -mavx2. No FMA: every product is rounded before the add, exactly
// as in the scalar reference.

namespace omnipipe::kernels::avx2 {

void mat4_apply(const double* m, const double* const* in, double* const* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(in[0] + i);
    const __m256d x1 = _mm256_loadu_pd(in[1] + i);
    const __m256d x2 = _mm256_loadu_pd(in[2] + i);
    const __m256d x3 = _mm256_loadu_pd(in[3] + i);
    for (int k = 0; k < 4; ++k) {
      const double* row = m + 4 * k;
      __m256d acc = _mm256_mul_pd(_mm256_set1_pd(row[0]), x0);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(row[1]), x1));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(row[2]), x2));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(row[3]), x3));
      _mm256_storeu_pd(out[k] + i, acc);
    }
  }
  for (; i < n; ++i) {
    const double x0 = in[0][i];
    const double x1 = in[1][i];
    const double x2 = in[2][i];
    const double x3 = in[3][i];
    for (int k = 0; k < 4; ++k) {
      const double* row = m + 4 * k;
      // Scalar tail through SSE2 intrinsics so the compiler cannot contract.
      __m128d acc = _mm_mul_sd(_mm_set_sd(row[0]), _mm_set_sd(x0));
      acc = _mm_add_sd(acc, _mm_mul_sd(_mm_set_sd(row[1]), _mm_set_sd(x1)));
      acc = _mm_add_sd(acc, _mm_mul_sd(_mm_set_sd(row[2]), _mm_set_sd(x2)));
      acc = _mm_add_sd(acc, _mm_mul_sd(_mm_set_sd(row[3]), _mm_set_sd(x3)));
      out[k][i] = _mm_cvtsd_f64(acc);
    }
  }
}

void mark_beyond_reach(const double* c, const double* s, std::size_t n, double a2, double b2,
                       double reach2, std::uint8_t* mask) {
  const __m256d va2 = _mm256_set1_pd(a2);
  const __m256d vb2 = _mm256_set1_pd(b2);
  const __m256d vab2 = _mm256_set1_pd(a2 * b2);
  const __m256d vreach2 = _mm256_set1_pd(reach2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vc = _mm256_loadu_pd(c + i);
    const __m256d vs = _mm256_loadu_pd(s + i);
    const __m256d den = _mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(vb2, vc), vc),
                                      _mm256_mul_pd(_mm256_mul_pd(va2, vs), vs));
    const __m256d r2 = _mm256_div_pd(vab2, den);
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(r2, vreach2, _CMP_GT_OQ));
    for (int lane = 0; lane < 4; ++lane) {
      if (bits & (1 << lane)) mask[i + lane] = 1;
    }
  }
  for (; i < n; ++i) {
    const __m128d vc = _mm_set_sd(c[i]);
    const __m128d vs = _mm_set_sd(s[i]);
    const __m128d den = _mm_add_sd(_mm_mul_sd(_mm_mul_sd(_mm_set_sd(b2), vc), vc),
                                   _mm_mul_sd(_mm_mul_sd(_mm_set_sd(a2), vs), vs));
    const __m128d r2 = _mm_div_sd(_mm_set_sd(a2 * b2), den);
    if (_mm_comigt_sd(r2, _mm_set_sd(reach2))) mask[i] = 1;
  }
}

}  // namespace omnipipe::kernels::avx2

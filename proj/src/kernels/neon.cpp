#include <arm_neon.h>

#include "variants.hpp"

// aarch64 always has Advanced SIMD with float64x2 lanes. vmulq/vaddq are used
// separately (never vfmaq) to match the scalar rounding sequence.

namespace omnipipe::kernels::neon {

void mat4_apply(const double* m, const double* const* in, double* const* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x0 = vld1q_f64(in[0] + i);
    const float64x2_t x1 = vld1q_f64(in[1] + i);
    const float64x2_t x2 = vld1q_f64(in[2] + i);
    const float64x2_t x3 = vld1q_f64(in[3] + i);
    for (int k = 0; k < 4; ++k) {
      const double* row = m + 4 * k;
      float64x2_t acc = vmulq_f64(vdupq_n_f64(row[0]), x0);
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(row[1]), x1));
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(row[2]), x2));
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(row[3]), x3));
      vst1q_f64(out[k] + i, acc);
    }
  }
  for (; i < n; ++i) {
    const float64x1_t x0 = vld1_f64(in[0] + i);
    const float64x1_t x1 = vld1_f64(in[1] + i);
    const float64x1_t x2 = vld1_f64(in[2] + i);
    const float64x1_t x3 = vld1_f64(in[3] + i);
    for (int k = 0; k < 4; ++k) {
      const double* row = m + 4 * k;
      float64x1_t acc = vmul_f64(vdup_n_f64(row[0]), x0);
      acc = vadd_f64(acc, vmul_f64(vdup_n_f64(row[1]), x1));
      acc = vadd_f64(acc, vmul_f64(vdup_n_f64(row[2]), x2));
      acc = vadd_f64(acc, vmul_f64(vdup_n_f64(row[3]), x3));
      vst1_f64(out[k] + i, acc);
    }
  }
}

void mark_beyond_reach(const double* c, const double* s, std::size_t n, double a2, double b2,
                       double reach2, std::uint8_t* mask) {
  const float64x2_t va2 = vdupq_n_f64(a2);
  const float64x2_t vb2 = vdupq_n_f64(b2);
  const float64x2_t vab2 = vdupq_n_f64(a2 * b2);
  const float64x2_t vreach2 = vdupq_n_f64(reach2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vc = vld1q_f64(c + i);
    const float64x2_t vs = vld1q_f64(s + i);
    const float64x2_t den =
        vaddq_f64(vmulq_f64(vmulq_f64(vb2, vc), vc), vmulq_f64(vmulq_f64(va2, vs), vs));
    const uint64x2_t gt = vcgtq_f64(vdivq_f64(vab2, den), vreach2);
    if (vgetq_lane_u64(gt, 0)) mask[i] = 1;
    if (vgetq_lane_u64(gt, 1)) mask[i + 1] = 1;
  }
  for (; i < n; ++i) {
    const float64x1_t vc = vld1_f64(c + i);
    const float64x1_t vs = vld1_f64(s + i);
    const float64x1_t den = vadd_f64(vmul_f64(vmul_f64(vdup_n_f64(b2), vc), vc),
                                     vmul_f64(vmul_f64(vdup_n_f64(a2), vs), vs));
    const uint64x1_t gt = vcgt_f64(vdiv_f64(vdup_n_f64(a2 * b2), den), vdup_n_f64(reach2));
    if (vget_lane_u64(gt, 0)) mask[i] = 1;
  }
}

}  // namespace omnipipe::kernels::neon

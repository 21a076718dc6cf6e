#include "variants.hpp"

namespace omnipipe::kernels::scalar {

void mat4_apply(const double* m, const double* const* in, double* const* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = in[0][i];
    const double x1 = in[1][i];
    const double x2 = in[2][i];
    const double x3 = in[3][i];
    for (int k = 0; k < 4; ++k) {
      const double* row = m + 4 * k;
      double acc = row[0] * x0;
      acc = acc + row[1] * x1;
      acc = acc + row[2] * x2;
      acc = acc + row[3] * x3;
      out[k][i] = acc;
    }
  }
}

void mark_beyond_reach(const double* c, const double* s, std::size_t n, double a2, double b2,
                       double reach2, std::uint8_t* mask) {
  const double ab2 = a2 * b2;
  for (std::size_t i = 0; i < n; ++i) {
    const double den = (b2 * c[i]) * c[i] + (a2 * s[i]) * s[i];
    const double r2 = ab2 / den;
    if (r2 > reach2) mask[i] = 1;
  }
}

}  // namespace omnipipe::kernels::scalar

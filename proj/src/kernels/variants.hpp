#pragma once

// Raw-pointer entry points of each kernel variant. The SIMD translation units
// are built with extra target flags, so they include nothing from the C++
// standard library beyond <cstddef>/<cstdint>; anything inline from a shared
// header could otherwise be emitted with AVX2 instructions and picked by the
// linker for the scalar path.

#include <cstddef>
#include <cstdint>

namespace omnipipe::kernels {

namespace scalar {
void mat4_apply(const double* m, const double* const* in, double* const* out, std::size_t n);
void mark_beyond_reach(const double* c, const double* s, std::size_t n, double a2, double b2,
                       double reach2, std::uint8_t* mask);
}  // namespace scalar

namespace avx2 {
void mat4_apply(const double* m, const double* const* in, double* const* out, std::size_t n);
void mark_beyond_reach(const double* c, const double* s, std::size_t n, double a2, double b2,
                       double reach2, std::uint8_t* mask);
}  // namespace avx2

namespace neon {
void mat4_apply(const double* m, const double* const* in, double* const* out, std::size_t n);
void mark_beyond_reach(const double* c, const double* s, std::size_t n, double a2, double b2,
                       double reach2, std::uint8_t* mask);
}  // namespace neon

}  // namespace omnipipe::kernels

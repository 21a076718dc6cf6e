#include "omnipipe/kernels.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

#include "variants.hpp"

namespace omnipipe::kernels {
namespace {

Isa probe() {
#if defined(OMNIPIPE_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
#if defined(OMNIPIPE_HAVE_NEON_TU)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

// -1 means "no override".
std::atomic<int> g_override{-1};

void require_supported(Isa isa) {
  if (isa == Isa::Scalar) return;
  if (isa != detected_isa()) {
    throw std::invalid_argument(std::string("kernel variant not available on this CPU: ") +
                                isa_name(isa));
  }
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() {
  const int o = g_override.load(std::memory_order_relaxed);
  return o < 0 ? detected_isa() : static_cast<Isa>(o);
}

ScopedIsa::ScopedIsa(Isa isa) {
  require_supported(isa);
  const int prev = g_override.exchange(static_cast<int>(isa));
  if (prev >= 0) previous_ = static_cast<Isa>(prev);
}

ScopedIsa::~ScopedIsa() { g_override.store(previous_ ? static_cast<int>(*previous_) : -1); }

void mat4_apply(Isa isa, std::span<const double, 16> m, Soa4View in, Soa4Out out) {
  const std::size_t n = in.size();
  if (in.c1.size() != n || in.c2.size() != n || in.c3.size() != n || out.c0.size() != n ||
      out.c1.size() != n || out.c2.size() != n || out.c3.size() != n) {
    throw std::invalid_argument("mat4_apply: column lengths differ");
  }
  const double* src[4] = {in.c0.data(), in.c1.data(), in.c2.data(), in.c3.data()};
  double* dst[4] = {out.c0.data(), out.c1.data(), out.c2.data(), out.c3.data()};
  require_supported(isa);
  switch (isa) {
    case Isa::Scalar: scalar::mat4_apply(m.data(), src, dst, n); return;
#if defined(OMNIPIPE_HAVE_AVX2_TU)
    case Isa::Avx2: avx2::mat4_apply(m.data(), src, dst, n); return;
#endif
#if defined(OMNIPIPE_HAVE_NEON_TU)
    case Isa::Neon: neon::mat4_apply(m.data(), src, dst, n); return;
#endif
    default: break;
  }
  scalar::mat4_apply(m.data(), src, dst, n);
}

void mark_beyond_reach(Isa isa, std::span<const double> cos_psi, std::span<const double> sin_psi,
                       double a2, double b2, double reach2, std::span<std::uint8_t> mask) {
  const std::size_t n = cos_psi.size();
  if (sin_psi.size() != n || mask.size() != n) {
    throw std::invalid_argument("mark_beyond_reach: array lengths differ");
  }
  require_supported(isa);
  switch (isa) {
    case Isa::Scalar:
      scalar::mark_beyond_reach(cos_psi.data(), sin_psi.data(), n, a2, b2, reach2, mask.data());
      return;
#if defined(OMNIPIPE_HAVE_AVX2_TU)
    case Isa::Avx2:
      avx2::mark_beyond_reach(cos_psi.data(), sin_psi.data(), n, a2, b2, reach2, mask.data());
      return;
#endif
#if defined(OMNIPIPE_HAVE_NEON_TU)
    case Isa::Neon:
      neon::mark_beyond_reach(cos_psi.data(), sin_psi.data(), n, a2, b2, reach2, mask.data());
      return;
#endif
    default: break;
  }
  scalar::mark_beyond_reach(cos_psi.data(), sin_psi.data(), n, a2, b2, reach2, mask.data());
}

void mat4_apply(std::span<const double, 16> m, Soa4View in, Soa4Out out) {
  mat4_apply(active_isa(), m, in, out);
}

void mark_beyond_reach(std::span<const double> cos_psi, std::span<const double> sin_psi,
                       double a2, double b2, double reach2, std::span<std::uint8_t> mask) {
  mark_beyond_reach(active_isa(), cos_psi, sin_psi, a2, b2, reach2, mask);
}

}  // namespace omnipipe::kernels

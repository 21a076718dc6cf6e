#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and SIMD
// variants; the dispatcher picks one at runtime from CPUID (x86) or the build
// target (aarch64). All variants perform the same IEEE operations in the same
// order, so their outputs are bit-identical.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace omnipipe::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

/// Best variant this process can run.
Isa detected_isa();

/// Variant currently used by the dispatcher (detected unless overridden).
Isa active_isa();

/// Pins the dispatcher to one variant while alive. Used by equivalence tests
/// and by OMNIPIPE_FORCE_SCALAR-style debugging. Not thread-safe to construct
/// concurrently with running kernels.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  std::optional<Isa> previous_;
};

/// Structure-of-arrays view of n 4-vectors.
struct Soa4View {
  std::span<const double> c0, c1, c2, c3;
  std::size_t size() const { return c0.size(); }
};

struct Soa4Out {
  std::span<double> c0, c1, c2, c3;
  std::size_t size() const { return c0.size(); }
};

/// out_k[i] = sum_j m[4k + j] * in_j[i], summed in j order. m is row-major.
void mat4_apply(std::span<const double, 16> m, Soa4View in, Soa4Out out);

/// mask[i] |= 1 when the ellipse radius along (cos_psi[i], sin_psi[i]) exceeds
/// reach, tested on squares: a2*b2 / (b2*c*c + a2*s*s) > reach2.
void mark_beyond_reach(std::span<const double> cos_psi, std::span<const double> sin_psi,
                       double a2, double b2, double reach2, std::span<std::uint8_t> mask);

// Direct access to individual variants, for equivalence testing. Calling a
// variant the CPU does not support is undefined; check detected_isa() first.
void mat4_apply(Isa isa, std::span<const double, 16> m, Soa4View in, Soa4Out out);
void mark_beyond_reach(Isa isa, std::span<const double> cos_psi, std::span<const double> sin_psi,
                       double a2, double b2, double reach2, std::span<std::uint8_t> mask);

}  // namespace omnipipe::kernels

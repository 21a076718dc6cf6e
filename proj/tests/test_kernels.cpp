#include <doctest.h>

#include <array>
#include <cstring>
#include <random>
#include <vector>

#include "omnipipe/kernels.hpp"

using namespace omnipipe::kernels;

namespace {

std::vector<Isa> simd_variants() {
  std::vector<Isa> v;
  if (detected_isa() != Isa::Scalar) v.push_back(detected_isa());
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("isa names and override") {
    CHECK(std::string(isa_name(Isa::Scalar)) == "scalar");
    {
      ScopedIsa pin(Isa::Scalar);
      CHECK(active_isa() == Isa::Scalar);
    }
    CHECK(active_isa() == detected_isa());
  }

  TEST_CASE("mat4_apply variants are bit-identical to scalar") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::array<double, 16> m{};
    for (auto& x : m) x = u(rng);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
      std::vector<double> in(4 * n);
      for (auto& x : in) x = u(rng);
      const std::span<const double> src(in);
      const Soa4View view{src.subspan(0, n), src.subspan(n, n), src.subspan(2 * n, n),
                          src.subspan(3 * n, n)};
      std::vector<double> ref(4 * n);
      std::span<double> r(ref);
      mat4_apply(Isa::Scalar, m, view,
                 {r.subspan(0, n), r.subspan(n, n), r.subspan(2 * n, n), r.subspan(3 * n, n)});
      for (std::size_t i = 0; i < n; ++i) {
        double want = 0.0;
        for (int j = 0; j < 4; ++j) want += m[j] * in[j * n + i];
        CHECK(ref[i] == want);
      }
      for (Isa isa : simd_variants()) {
        std::vector<double> got(4 * n);
        std::span<double> o(got);
        mat4_apply(isa, m, view,
                   {o.subspan(0, n), o.subspan(n, n), o.subspan(2 * n, n), o.subspan(3 * n, n)});
        CHECK(same_bits(ref, got));
      }
    }
  }

  TEST_CASE("mark_beyond_reach variants agree with scalar") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    for (std::size_t n : {1u, 5u, 8u, 333u, 4096u}) {
      std::vector<double> c(n);
      std::vector<double> s(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double a = ang(rng);
        c[i] = std::cos(a);
        s[i] = std::sin(a);
      }
      std::vector<std::uint8_t> ref(n, 0);
      mark_beyond_reach(Isa::Scalar, c, s, 113.0 * 113.0, 80.0 * 80.0, 100.0 * 100.0, ref);
      std::size_t hits = 0;
      for (auto m : ref) hits += m;
      if (n > 100) CHECK(hits > 0);
      for (Isa isa : simd_variants()) {
        std::vector<std::uint8_t> got(n, 0);
        mark_beyond_reach(isa, c, s, 113.0 * 113.0, 80.0 * 80.0, 100.0 * 100.0, got);
        CHECK(got == ref);
      }
    }
  }

  TEST_CASE("mask accumulates with OR") {
    std::vector<double> c = {1.0, 0.0};
    std::vector<double> s = {0.0, 1.0};
    std::vector<std::uint8_t> mask = {0, 1};
    mark_beyond_reach(c, s, 4.0, 1.0, 2.25, mask);
    CHECK(mask[0] == 1);
    CHECK(mask[1] == 1);
  }
}

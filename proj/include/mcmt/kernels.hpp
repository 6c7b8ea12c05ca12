#pragma once
// Runtime-dispatched numeric kernels for the two arithmetic inner loops:
// counter-based Bernoulli sampling and batched Lai-root bisection. Every
// kernel has a scalar reference implementation; on x86-64 an AVX2 variant is
// selected at startup when the CPU supports it. The variants are
// equivalence-tested against the scalar reference (bit-exact for the integer
// RNG, tolerance-bounded for the root finder, which carries its own vector
// log). Selection can be forced with set_isa() or the MCMT_SIMD environment
// variable ("scalar", "avx2", "auto").

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace mcmt::kernels {

// Threefry2x64-20: one 64-bit word per (key, counter) pair. Draws are pure
// functions of their inputs, so parallel callers see identical streams no
// matter the evaluation order.
std::uint64_t threefry2x64(std::uint64_t key0, std::uint64_t key1,
                           std::uint64_t ctr0, std::uint64_t ctr1);

// Uniform in [0,1) with 52-bit granularity; both ISAs produce identical bits.
inline double to_unit(std::uint64_t word) {
  return static_cast<double>(word >> 12) * 0x1.0p-52;
}

struct Ops {
  // out[k] = 1 iff uniform(key=(seed, stream[k]), counter=(iteration,0)) < prob[k].
  void (*bernoulli_draws)(std::uint64_t seed, std::uint64_t iteration,
                          const std::int32_t* stream, const double* prob,
                          std::uint8_t* out, std::size_t count);
  // out[k] = uniform for counter (counter0 + k, 0) on the given stream.
  void (*uniforms)(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t counter0, double* out, std::size_t count);
  // Roots around the mode x/n of (n+1) C(n,x) p^x (1-p)^(n-x) = beta. The
  // log kernel is bisected geometrically (in log p for the lower root, in
  // log(1-p) for the upper one) to relative tolerance kLaiTolerance, which
  // keeps the kernel value at the returned roots within a few ulp-scale
  // multiples of beta even when a root sits very close to 0 or 1. Boundary
  // cases x=0 / x=n pin the missing root to 0 / 1, and a kernel that never
  // reaches beta yields the vacuous [0,1]. Requires n >= 1, 0 <= x <= n,
  // beta in (0,1).
  void (*lai_roots)(const std::uint32_t* n, const std::uint32_t* x,
                    const double* beta, double* root_lo, double* root_hi,
                    std::size_t count);
  const char* name;
};

inline constexpr double kLaiTolerance = 1e-13;  // relative, on the root

const Ops& scalar_ops();

#if defined(__x86_64__)
bool avx2_supported();
const Ops& avx2_ops();
#endif

const Ops& active();
bool set_isa(std::string_view name);  // "scalar" | "avx2" | "auto"
std::string_view active_name();

}  // namespace mcmt::kernels

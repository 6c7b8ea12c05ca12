// Scalar reference implementations of the dispatched kernels. These define
// the semantics; the SIMD variants must reproduce them.

#include <cassert>
#include <cmath>

#include "mcmt/kernels.hpp"

namespace mcmt::kernels {

namespace {

constexpr std::uint64_t kSkeinParity = 0x1BD11BDAA9FC1A22ull;
constexpr int kRotation[8] = {16, 42, 12, 31, 16, 32, 24, 21};

inline std::uint64_t rotl64(std::uint64_t v, int r) {
  return (v << r) | (v >> (64 - r));
}

void bernoulli_draws_scalar(std::uint64_t seed, std::uint64_t iteration,
                            const std::int32_t* stream, const double* prob,
                            std::uint8_t* out, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t word =
        threefry2x64(seed, static_cast<std::uint64_t>(stream[k]), iteration, 0);
    out[k] = to_unit(word) < prob[k] ? 1 : 0;
  }
}

void uniforms_scalar(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t counter0, double* out, std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = to_unit(threefry2x64(seed, stream, counter0 + k, 0));
  }
}

// Geometric bisection: midpoints are geometric means, so the bracket
// shrinks at a constant rate in log space and the root is located to
// relative precision regardless of its magnitude.
template <typename F>
double bisect_geometric(double lo, double hi, const F& below) {
  for (int it = 0; it < 96 && hi - lo > kLaiTolerance * hi; ++it) {
    const double mid = std::sqrt(lo) * std::sqrt(hi);
    if (mid <= lo || mid >= hi) break;  // double resolution reached
    (below(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void lai_roots_scalar(const std::uint32_t* n, const std::uint32_t* x,
                      const double* beta, double* root_lo, double* root_hi,
                      std::size_t count) {
  constexpr double kFloor = 1e-300;
  for (std::size_t k = 0; k < count; ++k) {
    const double nn = n[k];
    const double xx = x[k];
    assert(n[k] >= 1 && x[k] <= n[k]);
    const double log_beta = std::log(beta[k]);
    const double log_const = std::log(nn + 1.0) + std::lgamma(nn + 1.0) -
                             std::lgamma(xx + 1.0) - std::lgamma(nn - xx + 1.0);
    const auto log_kernel = [&](double p) {
      double v = log_const;
      if (xx > 0.0) v += xx * std::log(p);
      if (xx < nn) v += (nn - xx) * std::log1p(-p);
      return v;
    };
    // Same kernel with the distance to 1 as the variable; near-1 roots keep
    // full relative precision this way.
    const auto log_kernel_r = [&](double r) {
      double v = log_const;
      if (xx > 0.0) v += xx * std::log1p(-r);
      if (xx < nn) v += (nn - xx) * std::log(r);
      return v;
    };
    const double mode = xx / nn;
    if (log_kernel(mode) <= log_beta) {
      // Kernel never exceeds beta: no information yet.
      root_lo[k] = 0.0;
      root_hi[k] = 1.0;
      continue;
    }
    // Lower root on [0, mode]: the log kernel increases toward the mode.
    root_lo[k] = x[k] == 0 ? 0.0
                           : bisect_geometric(kFloor, mode, [&](double p) {
                               return log_kernel(p) < log_beta;
                             });
    // Upper root on [mode, 1], bisected in r = 1 - p; the log kernel
    // increases with r up to 1 - mode.
    root_hi[k] = x[k] == n[k]
                     ? 1.0
                     : 1.0 - bisect_geometric(kFloor, 1.0 - mode, [&](double r) {
                         return log_kernel_r(r) < log_beta;
                       });
  }
}

}  // namespace

std::uint64_t threefry2x64(std::uint64_t key0, std::uint64_t key1,
                           std::uint64_t ctr0, std::uint64_t ctr1) {
  const std::uint64_t ks[3] = {key0, key1, kSkeinParity ^ key0 ^ key1};
  std::uint64_t x0 = ctr0 + ks[0];
  std::uint64_t x1 = ctr1 + ks[1];
  for (int r = 0; r < 20; ++r) {
    x0 += x1;
    x1 = rotl64(x1, kRotation[r & 7]);
    x1 ^= x0;
    if ((r & 3) == 3) {
      const int s = r / 4 + 1;
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + static_cast<std::uint64_t>(s);
    }
  }
  return x0;
}

const Ops& scalar_ops() {
  static const Ops ops{bernoulli_draws_scalar, uniforms_scalar,
                       lai_roots_scalar, "scalar"};
  return ops;
}

}  // namespace mcmt::kernels

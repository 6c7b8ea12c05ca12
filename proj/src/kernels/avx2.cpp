// AVX2 variants: four Threefry2x64 streams or four bisection problems in
// lockstep. The integer RNG path is bit-identical to the scalar reference;
// the root finder uses a polynomial vector log (atanh series on the reduced
// mantissa, ~2 ulp) whose error stays far below the bisection tolerance.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "mcmt/kernels.hpp"

namespace mcmt::kernels {

namespace {

constexpr std::uint64_t kSkeinParity = 0x1BD11BDAA9FC1A22ull;
constexpr int kRotation[8] = {16, 42, 12, 31, 16, 32, 24, 21};

inline __m256i rotl64(__m256i v, int r) {
  return _mm256_or_si256(_mm256_slli_epi64(v, r), _mm256_srli_epi64(v, 64 - r));
}

// x0 word of Threefry2x64-20 for four (key1, ctr0) lanes sharing key0.
inline __m256i threefry_x0(std::uint64_t key0, __m256i key1, __m256i ctr0) {
  const __m256i ks0 = _mm256_set1_epi64x(static_cast<long long>(key0));
  const __m256i ks1 = key1;
  const __m256i ks2 = _mm256_xor_si256(
      _mm256_set1_epi64x(static_cast<long long>(kSkeinParity)),
      _mm256_xor_si256(ks0, ks1));
  const __m256i ks[3] = {ks0, ks1, ks2};
  __m256i x0 = _mm256_add_epi64(ctr0, ks0);
  __m256i x1 = ks1;  // ctr1 = 0
  for (int r = 0; r < 20; ++r) {
    x0 = _mm256_add_epi64(x0, x1);
    x1 = rotl64(x1, kRotation[r & 7]);
    x1 = _mm256_xor_si256(x1, x0);
    if ((r & 3) == 3) {
      const int s = r / 4 + 1;
      x0 = _mm256_add_epi64(x0, ks[s % 3]);
      x1 = _mm256_add_epi64(x1, ks[(s + 1) % 3]);
      x1 = _mm256_add_epi64(x1, _mm256_set1_epi64x(s));
    }
  }
  return x0;
}

// Exact double from a 52-bit unsigned integer lane.
inline __m256d u52_to_double(__m256i v) {
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);  // 2^52
  const __m256d shifted = _mm256_castsi256_pd(_mm256_or_si256(v, magic));
  return _mm256_sub_pd(shifted, _mm256_set1_pd(0x1.0p52));
}

inline __m256d to_unit(__m256i word) {
  return _mm256_mul_pd(u52_to_double(_mm256_srli_epi64(word, 12)),
                       _mm256_set1_pd(0x1.0p-52));
}

// log(x) for normal positive doubles: x = 2^e * m with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh((m-1)/(m+1)) via an odd polynomial in r^2. Inputs outside
// (0, inf) are not handled; callers mask those lanes out.
inline __m256d vlog(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  // Biased exponent as double, via 32-bit lanes (no 64-bit cvt in AVX2).
  const __m256i expo64 = _mm256_srli_epi64(bits, 52);
  const __m256i pack_idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
  const __m128i expo32 =
      _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(expo64, pack_idx));
  __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(expo32), _mm256_set1_pd(1023.0));
  // Mantissa in [1, 2).
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000ll);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
  // Fold m >= sqrt(2) down an octave.
  const __m256d sqrt2 = _mm256_set1_pd(1.4142135623730951);
  const __m256d fold = _mm256_cmp_pd(m, sqrt2, _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), fold);
  e = _mm256_add_pd(e, _mm256_and_pd(fold, _mm256_set1_pd(1.0)));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s = _mm256_mul_pd(r, r);
  // 2*atanh(r) = 2r (1 + s/3 + s^2/5 + ... + s^9/19), |r| <= 0.1716.
  __m256d poly = _mm256_set1_pd(1.0 / 19.0);
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, s, _mm256_set1_pd(1.0 / 3.0));
  poly = _mm256_fmadd_pd(poly, s, one);
  const __m256d two_r = _mm256_add_pd(r, r);
  // Split ln2 keeps e*ln2 exact to well under an ulp of the result.
  const __m256d ln2_hi = _mm256_set1_pd(0x1.62e42fefa38p-1);
  const __m256d ln2_lo = _mm256_set1_pd(0x1.ef35793c7673p-45);
  __m256d res = _mm256_fmadd_pd(e, ln2_lo, _mm256_mul_pd(two_r, poly));
  return _mm256_fmadd_pd(e, ln2_hi, res);
}

void bernoulli_draws_avx2(std::uint64_t seed, std::uint64_t iteration,
                          const std::int32_t* stream, const double* prob,
                          std::uint8_t* out, std::size_t count) {
  const __m256i ctr0 = _mm256_set1_epi64x(static_cast<long long>(iteration));
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256i key1 = _mm256_setr_epi64x(stream[k], stream[k + 1],
                                            stream[k + 2], stream[k + 3]);
    const __m256d u = to_unit(threefry_x0(seed, key1, ctr0));
    const __m256d p = _mm256_loadu_pd(prob + k);
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(u, p, _CMP_LT_OQ));
    out[k] = mask & 1;
    out[k + 1] = (mask >> 1) & 1;
    out[k + 2] = (mask >> 2) & 1;
    out[k + 3] = (mask >> 3) & 1;
  }
  if (k < count) {
    scalar_ops().bernoulli_draws(seed, iteration, stream + k, prob + k,
                                 out + k, count - k);
  }
}

void uniforms_avx2(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t counter0, double* out, std::size_t count) {
  const __m256i key1 = _mm256_set1_epi64x(static_cast<long long>(stream));
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const long long c = static_cast<long long>(counter0 + k);
    const __m256i ctr0 = _mm256_setr_epi64x(c, c + 1, c + 2, c + 3);
    _mm256_storeu_pd(out + k, to_unit(threefry_x0(seed, key1, ctr0)));
  }
  if (k < count) {
    scalar_ops().uniforms(seed, stream, counter0 + k, out + k, count - k);
  }
}

// Four geometric bisections in lockstep (log-space midpoints via sqrt).
// Terms with zero coefficient (x = 0 or x = n) are masked out before they
// can turn 0 * log(0) into a NaN; those lanes carry degenerate brackets and
// their roots are pinned afterwards.
void lai_roots_avx2(const std::uint32_t* n, const std::uint32_t* x,
                    const double* beta, double* root_lo, double* root_hi,
                    std::size_t count) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d tol = _mm256_set1_pd(kLaiTolerance);
  const __m256d floor_v = _mm256_set1_pd(1e-300);

  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    alignas(32) double cbuf[4], nbuf[4], xbuf[4], lbbuf[4];
    for (int lane = 0; lane < 4; ++lane) {
      const double nn = n[k + lane];
      const double xx = x[k + lane];
      nbuf[lane] = nn;
      xbuf[lane] = xx;
      lbbuf[lane] = std::log(beta[k + lane]);
      cbuf[lane] = std::log(nn + 1.0) + std::lgamma(nn + 1.0) -
                   std::lgamma(xx + 1.0) - std::lgamma(nn - xx + 1.0);
    }
    const __m256d nv = _mm256_load_pd(nbuf);
    const __m256d xv = _mm256_load_pd(xbuf);
    const __m256d cv = _mm256_load_pd(cbuf);
    const __m256d lb = _mm256_load_pd(lbbuf);
    const __m256d nmx = _mm256_sub_pd(nv, xv);
    const __m256d x_pos = _mm256_cmp_pd(xv, zero, _CMP_GT_OQ);
    const __m256d nmx_pos = _mm256_cmp_pd(nmx, zero, _CMP_GT_OQ);
    const __m256d mode = _mm256_div_pd(xv, nv);

    // Log kernel with p as the variable and with r = 1 - p as the variable.
    const auto log_kernel_p = [&](__m256d p) {
      const __m256d t1 = _mm256_and_pd(x_pos, _mm256_mul_pd(xv, vlog(p)));
      const __m256d t2 = _mm256_and_pd(
          nmx_pos, _mm256_mul_pd(nmx, vlog(_mm256_sub_pd(one, p))));
      return _mm256_add_pd(cv, _mm256_add_pd(t1, t2));
    };
    const auto log_kernel_r = [&](__m256d r) {
      const __m256d t1 = _mm256_and_pd(
          x_pos, _mm256_mul_pd(xv, vlog(_mm256_sub_pd(one, r))));
      const __m256d t2 = _mm256_and_pd(nmx_pos, _mm256_mul_pd(nmx, vlog(r)));
      return _mm256_add_pd(cv, _mm256_add_pd(t1, t2));
    };

    // Vacuous lanes: kernel maximum at the mode does not exceed beta.
    const __m256d vacuous = _mm256_cmp_pd(log_kernel_p(mode), lb, _CMP_LE_OQ);

    // The kernel is increasing in the variable on both brackets.
    const auto bisect = [&](__m256d lo, __m256d hi, const auto& log_kernel) {
      for (int it = 0; it < 96; ++it) {
        const __m256d mid =
            _mm256_mul_pd(_mm256_sqrt_pd(lo), _mm256_sqrt_pd(hi));
        const __m256d below = _mm256_cmp_pd(log_kernel(mid), lb, _CMP_LT_OQ);
        const __m256d active = _mm256_cmp_pd(
            _mm256_sub_pd(hi, lo), _mm256_mul_pd(tol, hi), _CMP_GT_OQ);
        lo = _mm256_blendv_pd(lo, mid, _mm256_and_pd(below, active));
        hi = _mm256_blendv_pd(hi, mid, _mm256_andnot_pd(below, active));
        if ((it & 7) == 7 && _mm256_movemask_pd(active) == 0) break;
      }
      return _mm256_mul_pd(half, _mm256_add_pd(lo, hi));
    };

    __m256d g = bisect(floor_v, mode, log_kernel_p);
    __m256d f = _mm256_sub_pd(one, bisect(floor_v, _mm256_sub_pd(one, mode),
                                          log_kernel_r));
    g = _mm256_andnot_pd(_mm256_cmp_pd(xv, zero, _CMP_EQ_OQ), g);  // x=0 -> 0
    f = _mm256_blendv_pd(f, one, _mm256_cmp_pd(nmx, zero, _CMP_EQ_OQ));
    g = _mm256_andnot_pd(vacuous, g);
    f = _mm256_blendv_pd(f, one, vacuous);
    _mm256_storeu_pd(root_lo + k, g);
    _mm256_storeu_pd(root_hi + k, f);
  }
  if (k < count) {
    scalar_ops().lai_roots(n + k, x + k, beta + k, root_lo + k, root_hi + k,
                           count - k);
  }
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

const Ops& avx2_ops() {
  static const Ops ops{bernoulli_draws_avx2, uniforms_avx2, lai_roots_avx2,
                       "avx2"};
  return ops;
}

}  // namespace mcmt::kernels

#endif  // __x86_64__

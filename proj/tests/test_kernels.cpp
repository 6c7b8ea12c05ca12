#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "mcmt/kernels.hpp"
#include "oracles.hpp"

using namespace mcmt::kernels;

namespace {

bool have_avx2() {
#if defined(__x86_64__)
  return avx2_supported();
#else
  return false;
#endif
}

}  // namespace

TEST_SUITE("threefry") {
  TEST_CASE("pure function of key and counter") {
    CHECK(threefry2x64(1, 2, 3, 4) == threefry2x64(1, 2, 3, 4));
    CHECK(threefry2x64(1, 2, 3, 4) != threefry2x64(1, 2, 4, 4));
    CHECK(threefry2x64(1, 2, 3, 4) != threefry2x64(2, 2, 3, 4));
  }

  TEST_CASE("uniform moments") {
    const std::size_t n = 200000;
    std::vector<double> u(n);
    scalar_ops().uniforms(42, 7, 0, u.data(), n);
    double mean = 0.0, var = 0.0;
    for (double v : u) mean += v;
    mean /= n;
    for (double v : u) var += (v - mean) * (v - mean);
    var /= n;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
  }

  TEST_CASE("unit mapping keeps draws in [0,1)") {
    CHECK(to_unit(0) == 0.0);
    CHECK(to_unit(~0ull) < 1.0);
  }
}

TEST_SUITE("kernel dispatch") {
  TEST_CASE("scalar always available; forcing works") {
    REQUIRE(set_isa("scalar"));
    CHECK(active_name() == "scalar");
    CHECK(set_isa("auto"));
    CHECK_FALSE(set_isa("not-an-isa"));
  }
}

TEST_SUITE("scalar/avx2 equivalence") {
  TEST_CASE("bernoulli draws are bit-identical") {
    if (!have_avx2()) return;
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t count = 1 + rng() % 37;  // exercise remainders
      std::vector<std::int32_t> hyp(count);
      std::vector<double> prob(count);
      for (std::size_t i = 0; i < count; ++i) {
        hyp[i] = static_cast<std::int32_t>(rng() % 1000);
        prob[i] = std::uniform_real_distribution<>(0.0, 1.0)(rng);
      }
      prob[0] = 0.0;
      if (count > 1) prob[1] = 1.0;
      std::vector<std::uint8_t> a(count), b(count);
      const std::uint64_t seed = rng(), iter = rng() % 100000;
      scalar_ops().bernoulli_draws(seed, iter, hyp.data(), prob.data(), a.data(), count);
#if defined(__x86_64__)
      avx2_ops().bernoulli_draws(seed, iter, hyp.data(), prob.data(), b.data(), count);
#endif
      CHECK(std::memcmp(a.data(), b.data(), count) == 0);
    }
  }

  TEST_CASE("uniform streams are bit-identical") {
    if (!have_avx2()) return;
    std::vector<double> a(1001), b(1001);
    scalar_ops().uniforms(99, 5, 123, a.data(), a.size());
#if defined(__x86_64__)
    avx2_ops().uniforms(99, 5, 123, b.data(), b.size());
#endif
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  }

  TEST_CASE("lai roots agree within the bisection tolerance") {
    if (!have_avx2()) return;
    std::mt19937_64 rng(17);
    const std::size_t count = 4096;
    std::vector<std::uint32_t> n(count), x(count);
    std::vector<double> beta(count);
    const double betas[3] = {0.1, 0.01, 1e-4};
    for (std::size_t i = 0; i < count; ++i) {
      n[i] = 1 + static_cast<std::uint32_t>(rng() % 10000);
      x[i] = static_cast<std::uint32_t>(rng() % (n[i] + 1));
      beta[i] = betas[rng() % 3];
    }
    std::vector<double> lo_s(count), hi_s(count), lo_v(count), hi_v(count);
    scalar_ops().lai_roots(n.data(), x.data(), beta.data(), lo_s.data(), hi_s.data(), count);
#if defined(__x86_64__)
    avx2_ops().lai_roots(n.data(), x.data(), beta.data(), lo_v.data(), hi_v.data(), count);
#endif
    for (std::size_t i = 0; i < count; ++i) {
      // Relative agreement on the root, and on its distance to 1 for the
      // upper root (that is the quantity the bisection controls).
      CHECK(std::abs(lo_v[i] - lo_s[i]) <= 1e-9 * std::max(lo_s[i], 1e-30));
      CHECK(std::abs((1.0 - hi_v[i]) - (1.0 - hi_s[i])) <=
            1e-9 * std::max(1.0 - hi_s[i], 1e-30));
    }
  }

  TEST_CASE("kernel value at avx2 roots matches beta") {
    if (!have_avx2()) return;
    std::mt19937_64 rng(23);
    const std::size_t count = 512;
    std::vector<std::uint32_t> n(count), x(count);
    std::vector<double> beta(count), lo(count), hi(count);
    for (std::size_t i = 0; i < count; ++i) {
      n[i] = 1 + static_cast<std::uint32_t>(rng() % 10000);
      x[i] = 1 + static_cast<std::uint32_t>(rng() % std::max<std::uint32_t>(n[i] - 1, 1));
      if (x[i] >= n[i]) x[i] = n[i] - (n[i] > 1 ? 1 : 0);
      beta[i] = std::uniform_real_distribution<>(1e-5, 0.2)(rng);
    }
#if defined(__x86_64__)
    avx2_ops().lai_roots(n.data(), x.data(), beta.data(), lo.data(), hi.data(), count);
#endif
    for (std::size_t i = 0; i < count; ++i) {
      if (x[i] == 0 || x[i] == n[i]) continue;
      CHECK(std::exp(oracle::log_kernel(n[i], x[i], lo[i])) ==
            doctest::Approx(beta[i]).epsilon(1e-8));
    }
  }
}

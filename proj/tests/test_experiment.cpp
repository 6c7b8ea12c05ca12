#include <doctest.h>

#include <cmath>

#include "mcmt/experiment.hpp"
#include "oracles.hpp"

using namespace mcmt;

TEST_SUITE("laws and scenarios") {
  TEST_CASE("law parsing") {
    const Law u = Law::parse("uniform:0.2,1");
    CHECK(u.kind == Law::Kind::Uniform);
    CHECK(u.a == doctest::Approx(0.2));
    CHECK(u.b == doctest::Approx(1.0));
    const Law pt = Law::parse("point:0.3");
    CHECK(pt.kind == Law::Kind::Point);
    CHECK(pt.a == doctest::Approx(0.3));
    CHECK_THROWS_AS(Law::parse("normal:0,1"), std::invalid_argument);
    CHECK_THROWS_AS(Law::parse("uniform:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(Law::parse("point:1.2"), std::invalid_argument);
  }

  TEST_CASE("p* draws are deterministic and respect the split") {
    Scenario sc;
    sc.m = 10;
    sc.null_fraction = 0.5;
    sc.null_law = Law::parse("uniform:0.2,1");
    sc.alt_law = Law::parse("point:0.001");
    const auto a = draw_pstar(sc, 77);
    const auto b = draw_pstar(sc, 77);
    CHECK(a == b);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(a[i] >= 0.2);
      CHECK(a[i] <= 1.0);
    }
    for (std::size_t i = 5; i < 10; ++i) CHECK(a[i] == doctest::Approx(0.001));
    const auto c = draw_pstar(sc, 78);
    CHECK(a != c);
  }
}

TEST_SUITE("naive method") {
  TEST_CASE("all-zero streams reject everything at a fixed threshold") {
    const std::vector<std::uint64_t> counts{0, 0, 0};
    const auto rej = naive_method(counts, 100, catalog("bh", 3),
                                  ThresholdModel::fixed(0.05));
    CHECK(rej == RejectionSet{0, 1, 2});
  }

  TEST_CASE("all-one streams reject nothing") {
    const std::vector<std::uint64_t> counts{100, 100, 100};
    const auto rej = naive_method(counts, 100, catalog("bh", 3),
                                  ThresholdModel::fixed(0.05));
    CHECK(rej.empty());
  }

  TEST_CASE("matches the oracle on point estimates") {
    const std::vector<std::uint64_t> counts{0, 1, 3, 50};
    const auto proc = catalog("bh", 4);
    const auto rej = naive_method(counts, 100, proc, ThresholdModel::fixed(0.05));
    const std::vector<double> p_hat{0.0, 0.01, 0.03, 0.5};
    CHECK(rej == oracle::step_up(p_hat, 0.05, proc.tau));
  }

  TEST_CASE("pounds-cheng threshold comes from the point estimates") {
    const std::vector<std::uint64_t> counts{0, 10, 90, 80};
    const auto proc = catalog("bh", 4);
    const auto rej = naive_method(counts, 100, proc, ThresholdModel::pc_plugin(0.1));
    const std::vector<double> p_hat{0.0, 0.1, 0.9, 0.8};
    const double alpha = std::min(1.0, 0.1 / pi0_hat(p_hat));
    CHECK(rej == oracle::step_up(p_hat, alpha, proc.tau));
  }

  TEST_CASE("add-one smoothing moves the estimates") {
    const std::vector<std::uint64_t> counts{0, 0};
    const auto proc = catalog("bonferroni", 2);
    // (0+1)/(4+1) = 0.2 > 0.05/2: nothing rejected with smoothing.
    CHECK(naive_method(counts, 4, proc, ThresholdModel::fixed(0.05), true).empty());
    CHECK(naive_method(counts, 4, proc, ThresholdModel::fixed(0.05), false) ==
          RejectionSet{0, 1});
  }
}

TEST_SUITE("rc metric") {
  TEST_CASE("identical repetitions are never randomly classified") {
    std::vector<std::vector<Call>> reps(50, std::vector<Call>{
        Call::Significant, Call::NonSignificant, Call::Undecided});
    const auto rc = rc_metric(reps, 0.01);
    CHECK(rc.rc_count == 0);
    CHECK(rc.p_significant[0] == doctest::Approx(1.0));
    CHECK(rc.p_non_significant[1] == doctest::Approx(1.0));
    CHECK(rc.p_random[2] == doctest::Approx(0.0));
  }

  TEST_CASE("a hypothesis flipping half the time counts") {
    std::vector<std::vector<Call>> reps;
    for (int r = 0; r < 1000; ++r) {
      reps.push_back({r % 2 == 0 ? Call::Significant : Call::NonSignificant});
    }
    const auto rc = rc_metric(reps, 0.01);
    CHECK(rc.rc_count == 1);
    CHECK(rc.p_random[0] == doctest::Approx(0.5));
  }

  TEST_CASE("always-undecided counts toward neither call") {
    std::vector<std::vector<Call>> reps(200, std::vector<Call>{Call::Undecided});
    const auto rc = rc_metric(reps, 0.01);
    CHECK(rc.rc_count == 0);
    CHECK(rc.p_significant[0] == doctest::Approx(0.0));
    CHECK(rc.p_non_significant[0] == doctest::Approx(0.0));
  }

  TEST_CASE("cutoff is strict") {
    // 1 flip out of 100 sits exactly at cutoff 0.01: not counted.
    std::vector<std::vector<Call>> reps(99, std::vector<Call>{Call::Significant});
    reps.push_back({Call::NonSignificant});
    CHECK(rc_metric(reps, 0.01).rc_count == 0);
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(rc_metric({}, 0.01), std::invalid_argument);
    std::vector<std::vector<Call>> reps(2, std::vector<Call>{Call::Significant});
    CHECK_THROWS_AS(rc_metric(reps, 0.0), std::invalid_argument);
  }
}

TEST_SUITE("exceedance counting") {
  TEST_CASE("matches the engine's sampling stream") {
    const std::vector<double> pstar{0.2, 0.8};
    const auto counts = count_exceedances(pstar, 99, 500);
    SyntheticSource src(pstar, 99);
    std::uint64_t c0 = 0, c1 = 0;
    for (std::uint64_t n = 1; n <= 500; ++n) {
      c0 += src.draw(0, n);
      c1 += src.draw(1, n);
    }
    CHECK(counts[0] == c0);
    CHECK(counts[1] == c1);
  }
}

TEST_SUITE("parallel reps") {
  TEST_CASE("covers every index exactly once") {
    std::vector<int> hits(101, 0);
    parallel_reps(101, [&](std::size_t r) { hits[r] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
}

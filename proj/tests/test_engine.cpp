#include <doctest.h>

#include <cmath>
#include <random>

#include "mcmt/engine.hpp"
#include "oracles.hpp"

using namespace mcmt;

namespace {

EngineConfig basic_config(std::uint32_t m, std::uint64_t budget,
                          double alpha_star = 0.05, double epsilon = 0.05) {
  EngineConfig config;
  config.m = m;
  config.procedure = catalog("bh", m);
  config.threshold = ThresholdModel::fixed(alpha_star);
  config.epsilon = epsilon;
  config.budget = budget;
  return config;
}

}  // namespace

TEST_SUITE("stopping rules") {
  TEST_CASE("ratio rule conventions") {
    CHECK(stop_fdr_ratio(10, 0, 1.0));   // empty lower set: fraction is 0
    CHECK(stop_fdr_ratio(0, 0, 1.0));
    CHECK_FALSE(stop_fdr_ratio(10, 5, 1.5));  // 2.0 > 1.5
    CHECK(stop_fdr_ratio(10, 10, 1.0));
    CHECK(stop_fdr_ratio(9, 6, 1.5));
  }

  TEST_CASE("additive rule conventions") {
    CHECK(stop_fdr_additive(0, 0, 0.0));     // empty upper set: fraction is 0
    CHECK(stop_fdr_additive(10, 9, 0.1));    // 0.1 <= 0.1
    CHECK_FALSE(stop_fdr_additive(10, 5, 0.1));
    CHECK(stop_fdr_additive(10, 10, 0.0));
  }

  TEST_CASE("exhaustive over small set sizes") {
    for (std::size_t lower = 0; lower <= 10; ++lower) {
      for (std::size_t upper = lower; upper <= 10; ++upper) {
        for (double eta : {1.0, 1.25, 2.0, 10.0}) {
          const bool expected = lower == 0 || static_cast<double>(upper) / lower <= eta;
          CHECK(stop_fdr_ratio(upper, lower, eta) == expected);
        }
        for (double xi : {0.0, 0.1, 0.5, 1.0}) {
          const bool expected =
              upper == 0 ||
              static_cast<double>(upper - lower) / static_cast<double>(upper) <= xi;
          CHECK(stop_fdr_additive(upper, lower, xi) == expected);
        }
      }
    }
  }

  TEST_CASE("rule spec parsing") {
    CHECK(parse_stopping_rule("budget").kind == StoppingRule::Kind::FixedBudget);
    CHECK(parse_stopping_rule("all-decided").kind == StoppingRule::Kind::AllDecided);
    const auto ratio = parse_stopping_rule("fdr-ratio:1.5");
    CHECK(ratio.kind == StoppingRule::Kind::FdrRatio);
    CHECK(ratio.param == doctest::Approx(1.5));
    const auto add = parse_stopping_rule("fdr-additive:0.2");
    CHECK(add.kind == StoppingRule::Kind::FdrAdditive);
    CHECK(add.param == doctest::Approx(0.2));
    CHECK_THROWS_AS(parse_stopping_rule("sometimes"), std::invalid_argument);
    CHECK_THROWS_AS(parse_stopping_rule("fdr-ratio:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_stopping_rule("fdr-additive:-1"), std::invalid_argument);
  }
}

TEST_SUITE("sandwich") {
  TEST_CASE("point intervals reduce to a single application") {
    const auto proc = catalog("bh", 4);
    const std::vector<double> p{0.01, 0.02, 0.04, 0.9};
    const auto [lower, upper] = sandwich(p, p, {0.05, 0.05}, proc);
    CHECK(lower == proc.apply(p, 0.05));
    CHECK(upper == proc.apply(p, 0.05));
  }

  TEST_CASE("vacuous intervals decide nothing") {
    const auto proc = catalog("holm", 3);
    const std::vector<double> lo(3, 0.0), hi(3, 1.0);
    const auto [lower, upper] = sandwich(lo, hi, {0.05, 0.05}, proc);
    CHECK(lower.empty());
    CHECK(upper == RejectionSet{0, 1, 2});
  }

  TEST_CASE("worked example checked against the brute-force oracle") {
    const auto proc = catalog("bh", 3);
    const std::vector<double> lo{0.001, 0.01, 0.2}, hi{0.003, 0.09, 0.4};
    const auto [lower, upper] = sandwich(lo, hi, {0.05, 0.05}, proc);
    CHECK(lower == oracle::step_up(hi, 0.05, proc.tau));
    CHECK(upper == oracle::step_up(lo, 0.05, proc.tau));
    CHECK(oracle::is_subset(lower, upper));
  }

  TEST_CASE("infinite threshold cap clamps to alpha = 1") {
    const auto proc = catalog("bh", 2);
    const std::vector<double> lo{0.1, 0.9}, hi{0.2, 0.95};
    const auto [lower, upper] =
        sandwich(lo, hi, {0.05, std::numeric_limits<double>::infinity()}, proc);
    CHECK(upper == proc.apply(lo, 1.0));
    CHECK(lower == proc.apply(hi, 0.05));
  }
}

TEST_SUITE("engine runs") {
  TEST_CASE("budget zero leaves everything undecided") {
    auto config = basic_config(4, 0);
    SyntheticSource source({0.1, 0.2, 0.3, 0.4}, 1);
    const Decision d = run(config, source);
    CHECK(d.rejected.empty());
    CHECK(d.non_rejected.empty());
    CHECK(d.undecided == RejectionSet{0, 1, 2, 3});
    CHECK(d.epsilon == doctest::Approx(0.05));
    CHECK(d.iterations == 0);
  }

  TEST_CASE("m=1, all-ones stream is non-rejected under bonferroni") {
    EngineConfig config;
    config.m = 1;
    config.procedure = catalog("bonferroni", 1);
    config.threshold = ThresholdModel::fixed(0.05);
    config.epsilon = 0.05;
    config.budget = 100;
    SyntheticSource source({1.0}, 3);
    const Decision d = run(config, source);
    CHECK(d.rejected.empty());
    CHECK(d.non_rejected == RejectionSet{0});
    CHECK(d.undecided.empty());
    CHECK(d.iterations == 100);
    CHECK(d.rule_fired);
    CHECK_FALSE(d.truncated);
  }

  TEST_CASE("m=2 extreme streams split into rejected and non-rejected") {
    auto config = basic_config(2, 1000);
    SyntheticSource source({0.0, 1.0}, 5);
    const Decision d = run(config, source);
    CHECK(d.rejected == RejectionSet{0});
    CHECK(d.non_rejected == RejectionSet{1});
    CHECK(d.undecided.empty());
  }

  TEST_CASE("deterministic given config and source") {
    auto config = basic_config(8, 400);
    config.seed = 11;
    std::vector<double> pstar{0.001, 0.01, 0.02, 0.2, 0.4, 0.6, 0.8, 0.97};
    SyntheticSource s1(pstar, 11), s2(pstar, 11);
    const Decision a = run(config, s1);
    const Decision b = run(config, s2);
    CHECK(a.rejected == b.rejected);
    CHECK(a.non_rejected == b.non_rejected);
    CHECK(a.undecided == b.undecided);
    CHECK(a.iterations == b.iterations);
    CHECK(a.samples_per_hypothesis == b.samples_per_hypothesis);
  }

  TEST_CASE("sandwich sets are monotone along the run and always nested") {
    auto config = basic_config(10, 300);
    std::vector<double> pstar{0.001, 0.004, 0.03, 0.06, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99};
    SyntheticSource source(pstar, 21);
    RejectionSet prev_lower, prev_upper{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    Interval prev_thr{0.0, std::numeric_limits<double>::infinity()};
    std::uint64_t calls = 0;
    const Decision d = run(config, source, [&](const EngineState& st) {
      ++calls;
      CHECK(oracle::is_subset(st.lower_set, st.upper_set));
      CHECK(oracle::is_subset(prev_lower, st.lower_set));
      CHECK(oracle::is_subset(st.upper_set, prev_upper));
      CHECK(st.threshold_interval.lo >= prev_thr.lo - 1e-15);
      CHECK(st.threshold_interval.hi <= prev_thr.hi + 1e-15);
      for (const auto& cs : st.streams) {
        CHECK(cs.interval.lo >= 0.0);
        CHECK(cs.interval.hi <= 1.0);
        CHECK(cs.interval.lo <= cs.interval.hi);
      }
      prev_lower = st.lower_set;
      prev_upper = st.upper_set;
      prev_thr = st.threshold_interval;
    });
    CHECK(calls == d.iterations);
    CHECK(d.iterations == 300);
  }

  TEST_CASE("freeze policy stops sampling decided hypotheses") {
    auto config = basic_config(2, 500);
    SyntheticSource source({0.0, 1.0}, 9);
    const Decision d = run(config, source);
    // Both decide long before the budget, so their sample counts stay put.
    CHECK(d.samples_per_hypothesis[0] < 500);
    CHECK(d.samples_per_hypothesis[1] < 500);
    CHECK(d.iterations == 500);
  }

  TEST_CASE("sample-all policy keeps drawing for every hypothesis") {
    auto config = basic_config(2, 200);
    config.policy = SamplingPolicy::SampleAll;
    SyntheticSource source({0.0, 1.0}, 9);
    const Decision d = run(config, source);
    CHECK(d.samples_per_hypothesis[0] == 200);
    CHECK(d.samples_per_hypothesis[1] == 200);
  }

  TEST_CASE("all-decided rule fires early") {
    auto config = basic_config(2, 100000);
    config.stopping = StoppingRule::all_decided();
    SyntheticSource source({0.0, 1.0}, 13);
    const Decision d = run(config, source);
    CHECK(d.undecided.empty());
    CHECK(d.rule_fired);
    CHECK_FALSE(d.truncated);
    CHECK(d.iterations < 100000);
  }

  TEST_CASE("fdr-ratio fires at the first iteration with an empty lower set") {
    auto config = basic_config(3, 1000);
    config.stopping = StoppingRule::fdr_ratio(2.0);
    SyntheticSource source({0.5, 0.5, 0.5}, 17);
    const Decision d = run(config, source);
    CHECK(d.iterations == 1);  // lower set empty => fraction 0 fires
    CHECK(d.rule_fired);
  }

  TEST_CASE("replay exhaustion truncates") {
    auto config = basic_config(2, 50);
    config.stopping = StoppingRule::all_decided();
    ReplaySource source = parse_replay("0,1\n0,1\n0,1\n0,1\n0,1");
    const Decision d = run(config, source);
    CHECK(d.truncated);
    CHECK_FALSE(d.rule_fired);
    CHECK(d.iterations == 5);
  }

  TEST_CASE("budget exhaustion under a non-budget rule truncates") {
    auto config = basic_config(2, 3);
    config.stopping = StoppingRule::all_decided();
    SyntheticSource source({0.4, 0.6}, 23);
    const Decision d = run(config, source);
    CHECK(d.truncated);
    CHECK(d.iterations == 3);
  }

  TEST_CASE("three sets always partition the hypotheses") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const std::uint32_t m = 1 + rng() % 12;
      std::vector<double> pstar(m);
      for (auto& v : pstar) v = std::uniform_real_distribution<>(0.0, 1.0)(rng);
      auto config = basic_config(m, 50);
      SyntheticSource source(pstar, rng());
      const Decision d = run(config, source);
      std::vector<bool> seen(m, false);
      for (auto set : {&d.rejected, &d.non_rejected, &d.undecided}) {
        for (std::int32_t i : *set) {
          CHECK_FALSE(seen[i]);
          seen[i] = true;
        }
      }
      for (bool s : seen) CHECK(s);
    }
  }

  TEST_CASE("hoeffding threshold: aggregate counts actual draws under freezing") {
    EngineConfig config;
    config.m = 2;
    config.procedure = catalog("bh", 2);
    config.threshold = ThresholdModel::pc_hoeffding(0.1);
    config.epsilon = 0.01;
    config.budget = 400;
    SyntheticSource source({0.0, 1.0}, 3);
    const Decision d = run(config, source);
    // With freezing, total draws differ per hypothesis; the decision stores
    // per-hypothesis counts that the aggregate must match.
    CHECK(d.samples_per_hypothesis[0] >= 1);
    CHECK(d.samples_per_hypothesis[1] >= 1);
  }

  TEST_CASE("hoeffding threshold interval is the narrower one (measured)") {
    // Not a theorem, but the aggregate interval should beat the plug-in
    // construction once a moderate number of samples has accrued.
    const std::uint32_t m = 60;
    std::vector<double> pstar(m);
    for (std::uint32_t i = 0; i < m; ++i) pstar[i] = (i + 0.5) / m;
    const auto width_at_stop = [&](ThresholdModel model) {
      EngineConfig config;
      config.m = m;
      config.procedure = catalog("bh", m);
      config.threshold = model;
      config.epsilon = 0.01;
      config.budget = 500;
      config.policy = SamplingPolicy::SampleAll;
      SyntheticSource source(pstar, 1234);
      const Decision d = run(config, source);
      return d.threshold_interval.width();
    };
    const double w_hoeffding = width_at_stop(ThresholdModel::pc_hoeffding(0.1));
    const double w_plugin = width_at_stop(ThresholdModel::pc_plugin(0.1));
    MESSAGE("threshold interval widths at n=500: hoeffding=",
            w_hoeffding, " plug-in=", w_plugin);
    CHECK(w_hoeffding < w_plugin);
  }

  TEST_CASE("config validation") {
    SyntheticSource source({0.5}, 1);
    auto config = basic_config(2, 10);
    CHECK_THROWS_AS(run(config, source), std::invalid_argument);  // m mismatch
    config = basic_config(1, 10);
    config.epsilon = 0.0;
    CHECK_THROWS_AS(run(config, source), std::invalid_argument);
    config = basic_config(1, 10);
    config.procedure = catalog("bh", 3);
    CHECK_THROWS_AS(run(config, source), std::invalid_argument);
    config = basic_config(1, 0);
    config.threshold = ThresholdModel::pc_hoeffding(0.1);
    CHECK_THROWS_AS(run(config, source), std::invalid_argument);
    config = basic_config(1, 10);
    config.threshold = ThresholdModel::fixed(1.5);
    CHECK_THROWS_AS(run(config, source), std::invalid_argument);
    config = basic_config(1, 10);
    config.threshold = ThresholdModel::pc_plugin(0.0);
    CHECK_THROWS_AS(run(config, source), std::invalid_argument);
  }
}

#pragma once
// The sequential decision engine. Each iteration draws new indicators,
// tightens the per-hypothesis and threshold intervals by intersection, and
// applies the procedure to the two extreme endpoint configurations:
//
//   upper_set = h((interval lower ends), threshold upper end)   -- superset
//   lower_set = h((interval upper ends), threshold lower end)   -- subset
//
// For a monotonic procedure the true rejection set h(p*, alpha*) is
// sandwiched between them whenever every interval covers its target, which
// holds with probability at least 1 - epsilon under the per-stream budgets.
// lower_set only grows and upper_set only shrinks, so hypotheses settle into
// a three-set verdict: rejected (lower_set), non-rejected (complement of
// upper_set), undecided (the rest).

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mcmt/confseq.hpp"
#include "mcmt/datasrc.hpp"
#include "mcmt/interval.hpp"
#include "mcmt/procedures.hpp"
#include "mcmt/thresholds.hpp"

namespace mcmt {

struct StoppingRule {
  enum class Kind { FixedBudget, FdrRatio, FdrAdditive, AllDecided };
  Kind kind = Kind::FixedBudget;
  double param = 0.0;  // eta >= 1 for FdrRatio, xi >= 0 for FdrAdditive

  static StoppingRule fixed_budget() { return {Kind::FixedBudget, 0.0}; }
  static StoppingRule fdr_ratio(double eta) { return {Kind::FdrRatio, eta}; }
  static StoppingRule fdr_additive(double xi) { return {Kind::FdrAdditive, xi}; }
  static StoppingRule all_decided() { return {Kind::AllDecided, 0.0}; }

  std::string to_string() const;
};

// Parses "budget", "all-decided", "fdr-ratio:<eta>", "fdr-additive:<xi>".
StoppingRule parse_stopping_rule(const std::string& spec);

enum class SamplingPolicy {
  FreezeDecided,  // sample only hypotheses still undecided
  SampleAll,      // one new sample per hypothesis every iteration
};

struct EngineConfig {
  std::uint32_t m = 0;
  Procedure procedure;
  ThresholdModel threshold;
  double epsilon = 0.05;
  std::uint64_t budget = 1000;  // iteration cap (also the schedule horizon)
  StoppingRule stopping = StoppingRule::fixed_budget();
  SamplingPolicy policy = SamplingPolicy::FreezeDecided;
  std::uint64_t seed = 0;  // echoed into the Decision for bookkeeping

  // epsilon/m for the fixed and plug-in threshold models, epsilon/(m+1) when
  // the Hoeffding interval takes its own share of the budget.
  double per_stream_beta() const;
};

struct EngineState {
  std::uint64_t iteration = 0;
  std::vector<ConfSeqState> streams;
  HoeffdingState aggregate;  // used by the Hoeffding threshold variant only
  Interval threshold_interval{0.0, 1.0};
  bool threshold_clamped = false;
  RejectionSet lower_set;  // only grows
  RejectionSet upper_set;  // only shrinks

  std::size_t undecided_count() const {
    return upper_set.size() >= lower_set.size()
               ? upper_set.size() - lower_set.size()
               : 0;
  }
  bool all_decided() const { return lower_set.size() == upper_set.size(); }
};

struct Decision {
  RejectionSet rejected;
  RejectionSet non_rejected;
  RejectionSet undecided;
  double epsilon = 0.0;
  std::uint64_t iterations = 0;
  std::vector<std::uint64_t> samples_per_hypothesis;
  StoppingRule::Kind stopping_rule = StoppingRule::Kind::FixedBudget;
  bool rule_fired = false;
  bool truncated = false;  // budget or replay depth ran out before the rule fired
  bool intersection_clamped = false;
  Interval threshold_interval{0.0, 1.0};
  std::vector<Interval> p_intervals;
  std::uint64_t seed = 0;
};

// Fraction conventions from the stopping-time definitions: the ratio
// |upper|/|lower| counts as 0 when |lower| = 0, and the additive gap
// (|upper|-|lower|)/|upper| counts as 0 when |upper| = 0.
bool stop_fdr_ratio(std::size_t upper_count, std::size_t lower_count, double eta);
bool stop_fdr_additive(std::size_t upper_count, std::size_t lower_count, double xi);
bool stop_fdr_ratio(const EngineState& state, double eta);
bool stop_fdr_additive(const EngineState& state, double xi);

// One sandwich evaluation; thresholds above 1 (including the +inf cap) are
// clamped to 1 before the critical values are computed.
std::pair<RejectionSet, RejectionSet> sandwich(std::span<const double> lower_p,
                                               std::span<const double> upper_p,
                                               const Interval& threshold,
                                               const Procedure& procedure);

using IterationObserver = std::function<void(const EngineState&)>;

// Runs the loop until the stopping rule fires, the budget is exhausted, or a
// bounded source runs dry (the latter two set the truncation flag unless the
// rule is the budget itself). Deterministic given (config, source).
Decision run(const EngineConfig& config, SampleSource& source,
             const IterationObserver& observer = {});

}  // namespace mcmt

#pragma once
// Synthetic-scenario harness: draws a known p* vector once per experiment,
// re-runs the naive fixed-sample method or the interval engine with fresh
// sampling seeds, and scores decision stability with the randomly-classified
// count (hypotheses whose significant / non-significant call flips across
// repetitions more often than a cutoff; undecided outcomes count toward
// neither call).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mcmt/engine.hpp"
#include "mcmt/procedures.hpp"
#include "mcmt/thresholds.hpp"

namespace mcmt {

struct Law {
  enum class Kind { Uniform, Point };
  Kind kind = Kind::Uniform;
  double a = 0.0;
  double b = 1.0;  // upper bound for Uniform, ignored for Point

  // "uniform:<lo>,<hi>" or "point:<v>".
  static Law parse(const std::string& spec);
  std::string to_string() const;
};

struct Scenario {
  std::uint32_t m = 0;
  double null_fraction = 0.5;
  Law null_law{Law::Kind::Uniform, 0.2, 1.0};
  Law alt_law{Law::Kind::Uniform, 0.0, 0.001};
};

// The first ceil(m * null_fraction) hypotheses are true nulls; all draws are
// counter-based on the seed, so the vector is reproducible.
std::vector<double> draw_pstar(const Scenario& scenario, std::uint64_t seed);

enum class Call : std::uint8_t { NonSignificant = 0, Significant = 1, Undecided = 2 };

std::vector<Call> calls_from_decision(const Decision& decision, std::uint32_t m);
std::vector<Call> calls_from_rejections(const RejectionSet& rejected, std::uint32_t m);

struct RcSummary {
  std::vector<double> p_significant;      // per-hypothesis frequency of "significant"
  std::vector<double> p_non_significant;  // frequency of "non-significant"
  std::vector<double> p_random;           // min of the two
  RejectionSet randomly_classified;       // indices with p_random > cutoff
  std::size_t rc_count = 0;
};

RcSummary rc_metric(const std::vector<std::vector<Call>>& rep_calls, double cutoff);

// The naive method: point estimates p_hat_i from a fixed number of samples
// per hypothesis, plug-in threshold when the model is Pounds-Cheng, one shot
// of the procedure. add_one selects (S_i + 1)/(s + 1) instead of S_i/s.
RejectionSet naive_method(std::span<const std::uint64_t> exceedances,
                          std::uint64_t samples, const Procedure& procedure,
                          const ThresholdModel& threshold, bool add_one = false);

// Exceedance counts of hypothesis i after `samples` draws from the synthetic
// source (same keying as the engine would use).
std::vector<std::uint64_t> count_exceedances(std::span<const double> p_star,
                                             std::uint64_t seed,
                                             std::uint64_t samples);

// Runs fn(rep) for rep in [0, reps) across a small thread pool; results land
// at their own index, so the output order is deterministic.
void parallel_reps(std::size_t reps, const std::function<void(std::size_t)>& fn);

}  // namespace mcmt

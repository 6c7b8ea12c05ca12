#pragma once
// Anytime-valid confidence intervals for Bernoulli proportions: per-stream
// confidence sequences after Lai (1976), an aggregate Hoeffding (1963)
// interval for the mean of several streams, and the error-spending schedule
// that distributes a total budget over iterations. All intervals are kept as
// running intersections, so they are nested by construction.

#include <cstdint>
#include <span>

#include "mcmt/interval.hpp"

namespace mcmt {

// The two roots g < f of (n+1) C(n,x) p^x (1-p)^(n-x) = beta. The interval
// [g, f] covers the true success probability simultaneously over all n with
// probability at least 1 - beta. At x = 0 (x = n) the kernel is one-sided
// and the missing root is pinned to 0 (1); if the kernel maximum does not
// exceed beta the vacuous [0, 1] is returned. Requires n >= 1, 0 <= x <= n,
// beta in (0, 1).
Interval lai_roots(std::uint64_t n, std::uint64_t x, double beta);

// Sufficient statistics and running interval for one Bernoulli stream.
struct ConfSeqState {
  std::uint64_t n = 0;
  std::uint64_t successes = 0;
  double beta = 0.05;
  Interval interval{0.0, 1.0};
  bool clamped = false;  // an intersection ever came up empty (numeric noise)

  ConfSeqState() = default;
  explicit ConfSeqState(double beta_) : beta(beta_) {}

  // Count the outcome without touching the interval (the engine batches the
  // root finding across hypotheses and calls intersect() afterwards).
  void advance(int outcome) {
    ++n;
    if (outcome != 0) ++successes;
  }

  void intersect(const Interval& fresh) {
    interval = intersect_clamped(interval, fresh, &clamped);
  }

  // One full update: count, recompute the Lai interval, intersect.
  void update(int outcome) {
    advance(outcome);
    intersect(lai_roots(n, successes, beta));
  }
};

// Fixed-sample Hoeffding interval for the mean success probability of the
// streams pooled into (successes, samples): mean +- sqrt(-log(eta/2) /
// (2 samples)), clipped to [0,1]. eta in (0, 2]; eta = 2 collapses to the
// point estimate.
Interval hoeffding_interval(std::uint64_t successes, std::uint64_t samples,
                            double eta);

// Error spent at iteration n when a total of epsilon/(m+1) is distributed
// over iterations as nu_n = n/(n+s) * epsilon/(m+1): eta_n = nu_n - nu_{n-1}.
// The partial sums increase strictly toward epsilon/(m+1) without reaching it.
double eta_schedule(std::uint64_t n, std::uint64_t horizon, double epsilon,
                    std::uint32_t m);

// Aggregate state for the pooled streams; refresh() spends eta_n and
// intersects the fresh Hoeffding interval into the running one.
struct HoeffdingState {
  std::uint32_t m = 0;
  std::uint64_t total_successes = 0;
  std::uint64_t total_samples = 0;
  double eta_total = 0.0;
  double eta_spent = 0.0;
  Interval interval{0.0, 1.0};
  bool clamped = false;

  HoeffdingState() = default;
  HoeffdingState(std::uint32_t m_, double eta_total_)
      : m(m_), eta_total(eta_total_) {}

  void add_samples(std::uint64_t successes, std::uint64_t count) {
    total_successes += successes;
    total_samples += count;
  }

  void refresh(double eta_n) {
    eta_spent += eta_n;
    if (total_samples == 0) return;
    interval = intersect_clamped(
        interval, hoeffding_interval(total_successes, total_samples, eta_n),
        &clamped);
  }
};

}  // namespace mcmt

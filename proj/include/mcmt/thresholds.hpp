#pragma once
// Interval constructions for the testing threshold alpha*: a fixed constant,
// or the Pounds-Cheng corrected threshold t*/pi0_hat(p*) bounded either by
// plugging per-hypothesis p-value bounds into pi0_hat or by an aggregate
// Hoeffding interval for the mean p-value. A pi0 lower bound of zero makes
// the upper threshold bound +infinity ("no evidence yet"); consumers clamp
// to alpha = 1 when evaluating critical values.

#include <span>

#include "mcmt/confseq.hpp"
#include "mcmt/interval.hpp"

namespace mcmt {

struct ThresholdModel {
  enum class Kind { Fixed, PoundsChengPlugin, PoundsChengHoeffding };
  Kind kind = Kind::Fixed;
  // alpha* for Fixed; the uncorrected threshold t* in (0,1] otherwise.
  double level = 0.05;

  static ThresholdModel fixed(double alpha_star) { return {Kind::Fixed, alpha_star}; }
  static ThresholdModel pc_plugin(double t_star) { return {Kind::PoundsChengPlugin, t_star}; }
  static ThresholdModel pc_hoeffding(double t_star) { return {Kind::PoundsChengHoeffding, t_star}; }
};

// Pounds-Cheng estimator of the proportion of true null hypotheses:
// min(1, 2/m * sum p_i). Monotone in every coordinate.
double pi0_hat(std::span<const double> p);

// [t*/pi0_hat(upper), t*/pi0_hat(lower)] from componentwise p-value bounds.
Interval plugin_interval(std::span<const double> lower_p,
                         std::span<const double> upper_p, double t_star);

// Image of a mean-p interval [a,b] under x -> t*/min(1, 2x) (decreasing):
// [t*/min(1,2b), t*/min(1,2a)].
Interval pounds_cheng_from_mean(const Interval& mean_interval, double t_star);

// Spend eta_n on the aggregate state, then map its refreshed mean interval
// to a threshold interval.
Interval hoeffding_threshold_interval(HoeffdingState& state, double t_star,
                                      double eta_n);

}  // namespace mcmt

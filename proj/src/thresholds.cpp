#include "mcmt/thresholds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mcmt {

namespace {

double over_pi0(double t_star, double pi0) {
  if (pi0 <= 0.0) return std::numeric_limits<double>::infinity();
  return t_star / pi0;
}

}  // namespace

double pi0_hat(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("pi0_hat: empty p-value vector");
  double sum = 0.0;
  for (double v : p) sum += v;
  return std::min(1.0, 2.0 * sum / static_cast<double>(p.size()));
}

Interval plugin_interval(std::span<const double> lower_p,
                         std::span<const double> upper_p, double t_star) {
  if (lower_p.size() != upper_p.size()) {
    throw std::invalid_argument("plugin_interval: bound vectors differ in length");
  }
  const double pi_upper = pi0_hat(upper_p);
  const double pi_lower = pi0_hat(lower_p);
  return {over_pi0(t_star, pi_upper), over_pi0(t_star, pi_lower)};
}

Interval pounds_cheng_from_mean(const Interval& mean_interval, double t_star) {
  const double pi_upper = std::min(1.0, 2.0 * mean_interval.hi);
  const double pi_lower = std::min(1.0, 2.0 * mean_interval.lo);
  return {over_pi0(t_star, pi_upper), over_pi0(t_star, pi_lower)};
}

Interval hoeffding_threshold_interval(HoeffdingState& state, double t_star,
                                      double eta_n) {
  state.refresh(eta_n);
  return pounds_cheng_from_mean(state.interval, t_star);
}

}  // namespace mcmt

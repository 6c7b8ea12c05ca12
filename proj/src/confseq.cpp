#include "mcmt/confseq.hpp"

#include <cmath>
#include <stdexcept>

#include "mcmt/kernels.hpp"

namespace mcmt {

Interval lai_roots(std::uint64_t n, std::uint64_t x, double beta) {
  if (n < 1 || x > n) throw std::invalid_argument("lai_roots: need 0 <= x <= n, n >= 1");
  if (!(beta > 0.0) || !(beta < 1.0)) throw std::invalid_argument("lai_roots: beta must be in (0,1)");
  // Single-shot queries always go through the scalar reference so the public
  // function is identical on every ISA; the engine uses the dispatched batch.
  const std::uint32_t n32 = static_cast<std::uint32_t>(n);
  const std::uint32_t x32 = static_cast<std::uint32_t>(x);
  double lo = 0.0, hi = 1.0;
  kernels::scalar_ops().lai_roots(&n32, &x32, &beta, &lo, &hi, 1);
  return {lo, hi};
}

Interval hoeffding_interval(std::uint64_t successes, std::uint64_t samples,
                            double eta) {
  if (samples == 0) throw std::invalid_argument("hoeffding_interval: no samples");
  if (!(eta > 0.0) || eta > 2.0) throw std::invalid_argument("hoeffding_interval: eta must be in (0,2]");
  const double mean =
      static_cast<double>(successes) / static_cast<double>(samples);
  const double u =
      std::sqrt(-std::log(eta / 2.0) / (2.0 * static_cast<double>(samples)));
  return {std::max(0.0, mean - u), std::min(1.0, mean + u)};
}

double eta_schedule(std::uint64_t n, std::uint64_t horizon, double epsilon,
                    std::uint32_t m) {
  if (n < 1 || horizon < 1) throw std::invalid_argument("eta_schedule: need n >= 1 and horizon >= 1");
  const double budget = epsilon / (static_cast<double>(m) + 1.0);
  const double nd = static_cast<double>(n);
  const double sd = static_cast<double>(horizon);
  const double nu_n = nd / (nd + sd) * budget;
  const double nu_prev = (nd - 1.0) / (nd - 1.0 + sd) * budget;
  return nu_n - nu_prev;
}

}  // namespace mcmt

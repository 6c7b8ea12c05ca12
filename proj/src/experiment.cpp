#include "mcmt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "mcmt/kernels.hpp"

namespace mcmt {

Law Law::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  if (head == "point") {
    if (colon == std::string::npos) throw std::invalid_argument("law: point needs a value");
    const double v = std::stod(spec.substr(colon + 1));
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("law: point value outside [0,1]");
    return {Kind::Point, v, v};
  }
  if (head == "uniform") {
    if (colon == std::string::npos) throw std::invalid_argument("law: uniform needs lo,hi");
    const std::string rest = spec.substr(colon + 1);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("law: uniform needs lo,hi");
    const double lo = std::stod(rest.substr(0, comma));
    const double hi = std::stod(rest.substr(comma + 1));
    if (lo < 0.0 || hi > 1.0 || lo > hi) {
      throw std::invalid_argument("law: uniform bounds must satisfy 0 <= lo <= hi <= 1");
    }
    return {Kind::Uniform, lo, hi};
  }
  throw std::invalid_argument("unknown law: " + spec);
}

std::string Law::to_string() const {
  if (kind == Kind::Point) return "point:" + std::to_string(a);
  return "uniform:" + std::to_string(a) + "," + std::to_string(b);
}

std::vector<double> draw_pstar(const Scenario& scenario, std::uint64_t seed) {
  if (scenario.m == 0) throw std::invalid_argument("scenario: m must be positive");
  if (scenario.null_fraction < 0.0 || scenario.null_fraction > 1.0) {
    throw std::invalid_argument("scenario: null fraction outside [0,1]");
  }
  const auto n_null = static_cast<std::uint32_t>(
      std::ceil(scenario.null_fraction * scenario.m));
  std::vector<double> u(scenario.m);
  // Dedicated stream id so p* draws never collide with engine sampling.
  kernels::active().uniforms(seed, 0x70737461ull /* "psta" */, 0, u.data(), u.size());
  std::vector<double> p(scenario.m);
  for (std::uint32_t i = 0; i < scenario.m; ++i) {
    const Law& law = i < n_null ? scenario.null_law : scenario.alt_law;
    p[i] = law.kind == Law::Kind::Point ? law.a : law.a + (law.b - law.a) * u[i];
  }
  return p;
}

std::vector<Call> calls_from_decision(const Decision& decision, std::uint32_t m) {
  std::vector<Call> calls(m, Call::Undecided);
  for (std::int32_t i : decision.rejected) calls.at(i) = Call::Significant;
  for (std::int32_t i : decision.non_rejected) calls.at(i) = Call::NonSignificant;
  return calls;
}

std::vector<Call> calls_from_rejections(const RejectionSet& rejected, std::uint32_t m) {
  std::vector<Call> calls(m, Call::NonSignificant);
  for (std::int32_t i : rejected) calls.at(i) = Call::Significant;
  return calls;
}

RcSummary rc_metric(const std::vector<std::vector<Call>>& rep_calls, double cutoff) {
  if (rep_calls.empty()) throw std::invalid_argument("rc_metric: need at least one repetition");
  if (!(cutoff > 0.0) || !(cutoff < 1.0)) throw std::invalid_argument("rc_metric: cutoff must be in (0,1)");
  const std::size_t m = rep_calls.front().size();
  RcSummary out;
  out.p_significant.assign(m, 0.0);
  out.p_non_significant.assign(m, 0.0);
  for (const auto& calls : rep_calls) {
    if (calls.size() != m) throw std::invalid_argument("rc_metric: ragged repetition");
    for (std::size_t i = 0; i < m; ++i) {
      if (calls[i] == Call::Significant) out.p_significant[i] += 1.0;
      if (calls[i] == Call::NonSignificant) out.p_non_significant[i] += 1.0;
    }
  }
  const double r = static_cast<double>(rep_calls.size());
  out.p_random.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.p_significant[i] /= r;
    out.p_non_significant[i] /= r;
    out.p_random[i] = std::min(out.p_significant[i], out.p_non_significant[i]);
    if (out.p_random[i] > cutoff) {
      out.randomly_classified.push_back(static_cast<std::int32_t>(i));
    }
  }
  out.rc_count = out.randomly_classified.size();
  return out;
}

RejectionSet naive_method(std::span<const std::uint64_t> exceedances,
                          std::uint64_t samples, const Procedure& procedure,
                          const ThresholdModel& threshold, bool add_one) {
  if (samples == 0) throw std::invalid_argument("naive method: needs at least one sample");
  std::vector<double> p_hat(exceedances.size());
  for (std::size_t i = 0; i < exceedances.size(); ++i) {
    p_hat[i] = add_one ? (static_cast<double>(exceedances[i]) + 1.0) /
                             (static_cast<double>(samples) + 1.0)
                       : static_cast<double>(exceedances[i]) /
                             static_cast<double>(samples);
  }
  double alpha = threshold.level;
  if (threshold.kind != ThresholdModel::Kind::Fixed) {
    const double pi0 = pi0_hat(p_hat);
    alpha = pi0 > 0.0 ? std::min(1.0, threshold.level / pi0) : 1.0;
  }
  return procedure.apply(p_hat, alpha);
}

std::vector<std::uint64_t> count_exceedances(std::span<const double> p_star,
                                             std::uint64_t seed,
                                             std::uint64_t samples) {
  const auto& ops = kernels::active();
  std::vector<std::int32_t> idx(p_star.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int32_t>(i);
  std::vector<std::uint8_t> bits(p_star.size());
  std::vector<std::uint64_t> counts(p_star.size(), 0);
  for (std::uint64_t n = 1; n <= samples; ++n) {
    ops.bernoulli_draws(seed, n, idx.data(), p_star.data(), bits.data(), bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) counts[i] += bits[i];
  }
  return counts;
}

void parallel_reps(std::size_t reps, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(reps, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) fn(r);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mcmt

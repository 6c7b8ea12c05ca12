#include "mcmt/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mcmt/kernels.hpp"

namespace mcmt {

std::string StoppingRule::to_string() const {
  switch (kind) {
    case Kind::FixedBudget: return "budget";
    case Kind::FdrRatio: return "fdr-ratio:" + std::to_string(param);
    case Kind::FdrAdditive: return "fdr-additive:" + std::to_string(param);
    case Kind::AllDecided: return "all-decided";
  }
  return "?";
}

StoppingRule parse_stopping_rule(const std::string& spec) {
  if (spec == "budget") return StoppingRule::fixed_budget();
  if (spec == "all-decided") return StoppingRule::all_decided();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const double value = std::stod(spec.substr(colon + 1));
    if (head == "fdr-ratio") {
      if (value < 1.0) throw std::invalid_argument("fdr-ratio requires eta >= 1");
      return StoppingRule::fdr_ratio(value);
    }
    if (head == "fdr-additive") {
      if (value < 0.0) throw std::invalid_argument("fdr-additive requires xi >= 0");
      return StoppingRule::fdr_additive(value);
    }
  }
  throw std::invalid_argument("unknown stopping rule: " + spec);
}

double EngineConfig::per_stream_beta() const {
  const double md = static_cast<double>(m);
  return threshold.kind == ThresholdModel::Kind::PoundsChengHoeffding
             ? epsilon / (md + 1.0)
             : epsilon / md;
}

bool stop_fdr_ratio(std::size_t upper_count, std::size_t lower_count, double eta) {
  const double fraction = lower_count == 0
                              ? 0.0
                              : static_cast<double>(upper_count) /
                                    static_cast<double>(lower_count);
  return fraction <= eta;
}

bool stop_fdr_additive(std::size_t upper_count, std::size_t lower_count, double xi) {
  const double fraction =
      upper_count == 0
          ? 0.0
          : static_cast<double>(upper_count - lower_count) /
                static_cast<double>(upper_count);
  return fraction <= xi;
}

bool stop_fdr_ratio(const EngineState& state, double eta) {
  return stop_fdr_ratio(state.upper_set.size(), state.lower_set.size(), eta);
}

bool stop_fdr_additive(const EngineState& state, double xi) {
  return stop_fdr_additive(state.upper_set.size(), state.lower_set.size(), xi);
}

namespace {

double clamp_alpha(double value) {
  return std::isfinite(value) ? std::min(1.0, std::max(0.0, value)) : 1.0;
}

}  // namespace

std::pair<RejectionSet, RejectionSet> sandwich(std::span<const double> lower_p,
                                               std::span<const double> upper_p,
                                               const Interval& threshold,
                                               const Procedure& procedure) {
  RejectionSet lower_set = procedure.apply(upper_p, clamp_alpha(threshold.lo));
  RejectionSet upper_set = procedure.apply(lower_p, clamp_alpha(threshold.hi));
  return {std::move(lower_set), std::move(upper_set)};
}

namespace {

void validate(const EngineConfig& config, const SampleSource& source) {
  if (config.m == 0) throw std::invalid_argument("engine: m must be positive");
  if (config.m != source.m()) throw std::invalid_argument("engine: source has different m");
  if (!(config.epsilon > 0.0) || !(config.epsilon < 1.0)) {
    throw std::invalid_argument("engine: epsilon must be in (0,1)");
  }
  if (config.procedure.tau.m != config.m) {
    throw std::invalid_argument("engine: procedure built for a different m");
  }
  if (config.stopping.kind == StoppingRule::Kind::FdrRatio && config.stopping.param < 1.0) {
    throw std::invalid_argument("engine: fdr-ratio eta must be >= 1");
  }
  if (config.stopping.kind == StoppingRule::Kind::FdrAdditive && config.stopping.param < 0.0) {
    throw std::invalid_argument("engine: fdr-additive xi must be >= 0");
  }
  if (config.threshold.kind == ThresholdModel::Kind::Fixed) {
    if (!(config.threshold.level >= 0.0 && config.threshold.level <= 1.0)) {
      throw std::invalid_argument("engine: fixed alpha* must be in [0,1]");
    }
  } else if (!(config.threshold.level > 0.0 && config.threshold.level <= 1.0)) {
    throw std::invalid_argument("engine: t* must be in (0,1]");
  }
  if (config.threshold.kind == ThresholdModel::Kind::PoundsChengHoeffding &&
      config.budget < 1) {
    throw std::invalid_argument("engine: the Hoeffding threshold needs a finite budget horizon");
  }
}

bool rule_satisfied(const EngineConfig& config, const EngineState& state) {
  switch (config.stopping.kind) {
    case StoppingRule::Kind::FixedBudget:
      return state.iteration >= config.budget;
    case StoppingRule::Kind::FdrRatio:
      return stop_fdr_ratio(state, config.stopping.param);
    case StoppingRule::Kind::FdrAdditive:
      return stop_fdr_additive(state, config.stopping.param);
    case StoppingRule::Kind::AllDecided:
      return state.all_decided();
  }
  return false;
}

Decision finish(const EngineConfig& config, const EngineState& state,
                bool fired, bool truncated) {
  Decision d;
  d.rejected = state.lower_set;
  d.undecided.reserve(state.undecided_count());
  std::set_difference(state.upper_set.begin(), state.upper_set.end(),
                      state.lower_set.begin(), state.lower_set.end(),
                      std::back_inserter(d.undecided));
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(config.m); ++i) {
    if (!std::binary_search(state.upper_set.begin(), state.upper_set.end(), i)) {
      d.non_rejected.push_back(i);
    }
  }
  d.epsilon = config.epsilon;
  d.iterations = state.iteration;
  d.samples_per_hypothesis.reserve(config.m);
  d.p_intervals.reserve(config.m);
  bool clamped = state.threshold_clamped || state.aggregate.clamped;
  for (const ConfSeqState& s : state.streams) {
    d.samples_per_hypothesis.push_back(s.n);
    d.p_intervals.push_back(s.interval);
    clamped = clamped || s.clamped;
  }
  d.stopping_rule = config.stopping.kind;
  d.rule_fired = fired;
  d.truncated = truncated;
  d.intersection_clamped = clamped;
  d.threshold_interval = state.threshold_interval;
  d.seed = config.seed;
  return d;
}

}  // namespace

Decision run(const EngineConfig& config, SampleSource& source,
             const IterationObserver& observer) {
  validate(config, source);
  const std::uint32_t m = config.m;
  const double beta = config.per_stream_beta();

  EngineState state;
  state.streams.assign(m, ConfSeqState(beta));
  state.upper_set.resize(m);
  for (std::uint32_t i = 0; i < m; ++i) state.upper_set[i] = static_cast<std::int32_t>(i);

  switch (config.threshold.kind) {
    case ThresholdModel::Kind::Fixed:
      state.threshold_interval = {config.threshold.level, config.threshold.level};
      break;
    case ThresholdModel::Kind::PoundsChengPlugin:
    case ThresholdModel::Kind::PoundsChengHoeffding:
      state.threshold_interval = {config.threshold.level,
                                  std::numeric_limits<double>::infinity()};
      break;
  }
  if (config.threshold.kind == ThresholdModel::Kind::PoundsChengHoeffding) {
    state.aggregate =
        HoeffdingState(m, config.epsilon / (static_cast<double>(m) + 1.0));
  }

  if (config.budget == 0) {
    const bool fired = rule_satisfied(config, state);
    return finish(config, state, fired, !fired);
  }

  struct {
    std::vector<std::int32_t> active;
    std::vector<std::uint8_t> bits;
    std::vector<std::uint32_t> batch_n, batch_x;
    std::vector<double> batch_beta, batch_lo, batch_hi;
    std::vector<double> lower_p, upper_p;
  } scratch;
  scratch.lower_p.assign(m, 0.0);
  scratch.upper_p.assign(m, 1.0);

  const auto& ops = kernels::active();

  while (state.iteration < config.budget) {
    // Sample selection depends only on the history so far.
    scratch.active.clear();
    if (config.policy == SamplingPolicy::SampleAll) {
      for (std::uint32_t i = 0; i < m; ++i) scratch.active.push_back(static_cast<std::int32_t>(i));
    } else {
      std::set_difference(state.upper_set.begin(), state.upper_set.end(),
                          state.lower_set.begin(), state.lower_set.end(),
                          std::back_inserter(scratch.active));
    }

    if (scratch.active.empty() && !observer &&
        config.threshold.kind != ThresholdModel::Kind::PoundsChengHoeffding) {
      // Frozen fixed point: every hypothesis is decided, nothing is sampled,
      // and the fixed or plug-in threshold interval cannot move, so the
      // remaining iterations are no-ops.
      state.iteration = config.budget;
      const bool budget_is_rule =
          config.stopping.kind == StoppingRule::Kind::FixedBudget;
      return finish(config, state, budget_is_rule, !budget_is_rule);
    }

    const std::uint64_t n = state.iteration + 1;
    if (source.depth() && n > *source.depth()) {
      break;  // source exhausted; decision reflects the last completed iteration
    }

    if (!scratch.active.empty()) {
      scratch.bits.resize(scratch.active.size());
      source.draw_row(n, scratch.active, scratch.bits);

      scratch.batch_n.clear();
      scratch.batch_x.clear();
      scratch.batch_beta.clear();
      for (std::size_t k = 0; k < scratch.active.size(); ++k) {
        ConfSeqState& s = state.streams[static_cast<std::size_t>(scratch.active[k])];
        s.advance(scratch.bits[k]);
        scratch.batch_n.push_back(static_cast<std::uint32_t>(s.n));
        scratch.batch_x.push_back(static_cast<std::uint32_t>(s.successes));
        scratch.batch_beta.push_back(s.beta);
      }
      scratch.batch_lo.resize(scratch.active.size());
      scratch.batch_hi.resize(scratch.active.size());
      ops.lai_roots(scratch.batch_n.data(), scratch.batch_x.data(),
                    scratch.batch_beta.data(), scratch.batch_lo.data(),
                    scratch.batch_hi.data(), scratch.active.size());
      for (std::size_t k = 0; k < scratch.active.size(); ++k) {
        const auto i = static_cast<std::size_t>(scratch.active[k]);
        state.streams[i].intersect({scratch.batch_lo[k], scratch.batch_hi[k]});
        scratch.lower_p[i] = state.streams[i].interval.lo;
        scratch.upper_p[i] = state.streams[i].interval.hi;
      }

      if (config.threshold.kind == ThresholdModel::Kind::PoundsChengHoeffding) {
        std::uint64_t new_successes = 0;
        for (std::uint8_t b : scratch.bits) new_successes += b;
        state.aggregate.add_samples(new_successes, scratch.active.size());
      }
    }

    state.iteration = n;

    switch (config.threshold.kind) {
      case ThresholdModel::Kind::Fixed:
        break;
      case ThresholdModel::Kind::PoundsChengPlugin:
        state.threshold_interval = intersect_clamped(
            state.threshold_interval,
            plugin_interval(scratch.lower_p, scratch.upper_p,
                            config.threshold.level),
            &state.threshold_clamped);
        break;
      case ThresholdModel::Kind::PoundsChengHoeffding: {
        const double eta_n = eta_schedule(n, config.budget, config.epsilon, m);
        state.threshold_interval = intersect_clamped(
            state.threshold_interval,
            hoeffding_threshold_interval(state.aggregate,
                                         config.threshold.level, eta_n),
            &state.threshold_clamped);
        break;
      }
    }

    auto [lower_set, upper_set] =
        sandwich(scratch.lower_p, scratch.upper_p, state.threshold_interval,
                 config.procedure);
    state.lower_set = std::move(lower_set);
    state.upper_set = std::move(upper_set);

    if (observer) observer(state);

    if (rule_satisfied(config, state)) {
      return finish(config, state, true, false);
    }
  }

  // Budget or source ran out before the rule fired.
  return finish(config, state, false, true);
}

}  // namespace mcmt

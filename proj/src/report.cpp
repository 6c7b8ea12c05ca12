#include "mcmt/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace mcmt {

namespace {

std::string rule_name(StoppingRule::Kind kind) {
  switch (kind) {
    case StoppingRule::Kind::FixedBudget: return "budget";
    case StoppingRule::Kind::FdrRatio: return "fdr-ratio";
    case StoppingRule::Kind::FdrAdditive: return "fdr-additive";
    case StoppingRule::Kind::AllDecided: return "all-decided";
  }
  return "?";
}

nlohmann::ordered_json bound_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

nlohmann::ordered_json indices_json(const RejectionSet& set) {
  auto arr = nlohmann::ordered_json::array();
  for (std::int32_t i : set) arr.push_back(i + 1);
  return arr;
}

std::string indices_text(const RejectionSet& set) {
  if (set.empty()) return "-";
  std::ostringstream os;
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k > 0) os << ' ';
    os << set[k] + 1;
  }
  return os.str();
}

const char* decision_of(const Decision& d, std::int32_t i) {
  if (std::binary_search(d.rejected.begin(), d.rejected.end(), i)) return "rejected";
  if (std::binary_search(d.undecided.begin(), d.undecided.end(), i)) return "undecided";
  return "non-rejected";
}

}  // namespace

std::string report_table(const Decision& d, const RunInfo& info) {
  const std::size_t m = d.p_intervals.size();
  std::ostringstream os;
  os << "hypotheses: " << m << "   epsilon: " << d.epsilon << "   procedure: "
     << info.procedure_label << "   threshold: " << info.threshold_description << '\n';
  os << "iterations: " << d.iterations << "   stopping rule: " << rule_name(d.stopping_rule)
     << (d.rule_fired ? " (fired)" : " (did not fire)")
     << (d.truncated ? "   TRUNCATED" : "") << '\n';
  if (d.intersection_clamped) os << "warning: an interval intersection was clamped\n";
  os << "rejected     (" << d.rejected.size() << "): " << indices_text(d.rejected) << '\n';
  os << "non-rejected (" << d.non_rejected.size() << "): " << indices_text(d.non_rejected) << '\n';
  os << "undecided    (" << d.undecided.size() << "): " << indices_text(d.undecided) << '\n';
  if (d.undecided.empty()) os << "all hypotheses decided\n";
  os << "threshold interval: [" << d.threshold_interval.lo << ", ";
  if (std::isinf(d.threshold_interval.hi)) {
    os << "inf";
  } else {
    os << d.threshold_interval.hi;
  }
  os << "]\n";
  os << "   # decision      p-interval at stop        samples\n";
  for (std::size_t i = 0; i < m; ++i) {
    const auto idx = static_cast<std::int32_t>(i);
    char line[128];
    std::snprintf(line, sizeof(line), "%4zu %-13s [%.6f, %.6f]      %llu\n", i + 1,
                  decision_of(d, idx), d.p_intervals[i].lo, d.p_intervals[i].hi,
                  static_cast<unsigned long long>(d.samples_per_hypothesis[i]));
    os << line;
  }
  return os.str();
}

std::string report_json(const Decision& d, const RunInfo& info) {
  nlohmann::ordered_json j;
  j["m"] = d.p_intervals.size();
  j["epsilon"] = d.epsilon;
  j["procedure"] = info.procedure_label;
  j["threshold"] = info.threshold_description;
  j["input"] = info.input_description;
  j["iterations"] = d.iterations;
  j["stopping_rule"] = rule_name(d.stopping_rule);
  j["rule_fired"] = d.rule_fired;
  j["truncated"] = d.truncated;
  j["all_decided"] = d.undecided.empty();
  j["rejected"] = indices_json(d.rejected);
  j["non_rejected"] = indices_json(d.non_rejected);
  j["undecided"] = indices_json(d.undecided);
  j["threshold_interval"] = nlohmann::ordered_json::array(
      {bound_json(d.threshold_interval.lo), bound_json(d.threshold_interval.hi)});
  auto intervals = nlohmann::ordered_json::array();
  for (const Interval& iv : d.p_intervals) {
    intervals.push_back(nlohmann::ordered_json::array({iv.lo, iv.hi}));
  }
  j["p_intervals"] = intervals;
  j["samples_per_hypothesis"] = d.samples_per_hypothesis;
  j["intersection_clamped"] = d.intersection_clamped;
  j["seed"] = d.seed;
  return j.dump(2) + "\n";
}

}  // namespace mcmt

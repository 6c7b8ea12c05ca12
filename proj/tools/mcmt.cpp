// Command-line front end: analyze an indicator matrix, run synthetic
// stability experiments, or list the procedure catalog.
//
// Exit codes: 0 success, 1 input error, 2 truncation (budget or input
// exhausted before the stopping rule fired).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcmt/datasrc.hpp"
#include "mcmt/engine.hpp"
#include "mcmt/experiment.hpp"
#include "mcmt/kernels.hpp"
#include "mcmt/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitTruncated = 2;

struct EngineFlags {
  std::string procedure = "bh";
  std::string shaffer;  // comma-separated admissible counts
  double alpha = 0.1;
  std::string threshold = "pc-hoeffding";
  double epsilon = 0.01;
  std::uint64_t budget = 0;  // 0 = pick a default per command
  std::string stop = "budget";
  std::string policy = "freeze";
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--procedure", procedure, "catalog procedure name")
        ->check(CLI::IsMember(mcmt::catalog_names()));
    cmd->add_option("--shaffer", shaffer,
                    "admissible true-null counts for Shaffer, e.g. 0,1,3");
    cmd->add_option("--alpha", alpha,
                    "testing threshold alpha* (fixed) or uncorrected t* (Pounds-Cheng)");
    cmd->add_option("--threshold", threshold, "threshold model")
        ->check(CLI::IsMember({"fixed", "pc-plugin", "pc-hoeffding"}));
    cmd->add_option("--epsilon", epsilon, "overall error probability");
    cmd->add_option("--budget", budget,
                    "iteration budget (0 = default: replay depth / 1000)");
    cmd->add_option("--stop", stop,
                    "stopping rule: budget | all-decided | fdr-ratio:<eta> | fdr-additive:<xi>");
    cmd->add_option("--policy", policy, "sampling policy")
        ->check(CLI::IsMember({"freeze", "sample-all"}));
    cmd->add_option("--seed", seed, "RNG seed");
  }

  mcmt::Procedure make_procedure(std::uint32_t m) const {
    mcmt::CatalogParams params;
    if (!shaffer.empty()) {
      std::stringstream ss(shaffer);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        params.shaffer_counts.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
      }
    }
    return mcmt::catalog(procedure, m, params);
  }

  mcmt::ThresholdModel make_threshold() const {
    if (threshold == "fixed") return mcmt::ThresholdModel::fixed(alpha);
    if (threshold == "pc-plugin") return mcmt::ThresholdModel::pc_plugin(alpha);
    return mcmt::ThresholdModel::pc_hoeffding(alpha);
  }

  mcmt::EngineConfig make_config(std::uint32_t m, std::uint64_t default_budget) const {
    mcmt::EngineConfig config;
    config.m = m;
    config.procedure = make_procedure(m);
    config.threshold = make_threshold();
    config.epsilon = epsilon;
    config.budget = budget == 0 ? default_budget : budget;
    config.stopping = mcmt::parse_stopping_rule(stop);
    config.policy = policy == "sample-all" ? mcmt::SamplingPolicy::SampleAll
                                           : mcmt::SamplingPolicy::FreezeDecided;
    config.seed = seed;
    return config;
  }

  std::string threshold_description() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s(%g)", threshold.c_str(), alpha);
    return buf;
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

int cmd_analyze(const EngineFlags& flags, const std::string& input,
                const std::string& out_path, const std::string& format) {
  mcmt::ReplaySource source = mcmt::load_replay(input);
  const std::uint64_t depth = source.depth().value();
  mcmt::EngineConfig config = flags.make_config(source.m(), depth);
  const mcmt::Decision decision = mcmt::run(config, source);
  const mcmt::RunInfo info{config.procedure.label, flags.threshold_description(), input};
  emit(format == "structured" ? mcmt::report_json(decision, info)
                              : mcmt::report_table(decision, info),
       out_path);
  return decision.truncated ? kExitTruncated : kExitOk;
}

struct MethodSpec {
  bool naive = false;
  std::uint64_t naive_samples = 0;
};

MethodSpec parse_method(const std::string& spec) {
  if (spec == "improved") return {};
  if (spec.rfind("naive:", 0) == 0) {
    const std::uint64_t s = std::stoull(spec.substr(6));
    if (s == 0) throw std::invalid_argument("naive method needs s >= 1");
    return {true, s};
  }
  throw std::invalid_argument("unknown method: " + spec + " (use improved or naive:<s>)");
}

int cmd_simulate(const EngineFlags& flags, const mcmt::Scenario& scenario,
                 const std::string& method_spec, std::uint32_t reps,
                 double rc_cutoff, bool add_one, const std::string& out_path,
                 const std::string& format) {
  const MethodSpec method = parse_method(method_spec);
  const std::vector<double> p_star = mcmt::draw_pstar(scenario, flags.seed);
  const std::uint64_t default_budget = 1000;

  std::vector<std::vector<mcmt::Call>> rep_calls(reps);
  std::vector<double> rejected_counts(reps, 0), non_rejected_counts(reps, 0),
      undecided_counts(reps, 0);
  std::vector<std::uint8_t> truncated(reps, 0);

  mcmt::parallel_reps(reps, [&](std::size_t rep) {
    const std::uint64_t rep_seed =
        mcmt::kernels::threefry2x64(flags.seed, 0x73696d73ull, rep, 0);
    if (method.naive) {
      const auto counts =
          mcmt::count_exceedances(p_star, rep_seed, method.naive_samples);
      const auto rejected =
          mcmt::naive_method(counts, method.naive_samples,
                             flags.make_procedure(scenario.m),
                             flags.make_threshold(), add_one);
      rep_calls[rep] = mcmt::calls_from_rejections(rejected, scenario.m);
      rejected_counts[rep] = static_cast<double>(rejected.size());
      non_rejected_counts[rep] = static_cast<double>(scenario.m - rejected.size());
    } else {
      mcmt::EngineConfig config = flags.make_config(scenario.m, default_budget);
      config.seed = rep_seed;
      mcmt::SyntheticSource source(p_star, rep_seed);
      const mcmt::Decision decision = mcmt::run(config, source);
      rep_calls[rep] = mcmt::calls_from_decision(decision, scenario.m);
      rejected_counts[rep] = static_cast<double>(decision.rejected.size());
      non_rejected_counts[rep] = static_cast<double>(decision.non_rejected.size());
      undecided_counts[rep] = static_cast<double>(decision.undecided.size());
      truncated[rep] = decision.truncated ? 1 : 0;
    }
  });

  const mcmt::RcSummary rc = mcmt::rc_metric(rep_calls, rc_cutoff);
  const auto mean = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  std::size_t truncated_reps = 0;
  for (std::uint8_t t : truncated) truncated_reps += t;

  std::string text;
  if (format == "structured") {
    nlohmann::ordered_json j;
    j["scenario"] = {{"m", scenario.m},
                     {"null_fraction", scenario.null_fraction},
                     {"null_law", scenario.null_law.to_string()},
                     {"alt_law", scenario.alt_law.to_string()}};
    j["method"] = method_spec;
    j["procedure"] = flags.procedure;
    j["threshold"] = flags.threshold_description();
    j["epsilon"] = flags.epsilon;
    j["budget"] = method.naive ? method.naive_samples
                               : (flags.budget == 0 ? default_budget : flags.budget);
    j["reps"] = reps;
    j["rc_cutoff"] = rc_cutoff;
    j["rc_count"] = rc.rc_count;
    auto arr = nlohmann::ordered_json::array();
    for (std::int32_t i : rc.randomly_classified) arr.push_back(i + 1);
    j["randomly_classified"] = arr;
    j["mean_rejected"] = mean(rejected_counts);
    j["mean_non_rejected"] = mean(non_rejected_counts);
    j["mean_undecided"] = mean(undecided_counts);
    j["truncated_reps"] = truncated_reps;
    j["seed"] = flags.seed;
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "scenario: m=" << scenario.m << " null-frac=" << scenario.null_fraction
       << " null-law=" << scenario.null_law.to_string()
       << " alt-law=" << scenario.alt_law.to_string() << '\n';
    os << "method: " << method_spec << "   procedure: " << flags.procedure
       << "   threshold: " << flags.threshold_description()
       << "   epsilon: " << flags.epsilon << '\n';
    os << "reps: " << reps << "   rc cutoff: " << rc_cutoff << '\n';
    os << "randomly classified: " << rc.rc_count << '\n';
    os << "mean rejected: " << mean(rejected_counts)
       << "   mean non-rejected: " << mean(non_rejected_counts)
       << "   mean undecided: " << mean(undecided_counts) << '\n';
    if (truncated_reps > 0) os << "truncated reps: " << truncated_reps << '\n';
    text = os.str();
  }
  emit(text, out_path);
  return truncated_reps > 0 ? kExitTruncated : kExitOk;
}

int cmd_procedures_list() {
  std::printf("%-12s %-10s %s\n", "name", "kind", "critical values");
  std::printf("%-12s %-10s %s\n", "bonferroni", "either", "alpha/m (constant)");
  std::printf("%-12s %-10s %s\n", "holm", "step-down", "alpha/(m+1-i)");
  std::printf("%-12s %-10s %s\n", "hochberg", "step-up", "alpha/(m+1-i)");
  std::printf("%-12s %-10s %s\n", "rom", "step-up", "recursive sharpening of Hochberg");
  std::printf("%-12s %-10s %s\n", "sidak", "step-down", "1-(1-alpha)^(1/(m+1-i))");
  std::printf("%-12s %-10s %s\n", "shaffer", "step-down", "alpha/t_i, t_i from admissible counts");
  std::printf("%-12s %-10s %s\n", "bh", "step-up", "i*alpha/m");
  std::printf("%-12s %-10s %s\n", "by", "step-up", "i*alpha/(m*sum(1/k))");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo multiple testing with anytime-valid intervals"};
  app.require_subcommand(1);

  EngineFlags flags;
  std::string out_path, format = "table";

  auto* analyze = app.add_subcommand("analyze", "classify a replay indicator matrix");
  std::string input;
  analyze->add_option("--input", input, "indicator-matrix file (rows = iterations)")
      ->required();
  flags.attach(analyze);
  analyze->add_option("--out", out_path, "output path (default stdout)");
  analyze->add_option("--format", format, "table | structured")
      ->check(CLI::IsMember({"table", "structured"}));

  auto* simulate = app.add_subcommand("simulate", "stability experiment on synthetic data");
  mcmt::Scenario scenario;
  std::string null_law = "uniform:0.2,1", alt_law = "uniform:0,0.001";
  std::string method = "improved";
  std::uint32_t reps = 100;
  double rc_cutoff = 0.01;
  bool add_one = false;
  simulate->add_option("--m", scenario.m, "number of hypotheses")->required();
  simulate->add_option("--null-frac", scenario.null_fraction, "fraction of true nulls");
  simulate->add_option("--null-law", null_law, "p* law for true nulls");
  simulate->add_option("--alt-law", alt_law, "p* law for alternatives");
  simulate->add_option("--reps", reps, "repetitions");
  simulate->add_option("--method", method, "improved | naive:<s>");
  simulate->add_option("--rc-cutoff", rc_cutoff, "randomly-classified cutoff");
  simulate->add_flag("--add-one", add_one, "naive estimate (S+1)/(s+1) instead of S/s");
  flags.attach(simulate);
  simulate->add_option("--out", out_path, "output path (default stdout)");
  simulate->add_option("--format", format, "table | structured")
      ->check(CLI::IsMember({"table", "structured"}));

  auto* procedures = app.add_subcommand("procedures", "procedure catalog");
  auto* list = procedures->add_subcommand("list", "list catalog procedures");
  procedures->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*list) return cmd_procedures_list();
    if (*analyze) return cmd_analyze(flags, input, out_path, format);
    scenario.null_law = mcmt::Law::parse(null_law);
    scenario.alt_law = mcmt::Law::parse(alt_law);
    if (reps == 0) throw std::invalid_argument("reps must be >= 1");
    return cmd_simulate(flags, scenario, method, reps, rc_cutoff, add_one,
                        out_path, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

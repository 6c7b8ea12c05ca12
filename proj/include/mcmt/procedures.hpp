#pragma once
// Step-up and step-down multiple-testing procedures over p-value vectors,
// phrased through a threshold function tau_alpha(i) that maps the rank i of
// an ordered p-value to its critical value:
//
//   step-up:   reject i with p_i <= max{ p_(j) : p_(j) <= tau_alpha(j) }   (max of {} = 0)
//   step-down: reject i with p_i <  min{ p_(j) : p_(j) >  tau_alpha(j) }   (min of {} = 1)
//
// The catalog covers Bonferroni, Holm, Hochberg, Rom, Sidak (step-down
// form), Shaffer, Benjamini-Hochberg and Benjamini-Yekutieli. Simes' global
// test and the Hommel procedure are standalone functions; Hommel is not a
// step-up/step-down procedure and deliberately lacks the stability the
// others enjoy.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mcmt {

// Sorted, duplicate-free, 0-based hypothesis indices.
using RejectionSet = std::vector<std::int32_t>;

struct ThresholdFunction {
  std::string name;
  std::uint32_t m = 0;
  // Writes tau_alpha(1..m) into out (out.size() == m). Must be non-decreasing
  // in the rank for fixed alpha and continuous, non-decreasing in alpha for
  // fixed rank.
  std::function<void(double alpha, std::span<double> out)> fill;

  // Convenience single-rank evaluation (rank is 1-based).
  double tau(double alpha, std::uint32_t rank) const;
};

enum class StepKind { StepUp, StepDown };

struct Procedure {
  StepKind kind = StepKind::StepUp;
  ThresholdFunction tau;
  std::string label;

  RejectionSet apply(std::span<const double> p, double alpha) const;
};

RejectionSet step_up(std::span<const double> p, double alpha,
                     const ThresholdFunction& tau);
RejectionSet step_down(std::span<const double> p, double alpha,
                       const ThresholdFunction& tau);

// Simes' test of the global null: rejects the intersection hypothesis iff
// the Benjamini-Hochberg step-up procedure rejects anything.
bool simes_global(std::span<const double> p, double alpha);

// Hommel: largest k with p_(m-k+j) > j*alpha/k for all j = 1..k, then reject
// every p_i <= alpha/k; if no such k exists, reject everything.
RejectionSet hommel(std::span<const double> p, double alpha);

struct CatalogParams {
  // Shaffer: admissible numbers of true null hypotheses, strictly increasing,
  // within [0, m].
  std::vector<std::uint32_t> shaffer_counts;
};

// Named procedures: "bonferroni", "holm", "hochberg", "rom", "sidak",
// "shaffer", "bh", "by". Throws std::invalid_argument for unknown names or
// bad parameters.
Procedure catalog(std::string_view name, std::uint32_t m,
                  const CatalogParams& params = {});
std::vector<std::string> catalog_names();

// Rom (1990) critical values c_1 >= ... is decreasing in the distance from
// the top; returned indexed by rank: out[i-1] = tau_alpha(i) = c_{m+1-i}.
std::vector<double> rom_criticals(std::uint32_t m, double alpha);

}  // namespace mcmt

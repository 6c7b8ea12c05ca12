#include "mcmt/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mcmt {

namespace {

void validate_pvalues(std::span<const double> p) {
  for (double v : p) {
    if (std::isnan(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("p-values must lie in [0,1]");
    }
  }
}

void validate_alpha(double alpha) {
  if (std::isnan(alpha) || alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("threshold alpha must lie in [0,1]");
  }
}

// Order statistics as sorted values; ranks are value-determined, ties are
// harmless because the cutoffs below compare values only.
std::vector<double> sorted_values(std::span<const double> p) {
  std::vector<double> s(p.begin(), p.end());
  std::sort(s.begin(), s.end());
  return s;
}

RejectionSet collect(std::span<const double> p, auto&& pred) {
  RejectionSet out;
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(p.size()); ++i) {
    if (pred(p[i])) out.push_back(i);
  }
  return out;
}

}  // namespace

double ThresholdFunction::tau(double alpha, std::uint32_t rank) const {
  std::vector<double> buf(m);
  fill(alpha, buf);
  return buf.at(rank - 1);
}

RejectionSet step_up(std::span<const double> p, double alpha,
                     const ThresholdFunction& tau) {
  validate_pvalues(p);
  validate_alpha(alpha);
  const std::size_t m = p.size();
  if (m != tau.m) throw std::invalid_argument("threshold function built for a different m");
  if (m == 0) return {};
  const std::vector<double> sorted = sorted_values(p);
  std::vector<double> crit(m);
  tau.fill(alpha, crit);
  // Largest rank whose p-value sits at or below its critical value; its
  // p-value is the cutoff (p is sorted, so the last qualifying rank also
  // carries the largest qualifying value).
  double cutoff = 0.0;
  for (std::size_t j = m; j-- > 0;) {
    if (sorted[j] <= crit[j]) {
      cutoff = sorted[j];
      break;
    }
  }
  return collect(p, [cutoff](double v) { return v <= cutoff; });
}

RejectionSet step_down(std::span<const double> p, double alpha,
                       const ThresholdFunction& tau) {
  validate_pvalues(p);
  validate_alpha(alpha);
  const std::size_t m = p.size();
  if (m != tau.m) throw std::invalid_argument("threshold function built for a different m");
  if (m == 0) return {};
  const std::vector<double> sorted = sorted_values(p);
  std::vector<double> crit(m);
  tau.fill(alpha, crit);
  // Smallest rank whose p-value exceeds its critical value; everything
  // strictly below that p-value is rejected.
  double cutoff = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (sorted[j] > crit[j]) {
      cutoff = sorted[j];
      break;
    }
  }
  return collect(p, [cutoff](double v) { return v < cutoff; });
}

RejectionSet Procedure::apply(std::span<const double> p, double alpha) const {
  return kind == StepKind::StepUp ? step_up(p, alpha, tau)
                                  : step_down(p, alpha, tau);
}

bool simes_global(std::span<const double> p, double alpha) {
  const auto bh = catalog("bh", static_cast<std::uint32_t>(p.size()));
  return !step_up(p, alpha, bh.tau).empty();
}

RejectionSet hommel(std::span<const double> p, double alpha) {
  validate_pvalues(p);
  validate_alpha(alpha);
  const std::size_t m = p.size();
  if (m == 0) return {};
  const std::vector<double> sorted = sorted_values(p);
  std::size_t k_found = 0;
  for (std::size_t k = 1; k <= m; ++k) {
    bool all_above = true;
    for (std::size_t j = 1; j <= k; ++j) {
      // p_(m-k+j) > j*alpha/k for all j = 1..k
      if (!(sorted[m - k + j - 1] > static_cast<double>(j) * alpha / static_cast<double>(k))) {
        all_above = false;
        break;
      }
    }
    if (all_above) k_found = k;
  }
  if (k_found == 0) {
    return collect(p, [](double) { return true; });
  }
  const double cut = alpha / static_cast<double>(k_found);
  return collect(p, [cut](double v) { return v <= cut; });
}

std::vector<double> rom_criticals(std::uint32_t m, double alpha) {
  // c_1 = alpha, and for k >= 2
  //   c_k = [ sum_{j=1}^{k-1} alpha^j - sum_{j=1}^{k-2} C(k,j+1) c_{k-j}^{j+1} ] / k,
  // which makes the step-up familywise error exactly alpha for independent
  // uniforms at every family size. Binomials go through lgamma so large m
  // cannot overflow.
  std::vector<double> c(m + 1, 0.0);
  if (m == 0) return {};
  c[1] = alpha;
  double alpha_pow_sum = 0.0;  // sum_{j=1}^{k-1} alpha^j, updated incrementally
  double alpha_pow = 1.0;
  for (std::uint32_t k = 2; k <= m; ++k) {
    alpha_pow *= alpha;
    alpha_pow_sum += alpha_pow;  // now sum up to alpha^(k-1)
    double correction = 0.0;
    for (std::uint32_t j = 1; j + 1 < k; ++j) {
      const double prev = c[k - j];
      if (prev <= 0.0) continue;
      const double log_term = std::lgamma(k + 1.0) - std::lgamma(j + 2.0) -
                              std::lgamma(k - j + 0.0) +
                              (j + 1.0) * std::log(prev);
      correction += std::exp(log_term);
    }
    c[k] = std::max(0.0, (alpha_pow_sum - correction) / k);
    c[k] = std::min(c[k], c[k - 1]);  // guard against numeric dust at deep ranks
  }
  std::vector<double> by_rank(m);
  for (std::uint32_t i = 1; i <= m; ++i) by_rank[i - 1] = c[m + 1 - i];
  return by_rank;
}

namespace {

Procedure make(StepKind kind, std::string name, std::string label,
               std::uint32_t m,
               std::function<void(double, std::span<double>)> fill) {
  Procedure proc;
  proc.kind = kind;
  proc.tau = ThresholdFunction{std::move(name), m, std::move(fill)};
  proc.label = std::move(label);
  return proc;
}

}  // namespace

Procedure catalog(std::string_view name, std::uint32_t m,
                  const CatalogParams& params) {
  const double md = static_cast<double>(m);
  if (name == "bonferroni") {
    // Constant threshold; step-up and step-down coincide, step-down is used.
    return make(StepKind::StepDown, "bonferroni", "Bonferroni", m,
                [m, md](double alpha, std::span<double> out) {
                  std::fill_n(out.begin(), m, alpha / md);
                });
  }
  if (name == "holm") {
    return make(StepKind::StepDown, "holm", "Holm", m,
                [m, md](double alpha, std::span<double> out) {
                  for (std::uint32_t i = 1; i <= m; ++i)
                    out[i - 1] = alpha / (md + 1.0 - i);
                });
  }
  if (name == "hochberg") {
    return make(StepKind::StepUp, "hochberg", "Hochberg", m,
                [m, md](double alpha, std::span<double> out) {
                  for (std::uint32_t i = 1; i <= m; ++i)
                    out[i - 1] = alpha / (md + 1.0 - i);
                });
  }
  if (name == "rom") {
    return make(StepKind::StepUp, "rom", "Rom", m,
                [m](double alpha, std::span<double> out) {
                  const auto crit = rom_criticals(m, alpha);
                  std::copy(crit.begin(), crit.end(), out.begin());
                });
  }
  if (name == "sidak") {
    // Sidak-type step-down (Holm-Sidak in some references).
    return make(StepKind::StepDown, "sidak", "Sidak (step-down)", m,
                [m, md](double alpha, std::span<double> out) {
                  for (std::uint32_t i = 1; i <= m; ++i)
                    out[i - 1] = 1.0 - std::pow(1.0 - alpha, 1.0 / (md + 1.0 - i));
                });
  }
  if (name == "bh") {
    return make(StepKind::StepUp, "bh", "Benjamini-Hochberg", m,
                [m, md](double alpha, std::span<double> out) {
                  for (std::uint32_t i = 1; i <= m; ++i)
                    out[i - 1] = static_cast<double>(i) * alpha / md;
                });
  }
  if (name == "by") {
    // Benjamini-Hochberg at the harmonically corrected threshold.
    double harmonic = 0.0;
    for (std::uint32_t i = 1; i <= m; ++i) harmonic += 1.0 / i;
    return make(StepKind::StepUp, "by", "Benjamini-Yekutieli", m,
                [m, md, harmonic](double alpha, std::span<double> out) {
                  for (std::uint32_t i = 1; i <= m; ++i)
                    out[i - 1] = static_cast<double>(i) * alpha / (md * harmonic);
                });
  }
  if (name == "shaffer") {
    const auto& a = params.shaffer_counts;
    if (a.empty()) throw std::invalid_argument("shaffer: admissible-count sequence required");
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a[j] > m || (j > 0 && a[j] <= a[j - 1])) {
        throw std::invalid_argument("shaffer: counts must be strictly increasing within [0, m]");
      }
    }
    // t_i = max admissible count <= m - i + 1; t_i = 0 means no true null can
    // remain, so the critical value saturates at 1.
    std::vector<std::uint32_t> t(m);
    for (std::uint32_t i = 1; i <= m; ++i) {
      std::uint32_t ti = 0;
      for (std::uint32_t aj : a) {
        if (aj <= m - i + 1) ti = aj;
      }
      t[i - 1] = ti;
    }
    return make(StepKind::StepDown, "shaffer", "Shaffer", m,
                [m, t](double alpha, std::span<double> out) {
                  for (std::uint32_t i = 0; i < m; ++i)
                    out[i] = t[i] == 0 ? 1.0 : std::min(1.0, alpha / t[i]);
                });
  }
  throw std::invalid_argument("unknown procedure: " + std::string(name));
}

std::vector<std::string> catalog_names() {
  return {"bonferroni", "holm", "hochberg", "rom", "sidak", "shaffer", "bh", "by"};
}

}  // namespace mcmt

#pragma once
// Shared helpers for the unit and acceptance suites.

#include <algorithm>
#include <random>
#include <vector>

#include "mcmt/procedures.hpp"

namespace testutil {

// Every catalog procedure; Shaffer gets a random admissible-count sequence.
inline std::vector<mcmt::Procedure> full_catalog(std::uint32_t m,
                                                 std::mt19937_64& rng) {
  std::vector<mcmt::Procedure> procs;
  for (const auto& name : mcmt::catalog_names()) {
    mcmt::CatalogParams params;
    if (name == "shaffer") {
      std::vector<std::uint32_t> counts;
      for (std::uint32_t a = 0; a <= m; ++a) {
        if (rng() % 2 == 0) counts.push_back(a);
      }
      if (counts.empty()) counts.push_back(m);
      params.shaffer_counts = counts;
    }
    procs.push_back(mcmt::catalog(name, m, params));
  }
  return procs;
}

inline std::vector<double> random_pvector(std::uint32_t m, std::mt19937_64& rng) {
  std::vector<double> p(m);
  std::uniform_real_distribution<> unif(0.0, 1.0);
  for (auto& v : p) v = unif(rng);
  if (m > 0 && rng() % 8 == 0) p[rng() % m] = 0.0;
  if (m > 0 && rng() % 8 == 0) p[rng() % m] = 1.0;
  return p;
}

inline std::vector<double> continuous_pvector(std::uint32_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<> unif(1e-9, 1.0 - 1e-9);
  std::vector<double> p(m);
  for (auto& v : p) v = unif(rng);
  return p;
}

// 1-based ranks of p in ascending order (continuous draws: no ties).
inline std::vector<std::uint32_t> ranks_of(const std::vector<double>& p) {
  std::vector<std::uint32_t> idx(p.size());
  for (std::uint32_t i = 0; i < p.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](std::uint32_t a, std::uint32_t b) { return p[a] < p[b]; });
  std::vector<std::uint32_t> rank(p.size());
  for (std::uint32_t r = 0; r < p.size(); ++r) rank[idx[r]] = r + 1;
  return rank;
}

}  // namespace testutil

#pragma once

#include <cstdint>
#include <vector>

#include "fedkrr/features.hpp"
#include "fedkrr/regret.hpp"

namespace fedkrr {

struct RobustnessRow {
  double q = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  double delta_L = 0.0;
  double bound_factor = 0.0;  // eps * sqrt(total_samples * q)
  double ratio = 0.0;         // delta_L / bound_factor, 0/0 := 0
};

struct RobustnessReport {
  std::vector<RobustnessRow> rows;
  double max_ratio = 0.0;
  double median_ratio = 0.0;  // median of the strictly positive ratios
};

// For every (q, eps, seed): attack the training pairs, recompute the local
// optima anchor on the attacked data, rerun the backward sweep at the SAME
// weights w, and compare optimal training costs via the value function.
// Weights stay fixed because the comparison is between the two costs of one
// functional, not between two re-weighted problems.
RobustnessReport robustness_sweep(const Federation& fed, const Vec& w, const RegretConfig& cfg,
                                  const RidgeConfig& ridge, const std::vector<double>& q_grid,
                                  const std::vector<double>& eps_grid,
                                  const std::vector<std::uint64_t>& seeds);

}  // namespace fedkrr

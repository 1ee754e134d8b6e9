#include "fedkrr/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "fedkrr/sharing.hpp"

namespace fedkrr {

namespace {

double optimal_cost(const Federation& fed, const Vec& w, const RegretConfig& cfg,
                    const RidgeConfig& ridge) {
  const Vec anchor = local_optima(fed, ridge).stacked;
  const RiccatiTape tape = backward_riccati(terminal_conditions(fed, w), cfg, anchor);
  return cost_via_value_function(tape, anchor);
}

}  // namespace

RobustnessReport robustness_sweep(const Federation& fed, const Vec& w, const RegretConfig& cfg,
                                  const RidgeConfig& ridge, const std::vector<double>& q_grid,
                                  const std::vector<double>& eps_grid,
                                  const std::vector<std::uint64_t>& seeds) {
  require(!q_grid.empty() && !eps_grid.empty() && !seeds.empty(),
          "robustness_sweep: empty grid");
  const double nbar = double(fed.total_samples());
  const double clean = optimal_cost(fed, w, cfg, ridge);

  RobustnessReport report;
  for (double q : q_grid) {
    for (double eps : eps_grid) {
      for (std::uint64_t seed : seeds) {
        RobustnessRow row;
        row.q = q;
        row.eps = eps;
        row.seed = seed;
        const Federation attacked = perturb(fed, AttackSpec{q, eps, seed});
        // floor(q * nbar) == 0 or eps == 0 leaves the data bit-identical.
        const double dirty = optimal_cost(attacked, w, cfg, ridge);
        row.delta_L = std::abs(clean - dirty);
        row.bound_factor = eps * std::sqrt(nbar * q);
        row.ratio = (row.bound_factor > 0.0) ? row.delta_L / row.bound_factor : 0.0;
        report.rows.push_back(row);
      }
    }
  }

  std::vector<double> positive;
  for (const auto& r : report.rows) {
    report.max_ratio = std::max(report.max_ratio, r.ratio);
    if (r.ratio > 0.0) positive.push_back(r.ratio);
  }
  if (!positive.empty()) {
    std::sort(positive.begin(), positive.end());
    const size_t n = positive.size();
    report.median_ratio =
        (n % 2 == 1) ? positive[n / 2] : 0.5 * (positive[n / 2 - 1] + positive[n / 2]);
  }
  return report;
}

}  // namespace fedkrr

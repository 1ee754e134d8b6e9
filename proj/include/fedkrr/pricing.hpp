#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fedkrr/features.hpp"
#include "fedkrr/montecarlo.hpp"

namespace fedkrr {

// Regression optimizers pluggable into the backward induction. Dataset
// indices are 0-based; index 0 is the main dataset.
struct LoSpec {
  int dataset = 0;
};
struct MloSpec {};
struct JoSpec {};
struct JsoSpec {
  std::vector<int> subset;
};
struct RoSpec {
  double eta = 100.0;
  double lambda = 2.0;
  double beta = 1.0;
  int horizon = 1;
};
struct AroSpec {
  double eta = 100.0;
  double lambda = 2.0;
  double beta = 1.0;
  int horizon = 1;
};

using OptimizerKind = std::variant<LoSpec, MloSpec, JoSpec, JsoSpec, RoSpec, AroSpec>;

std::string optimizer_name(const OptimizerKind& kind);

struct RlsmOptions {
  bool itm_only = false;  // restrict regressions to in-the-money paths
};

struct PricingResult {
  double price = 0.0;
  std::vector<double> per_run_prices;       // filled by multi-run drivers
  std::vector<long> stopping_histogram;     // eval-path exercise counts per date
  std::string optimizer;
  std::vector<Vec> thetas;                  // continuation parameters, dates 1..M-1
};

struct EvalStats {
  double RP = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double sigma_hat = 0.0;
  int n_runs = 0;
};

// Backward induction m = M-1..1. At each date: regress each dataset's current
// realized discounted payoff on the features of its date-m prices (scaled by
// that dataset's X0); the optimizer merges the per-dataset problems into one
// parameter theta_m; every dataset then updates its stopping time with the
// shared theta_m (exercise iff Z_m >= predicted continuation and Z_m > 0).
// The frozen theta's are then realized on the independent eval paths and the
// price is max(Z_0, mean realized payoff).
PricingResult rlsm_price(const std::vector<PathSet>& train, const PathSet& eval_paths,
                         double strike, double rate, const FeatureMap& map,
                         const RidgeConfig& cfg, const OptimizerKind& optimizer,
                         const RlsmOptions& opts = {});

std::map<std::string, double> relative_performance(
    const std::map<std::string, double>& prices, double base_price);

// RP = mean of the per-run relative prices, sigma_hat = their sample standard
// deviation, interval = RP +- 1.959964 sigma_hat / sqrt(n_runs).
EvalStats confidence_interval(const std::vector<double>& per_run_rps);

}  // namespace fedkrr

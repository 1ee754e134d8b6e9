#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedkrr/core.hpp"

namespace fedkrr {

// Asset-price model. hurst = 0.5 selects the standard variance dynamics; any
// smaller value selects the rough (Volterra) variance dynamics.
struct ModelParams {
  double rate = 0.0;
  double dividend = 0.0;
  double mean_reversion = 0.0;
  double v_inf = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double X0 = 100.0;
  double v0 = 0.0;
  double hurst = 0.5;
};

// Simulated paths on the exercise grid. prices[a] is n_paths x (M+1) for
// asset a; column 0 is X0 everywhere. variances has the same layout and is
// filled only on request.
struct PathSet {
  std::vector<Mat> prices;
  std::vector<Mat> variances;
  Vec exercise_times;
  std::uint64_t seed = 0;
  ModelParams model;
  double T_mat = 0.0;
  int n_paths() const { return prices.empty() ? 0 : int(prices[0].rows()); }
  int n_dates() const { return prices.empty() ? 0 : int(prices[0].cols()) - 1; }
  int n_assets() const { return int(prices.size()); }
};

// Discounted payoffs, n_paths x (M+1).
struct PayoffSeries {
  Mat Z;
};

// Full-truncation Euler with `substeps` fine steps per exercise interval;
// assets are i.i.d. copies, each with its own variance process. Increments are
// drawn from counter streams keyed by (seed, path, asset, fine step), so path
// j is the same no matter how many paths are requested.
PathSet simulate_heston(const ModelParams& params, int d_assets, int n_paths, int M,
                        double T_mat, int substeps, std::uint64_t seed,
                        bool keep_variance = false);

// Volterra Euler (left-point rule) for the rough variance with kernel
// u^{H-1/2}/Gamma(H+1/2) on a uniform fine grid of M*ceil(fine_steps/M) steps.
// hurst = 0.5 routes to simulate_heston with the matching discretization.
PathSet simulate_rough_heston(const ModelParams& params, int d_assets, int n_paths, int M,
                              double T_mat, int fine_steps, std::uint64_t seed,
                              bool keep_variance = false);

// Z(j, m) = e^{-rate * t_m} * (max over assets of price - strike)_+.
PayoffSeries max_call_payoff(const PathSet& paths, double strike, double rate);

// Debug dump: columns (path_id, t, asset, price).
void dump_paths_csv(const PathSet& paths, const std::string& file);

}  // namespace fedkrr

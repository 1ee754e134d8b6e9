#include "fedkrr/montecarlo.hpp"

#include <cmath>
#include <fstream>

#include "fedkrr/csv.hpp"
#include "fedkrr/rng.hpp"

namespace fedkrr {

namespace {

void check_params(const ModelParams& m) {
  require(m.rho >= -1.0 && m.rho <= 1.0, "model: rho must lie in [-1,1]");
  require(m.v0 >= 0.0 && m.v_inf >= 0.0, "model: variance levels must be >= 0");
  require(m.X0 > 0.0, "model: X0 must be > 0");
  require(m.hurst > 0.0 && m.hurst <= 0.5, "model: hurst must lie in (0, 1/2]");
}

PathSet make_set(const ModelParams& params, int d_assets, int n_paths, int M, double T_mat,
                 std::uint64_t seed, bool keep_variance) {
  PathSet out;
  out.model = params;
  out.seed = seed;
  out.T_mat = T_mat;
  out.exercise_times = Vec::LinSpaced(M + 1, 0.0, T_mat);
  out.prices.assign(d_assets, Mat(n_paths, M + 1));
  if (keep_variance) out.variances.assign(d_assets, Mat(n_paths, M + 1));
  return out;
}

}  // namespace

PathSet simulate_heston(const ModelParams& params, int d_assets, int n_paths, int M,
                        double T_mat, int substeps, std::uint64_t seed, bool keep_variance) {
  check_params(params);
  require(params.hurst == 0.5, "simulate_heston: hurst must be 1/2");
  require(d_assets >= 1 && n_paths >= 1 && M >= 1 && substeps >= 1 && T_mat > 0.0,
          "simulate_heston: invalid dimensions");
  PathSet out = make_set(params, d_assets, n_paths, M, T_mat, seed, keep_variance);
  const double dt = T_mat / double(M * substeps);
  const double sdt = std::sqrt(dt);
  const double drift = params.rate - params.dividend;
  const double rho_c = std::sqrt(1.0 - params.rho * params.rho);
  for (int a = 0; a < d_assets; ++a) {
    for (int j = 0; j < n_paths; ++j) {
      double logx = std::log(params.X0);
      double v = params.v0;
      out.prices[a](j, 0) = params.X0;
      if (keep_variance) out.variances[a](j, 0) = v;
      int step = 0;
      for (int m = 1; m <= M; ++m) {
        for (int s = 0; s < substeps; ++s, ++step) {
          const double z1 = rng::counter_normal(
              rng::key({seed, std::uint64_t(j), std::uint64_t(a), std::uint64_t(step), 0}));
          const double z2 = rng::counter_normal(
              rng::key({seed, std::uint64_t(j), std::uint64_t(a), std::uint64_t(step), 1}));
          const double vp = std::max(v, 0.0);
          const double sv = std::sqrt(vp);
          logx += (drift - 0.5 * vp) * dt + sv * sdt * z1;
          v += -params.mean_reversion * (vp - params.v_inf) * dt +
               params.sigma * sv * sdt * (params.rho * z1 + rho_c * z2);
        }
        out.prices[a](j, m) = std::exp(logx);
        // Full truncation: the raw state may dip below zero between steps;
        // reported variance is the truncated value actually driving the SDE.
        if (keep_variance) out.variances[a](j, m) = std::max(v, 0.0);
      }
    }
  }
  return out;
}

PathSet simulate_rough_heston(const ModelParams& params, int d_assets, int n_paths, int M,
                              double T_mat, int fine_steps, std::uint64_t seed,
                              bool keep_variance) {
  check_params(params);
  require(d_assets >= 1 && n_paths >= 1 && M >= 1 && fine_steps >= M && T_mat > 0.0,
          "simulate_rough_heston: invalid dimensions");
  const int substeps = (fine_steps + M - 1) / M;
  if (params.hurst == 0.5)
    return simulate_heston(params, d_assets, n_paths, M, T_mat, substeps, seed, keep_variance);

  const int F = M * substeps;
  const double dt = T_mat / double(F);
  const double sdt = std::sqrt(dt);
  const double drift = params.rate - params.dividend;
  const double rho_c = std::sqrt(1.0 - params.rho * params.rho);

  // K(m dt) for lags m = 1..F, shared across paths.
  Vec kernel(F + 1);
  kernel(0) = 0.0;
  const double gamma_h = std::tgamma(params.hurst + 0.5);
  for (int m = 1; m <= F; ++m)
    kernel(m) = std::pow(double(m) * dt, params.hurst - 0.5) / gamma_h;

  PathSet out = make_set(params, d_assets, n_paths, M, T_mat, seed, keep_variance);
  Vec shock(F);  // -k(v^+ - v_inf) dt + sigma sqrt(v^+) dB, one entry per past step
  for (int a = 0; a < d_assets; ++a) {
    for (int j = 0; j < n_paths; ++j) {
      double logx = std::log(params.X0);
      out.prices[a](j, 0) = params.X0;
      if (keep_variance) out.variances[a](j, 0) = params.v0;
      double v = params.v0;
      for (int step = 0; step < F; ++step) {
        const double z1 = rng::counter_normal(
            rng::key({seed, std::uint64_t(j), std::uint64_t(a), std::uint64_t(step), 0}));
        const double z2 = rng::counter_normal(
            rng::key({seed, std::uint64_t(j), std::uint64_t(a), std::uint64_t(step), 1}));
        const double vp = std::max(v, 0.0);
        const double sv = std::sqrt(vp);
        logx += (drift - 0.5 * vp) * dt + sv * sdt * z1;
        shock(step) = -params.mean_reversion * (vp - params.v_inf) * dt +
                      params.sigma * sv * sdt * (params.rho * z1 + rho_c * z2);
        // v at t_{step+1}: convolve the whole history with the kernel.
        double acc = params.v0;
        for (int u = 0; u <= step; ++u) acc += kernel(step + 1 - u) * shock(u);
        v = acc;
        if ((step + 1) % substeps == 0) {
          const int m = (step + 1) / substeps;
          out.prices[a](j, m) = std::exp(logx);
          if (keep_variance) out.variances[a](j, m) = std::max(v, 0.0);
        }
      }
    }
  }
  return out;
}

PayoffSeries max_call_payoff(const PathSet& paths, double strike, double rate) {
  const int n = paths.n_paths();
  const int M = paths.n_dates();
  PayoffSeries out;
  out.Z.resize(n, M + 1);
  for (int m = 0; m <= M; ++m) {
    const double disc = std::exp(-rate * paths.exercise_times(m));
    for (int j = 0; j < n; ++j) {
      double best = paths.prices[0](j, m);
      for (int a = 1; a < paths.n_assets(); ++a) best = std::max(best, paths.prices[a](j, m));
      out.Z(j, m) = disc * std::max(best - strike, 0.0);
    }
  }
  return out;
}

void dump_paths_csv(const PathSet& paths, const std::string& file) {
  std::ofstream os(file);
  require(bool(os), "dump_paths_csv: cannot open " + file);
  os << "path_id,t,asset,price\n";
  for (int j = 0; j < paths.n_paths(); ++j)
    for (int m = 0; m <= paths.n_dates(); ++m)
      for (int a = 0; a < paths.n_assets(); ++a)
        os << j << "," << csv::format(paths.exercise_times(m)) << "," << a << ","
           << csv::format(paths.prices[a](j, m)) << "\n";
}

}  // namespace fedkrr

#include "fedkrr/pricing.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "fedkrr/accelerated.hpp"
#include "fedkrr/regret.hpp"
#include "fedkrr/sharing.hpp"
#include "fedkrr/spectral.hpp"

namespace fedkrr {

std::string optimizer_name(const OptimizerKind& kind) {
  std::ostringstream os;
  if (auto* lo = std::get_if<LoSpec>(&kind)) {
    os << "lo-" << lo->dataset + 1;
  } else if (std::get_if<MloSpec>(&kind)) {
    os << "mlo";
  } else if (std::get_if<JoSpec>(&kind)) {
    os << "jo";
  } else if (auto* jso = std::get_if<JsoSpec>(&kind)) {
    os << "jso-";
    for (size_t i = 0; i < jso->subset.size(); ++i)
      os << (i ? "+" : "") << jso->subset[i] + 1;
  } else if (auto* ro = std::get_if<RoSpec>(&kind)) {
    os << "ro-" << ro->eta;
  } else if (auto* aro = std::get_if<AroSpec>(&kind)) {
    os << "aro-" << aro->eta;
  }
  return os.str();
}

namespace {

// Date-m inputs of a path set: column a = prices of asset a, scaled by X0.
Mat date_inputs(const PathSet& ps, int m) {
  Mat X(ps.n_paths(), ps.n_assets());
  for (int a = 0; a < ps.n_assets(); ++a) X.col(a) = ps.prices[a].col(m) / ps.model.X0;
  return X;
}

// Rows of (U, v) restricted to in-the-money paths; falls back to all rows
// when no path is in the money (the regression must stay well-posed).
std::pair<Mat, Vec> itm_rows(const Mat& U, const Vec& v, const Vec& payoff) {
  const Eigen::Index n = U.rows();
  Eigen::Index cnt = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    if (payoff(j) > 0.0) ++cnt;
  if (cnt == 0) return {U, v};
  Mat Uf(cnt, U.cols());
  Vec vf(cnt);
  Eigen::Index at = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (payoff(j) > 0.0) {
      Uf.row(at) = U.row(j);
      vf(at) = v(j);
      ++at;
    }
  }
  return {Uf, vf};
}

Vec pooled_ridge(const std::vector<Mat>& U, const std::vector<Vec>& v,
                 const std::vector<int>& which, const RidgeConfig& cfg) {
  Eigen::Index rows = 0;
  for (int i : which) rows += U[i].rows();
  Mat Up(rows, U[which[0]].cols());
  Vec vp(rows);
  Eigen::Index at = 0;
  for (int i : which) {
    Up.middleRows(at, U[i].rows()) = U[i];
    vp.segment(at, v[i].size()) = v[i];
    at += U[i].rows();
  }
  return ridge_solve(Up, vp, cfg).theta;
}

// Builds a federation out of the per-dataset date-m regression problems.
Federation regression_federation(const std::vector<Mat>& U, const std::vector<Vec>& v,
                                 const FeatureMap& map) {
  Federation fed;
  fed.feature_map = map;
  fed.datasets.resize(U.size());
  for (size_t i = 0; i < U.size(); ++i) {
    fed.datasets[i].U = U[i];
    fed.datasets[i].Y = v[i];
    fed.datasets[i].id = int(i);
  }
  return fed;
}

struct CombineCtx {
  const FeatureMap& map;
  const RidgeConfig& cfg;
};

Vec combine(const OptimizerKind& kind, const std::vector<Mat>& U, const std::vector<Vec>& v,
            const CombineCtx& ctx) {
  const int n_sets = int(U.size());
  if (auto* lo = std::get_if<LoSpec>(&kind)) {
    require(lo->dataset >= 0 && lo->dataset < n_sets, "rlsm: LO dataset index out of range");
    return ridge_solve(U[lo->dataset], v[lo->dataset], ctx.cfg).theta;
  }
  if (std::get_if<MloSpec>(&kind)) {
    Vec acc = Vec::Zero(U[0].cols());
    for (int i = 0; i < n_sets; ++i) acc += ridge_solve(U[i], v[i], ctx.cfg).theta;
    return acc / double(n_sets);
  }
  if (std::get_if<JoSpec>(&kind)) {
    std::vector<int> all(n_sets);
    std::iota(all.begin(), all.end(), 0);
    return pooled_ridge(U, v, all, ctx.cfg);
  }
  if (auto* jso = std::get_if<JsoSpec>(&kind)) {
    require(!jso->subset.empty(), "rlsm: JSO subset empty");
    for (int i : jso->subset)
      require(i >= 0 && i < n_sets, "rlsm: JSO subset index out of range");
    return pooled_ridge(U, v, jso->subset, ctx.cfg);
  }
  const Federation fed = regression_federation(U, v, ctx.map);
  const LocalOptima optima = local_optima(fed, ctx.cfg);
  if (auto* ro = std::get_if<RoSpec>(&kind)) {
    const Vec w = posterior_weights(scores(fed, optima), ro->eta);
    const RegretConfig rc{ro->lambda, ro->beta, ro->horizon};
    const SpectralTape tape = spectral_backward(terminal_conditions(fed, w), rc, optima.stacked);
    const Trajectory traj = spectral_rollout(tape);
    const Vec last = traj.states.col(rc.horizon);
    const int p = int(U[0].cols());
    Vec theta = Vec::Zero(p);
    for (int i = 0; i < n_sets; ++i) theta += w(i) * last.segment(i * p, p);
    return theta;
  }
  const auto* aro = std::get_if<AroSpec>(&kind);
  require(aro != nullptr, "rlsm: unknown optimizer");
  const Vec w = posterior_weights(scores(fed, optima), aro->eta);
  const RegretConfig rc{aro->lambda, aro->beta, aro->horizon};
  const FastSymmetricTape tape =
      fast_sym_backward(sym_terminal(fed), rc, n_sets, optima.mean_theta);
  const Trajectory traj = fast_accelerated_rollout(tape, optima.stacked);
  const Vec last = traj.states.col(rc.horizon);
  const int p = int(U[0].cols());
  Vec theta = Vec::Zero(p);
  for (int i = 0; i < n_sets; ++i) theta += w(i) * last.segment(i * p, p);
  return theta;
}

}  // namespace

PricingResult rlsm_price(const std::vector<PathSet>& train, const PathSet& eval_paths,
                         double strike, double rate, const FeatureMap& map,
                         const RidgeConfig& cfg, const OptimizerKind& optimizer,
                         const RlsmOptions& opts) {
  require(!train.empty(), "rlsm_price: no training path sets");
  const int M = eval_paths.n_dates();
  const int d = eval_paths.n_assets();
  for (const auto& ps : train) {
    require(ps.n_dates() == M, "rlsm_price: exercise-date counts differ");
    require(ps.n_assets() == d, "rlsm_price: asset counts differ");
    require(ps.T_mat == eval_paths.T_mat, "rlsm_price: maturities differ");
  }
  require(map.input_dim == d, "rlsm_price: feature map input dim mismatch");

  const int n_sets = int(train.size());
  std::vector<PayoffSeries> Z(n_sets);
  for (int i = 0; i < n_sets; ++i) Z[i] = max_call_payoff(train[i], strike, rate);
  const PayoffSeries Ze = max_call_payoff(eval_paths, strike, rate);

  // Realized discounted payoff at the current stopping time, per train path.
  std::vector<Vec> value(n_sets);
  for (int i = 0; i < n_sets; ++i) value[i] = Z[i].Z.col(M);

  PricingResult result;
  result.optimizer = optimizer_name(optimizer);
  result.thetas.assign(M, Vec());
  const CombineCtx ctx{map, cfg};

  for (int m = M - 1; m >= 1; --m) {
    std::vector<Mat> U(n_sets);
    std::vector<Vec> targets(n_sets);
    for (int i = 0; i < n_sets; ++i) {
      U[i] = featurize(map, date_inputs(train[i], m));
      targets[i] = value[i];
      if (opts.itm_only) {
        auto [Uf, vf] = itm_rows(U[i], value[i], Z[i].Z.col(m));
        U[i] = std::move(Uf);
        targets[i] = std::move(vf);
      }
    }
    const Vec theta = combine(optimizer, U, targets, ctx);
    result.thetas[m] = theta;
    for (int i = 0; i < n_sets; ++i) {
      // Features were possibly filtered above; predictions need all rows.
      const Mat Ui = opts.itm_only ? featurize(map, date_inputs(train[i], m)) : U[i];
      const Vec pred = Ui * theta;
      for (int j = 0; j < train[i].n_paths(); ++j) {
        const double z = Z[i].Z(j, m);
        if (z > 0.0 && z >= pred(j)) value[i](j) = z;
      }
    }
  }

  // Realize the frozen rules on the independent eval paths.
  const int ne = eval_paths.n_paths();
  Vec realized = Ze.Z.col(M);
  std::vector<char> stopped(ne, 0);
  result.stopping_histogram.assign(M + 1, 0);
  for (int m = 1; m <= M - 1; ++m) {
    const Mat Phi = featurize(map, date_inputs(eval_paths, m));
    const Vec pred = Phi * result.thetas[m];
    for (int j = 0; j < ne; ++j) {
      if (stopped[j]) continue;
      const double z = Ze.Z(j, m);
      if (z > 0.0 && z >= pred(j)) {
        stopped[j] = 1;
        realized(j) = z;
        ++result.stopping_histogram[m];
      }
    }
  }
  for (int j = 0; j < ne; ++j)
    if (!stopped[j]) ++result.stopping_histogram[M];

  result.price = std::max(Ze.Z(0, 0), realized.mean());
  result.per_run_prices = {result.price};
  return result;
}

std::map<std::string, double> relative_performance(
    const std::map<std::string, double>& prices, double base_price) {
  require(base_price > 0.0, "relative_performance: base price must be > 0");
  std::map<std::string, double> rp;
  for (const auto& [name, price] : prices) rp[name] = price / base_price;
  return rp;
}

EvalStats confidence_interval(const std::vector<double>& per_run_rps) {
  const int n = int(per_run_rps.size());
  require(n >= 2, "confidence_interval: need at least two runs");
  EvalStats stats;
  stats.n_runs = n;
  double mean = 0.0;
  for (double x : per_run_rps) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : per_run_rps) ss += (x - mean) * (x - mean);
  stats.RP = mean;
  stats.sigma_hat = std::sqrt(ss / double(n - 1));
  const double half = 1.959964 * stats.sigma_hat / std::sqrt(double(n));
  stats.ci_low = mean - half;
  stats.ci_high = mean + half;
  return stats;
}

}  // namespace fedkrr

#include "fedkrr/sharing.hpp"

#include <cmath>
#include <limits>

namespace fedkrr {

LocalOptima local_optima(const Federation& fed, const RidgeConfig& cfg) {
  return local_optima(fed, std::vector<double>(fed.n_datasets(), cfg.kappa));
}

LocalOptima local_optima(const Federation& fed, const std::vector<double>& kappas) {
  require(fed.n_datasets() >= 1, "local_optima: empty federation");
  require(int(kappas.size()) == fed.n_datasets(),
          "local_optima: one kappa per dataset required");
  const int N = fed.n_datasets();
  const int p = fed.p();
  LocalOptima out;
  out.thetas.resize(N);
  out.stacked.resize(N * p);
  out.mean_theta = Vec::Zero(p);
  for (int i = 0; i < N; ++i) {
    out.thetas[i] =
        ridge_solve(fed.datasets[i].U, fed.datasets[i].Y, RidgeConfig{kappas[i]}).theta;
    out.stacked.segment(i * p, p) = out.thetas[i];
    out.mean_theta += out.thetas[i];
  }
  out.mean_theta /= double(N);
  out.stacked_mean = out.mean_theta.replicate(N, 1);
  return out;
}

Vec scores(const Federation& fed, const LocalOptima& optima) {
  const Dataset& main = fed.datasets[0];
  const int N = fed.n_datasets();
  Vec s(N);
  for (int i = 0; i < N; ++i)
    s(i) = sse(optima.thetas[i], main.U, main.Y) / double(main.n());
  return s;
}

namespace {
// Shared clamp c_i = [s_1 + eta - s_i]_+; the i=1 term is always eta > 0.
Vec clamps(const Vec& s, double eta) {
  return (Vec::Constant(s.size(), s(0) + eta) - s).cwiseMax(0.0);
}
}  // namespace

Vec prior_weights(const Vec& s, double eta) {
  require(eta > 0.0, "prior_weights: eta must be > 0");
  Vec c = clamps(s, eta);
  return c / c.sum();
}

Vec posterior_weights(const Vec& s, double eta) {
  require(eta > 0.0, "posterior_weights: eta must be > 0");
  Vec c = clamps(s, eta);
  // Shift by the minimum score so every exponent is <= 0; the ratio is
  // invariant and overflow-free for small eta.
  const double shift = s.minCoeff();
  Vec w = c.array() * ((shift - s.array()) / eta).exp();
  return w / w.sum();
}

double kl_objective(const Vec& w, const Vec& s, double eta) {
  require(w.size() == s.size(), "kl_objective: size mismatch");
  Vec c = clamps(s, eta);
  const double C = c.sum();
  double value = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) == 0.0) continue;  // 0 log 0 := 0
    if (c(i) == 0.0) return std::numeric_limits<double>::infinity();
    value += w(i) * s(i) + eta * w(i) * std::log(w(i) * C / c(i));
  }
  return value;
}

SharingResult share(const Federation& fed, const LocalOptima& optima, double eta) {
  SharingResult res;
  res.scores = scores(fed, optima);
  res.prior = prior_weights(res.scores, eta);
  res.posterior = posterior_weights(res.scores, eta);
  res.eta = eta;
  return res;
}

}  // namespace fedkrr

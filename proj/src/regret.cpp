#include "fedkrr/regret.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>

#include "fedkrr/features.hpp"

namespace fedkrr {

Mat TerminalConditions::dense_P() const {
  Mat P(N * p, N * p);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) P.block(k * p, l * p, p, p) = w(k) * w(l) * G;
  return P;
}

Vec TerminalConditions::dense_S() const {
  Vec S(N * p);
  for (int k = 0; k < N; ++k) S.segment(k * p, p) = -w(k) * g;
  return S;
}

namespace {

// theta^w = sum_k w_k theta_k, one block per dataset.
Vec mix(const Vec& theta_stacked, const Vec& w, int p) {
  const int N = int(w.size());
  Vec m = Vec::Zero(p);
  for (int k = 0; k < N; ++k) m += w(k) * theta_stacked.segment(k * p, p);
  return m;
}

}  // namespace

double loss(const Vec& theta_stacked, const Vec& w, const Federation& fed) {
  const int N = fed.n_datasets();
  const int p = fed.p();
  require(int(w.size()) == N, "loss: weight count mismatch");
  require(theta_stacked.size() == Eigen::Index(N) * p, "loss: stacked size mismatch");
  const Vec tw = mix(theta_stacked, w, p);
  double l = 0.0;
  for (int i = 0; i < N; ++i)
    l += w(i) * (fed.datasets[i].U * tw - fed.datasets[i].Y).squaredNorm();
  return l;
}

double ideal_loss(const Vec& w, const Federation& fed) {
  const int N = fed.n_datasets();
  const int p = fed.p();
  require(int(w.size()) == N, "ideal_loss: weight count mismatch");
  Eigen::Index rows = 0;
  for (const auto& d : fed.datasets) rows += d.U.rows();
  Mat A(rows, p);
  Vec b(rows);
  Eigen::Index at = 0;
  for (int i = 0; i < N; ++i) {
    const double sw = std::sqrt(std::max(w(i), 0.0));
    A.middleRows(at, fed.datasets[i].n()) = sw * fed.datasets[i].U;
    b.segment(at, fed.datasets[i].n()) = sw * fed.datasets[i].Y;
    at += fed.datasets[i].n();
  }
  Vec theta = A.completeOrthogonalDecomposition().solve(b);
  return (A * theta - b).squaredNorm();
}

double energy(const Trajectory& traj, const RegretConfig& cfg, const Vec& w,
              const Federation& fed, const Vec& anchor) {
  const int T = traj.horizon();
  require(traj.states.cols() == T + 1, "energy: states/controls length mismatch");
  double e = 0.0;
  for (int t = 0; t < T; ++t) {
    e += cfg.lambda * (traj.states.col(t + 1) - anchor).squaredNorm();
    e += cfg.beta * traj.controls.col(t).squaredNorm();
  }
  return e + loss(traj.states.col(T), w, fed);
}

Vec running_costs(const Trajectory& traj, const RegretConfig& cfg, const Vec& anchor) {
  const int T = traj.horizon();
  Vec run(T + 1);
  run(0) = 0.0;
  for (int t = 0; t < T; ++t)
    run(t + 1) = run(t) + cfg.lambda * (traj.states.col(t + 1) - anchor).squaredNorm() +
                 cfg.beta * traj.controls.col(t).squaredNorm();
  return run;
}

Vec energy_curve(const Trajectory& traj, const RegretConfig& cfg, const Vec& w,
                 const Federation& fed, const Vec& anchor) {
  Vec curve = running_costs(traj, cfg, anchor);
  for (int t = 0; t <= traj.horizon(); ++t) curve(t) += loss(traj.states.col(t), w, fed);
  return curve;
}

double systemic_regret(const Trajectory& traj, const RegretConfig& cfg, const Vec& w,
                       const Federation& fed, const Vec& anchor) {
  return energy(traj, cfg, w, fed, anchor) - ideal_loss(w, fed);
}

TerminalConditions terminal_conditions(const Federation& fed, const Vec& w) {
  const int N = fed.n_datasets();
  const int p = fed.p();
  require(int(w.size()) == N, "terminal_conditions: weight count mismatch");
  TerminalConditions tc;
  tc.w = w;
  tc.N = N;
  tc.p = p;
  tc.G = Mat::Zero(p, p);
  tc.g = Vec::Zero(p);
  tc.r_T = 0.0;
  for (int i = 0; i < N; ++i) {
    const Mat& U = fed.datasets[i].U;
    const Vec& Y = fed.datasets[i].Y;
    tc.G.noalias() += w(i) * U.transpose() * U;
    tc.g.noalias() += w(i) * U.transpose() * Y;
    tc.r_T += w(i) * Y.squaredNorm();
  }
  tc.G = 0.5 * (tc.G + tc.G.transpose()).eval();
  return tc;
}

RiccatiTape backward_riccati(const TerminalConditions& terminal, const RegretConfig& cfg,
                             const Vec& anchor) {
  require(cfg.beta > 0.0, "backward_riccati: beta must be > 0");
  require(cfg.lambda >= 0.0, "backward_riccati: lambda must be >= 0");
  require(cfg.horizon >= 1, "backward_riccati: horizon must be >= 1");
  const int n = terminal.N * terminal.p;
  require(anchor.size() == n, "backward_riccati: anchor size mismatch");
  const int T = cfg.horizon;
  RiccatiTape tape;
  tape.cfg = cfg;
  tape.anchor = anchor;
  tape.P.resize(T + 1);
  tape.S.resize(T + 1);
  tape.r.assign(T + 1, 0.0);
  tape.P[T] = terminal.dense_P();
  tape.S[T] = terminal.dense_S();
  tape.r[T] = terminal.r_T;
  const Mat I = Mat::Identity(n, n);
  const double lb = cfg.lambda + cfg.beta;
  for (int t = T - 1; t >= 0; --t) {
    Mat M = tape.P[t + 1];
    M.diagonal().array() += lb;
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success)
      throw NumericalError("regret", "backward step factorization failed");
    const Mat Minv = llt.solve(I);
    tape.P[t] = cfg.beta * I - (cfg.beta * cfg.beta) * Minv;
    tape.P[t] = 0.5 * (tape.P[t] + tape.P[t].transpose()).eval();
    const Vec v = tape.S[t + 1] - cfg.lambda * anchor;
    tape.S[t] = cfg.beta * llt.solve(v);
    tape.r[t] = -v.dot(llt.solve(v)) + cfg.lambda * anchor.squaredNorm() + tape.r[t + 1];
  }
  return tape;
}

Trajectory forward_rollout(const RiccatiTape& tape) { return forward_rollout(tape, tape.anchor); }

Trajectory forward_rollout(const RiccatiTape& tape, const Vec& start) {
  const int T = tape.horizon();
  const Eigen::Index n = start.size();
  require(tape.P[T].rows() == n, "forward_rollout: start size mismatch");
  const RegretConfig& cfg = tape.cfg;
  const double lb = cfg.lambda + cfg.beta;
  Trajectory traj;
  traj.provenance = Provenance::regret_optimal;
  traj.states.resize(n, T + 1);
  traj.controls.resize(n, T);
  traj.states.col(0) = start;
  for (int t = 0; t < T; ++t) {
    Mat M = tape.P[t + 1];
    M.diagonal().array() += lb;
    Vec rhs = tape.P[t + 1] * traj.states.col(t) + cfg.lambda * traj.states.col(t) -
              cfg.lambda * tape.anchor + tape.S[t + 1];
    traj.controls.col(t) = -Eigen::LLT<Mat>(M).solve(rhs);
    traj.states.col(t + 1) = traj.states.col(t) + traj.controls.col(t);
  }
  return traj;
}

double cost_via_value_function(const RiccatiTape& tape, const Vec& start) {
  return start.dot(tape.P[0] * start) + 2.0 * tape.S[0].dot(start) + tape.r[0];
}

Trajectory qp_oracle(const Federation& fed, const Vec& w, const RegretConfig& cfg,
                     const Vec& anchor) {
  return qp_oracle(fed, w, cfg, anchor, anchor);
}

Trajectory qp_oracle(const Federation& fed, const Vec& w, const RegretConfig& cfg,
                     const Vec& anchor, const Vec& start) {
  const int n = fed.n_datasets() * fed.p();
  const int T = cfg.horizon;
  require(Eigen::Index(T) * n <= 600, "qp_oracle: instance too large for the dense solve");
  const TerminalConditions tc = terminal_conditions(fed, w);
  const Mat PT = tc.dense_P();
  const Vec ST = tc.dense_S();
  const Vec c = start - anchor;

  // Energy as a quadratic a'Qa + b'a + const in the stacked controls
  // a = (alpha(0),...,alpha(T-1)), using Theta(t) = start + sum_{u<t} alpha(u).
  Mat Q(T * n, T * n);
  Vec b(T * n);
  for (int u = 0; u < T; ++u) {
    for (int v = 0; v < T; ++v) {
      Mat blk = PT;
      const double lam_count = cfg.lambda * double(T - std::max(u, v));
      blk.diagonal().array() += lam_count + (u == v ? cfg.beta : 0.0);
      Q.block(u * n, v * n, n, n) = blk;
    }
    b.segment(u * n, n) =
        2.0 * cfg.lambda * double(T - u) * c + 2.0 * (PT * start + ST);
  }
  Vec a = Eigen::LDLT<Mat>(2.0 * Q).solve(-b);

  Trajectory traj;
  traj.provenance = Provenance::oracle;
  traj.states.resize(n, T + 1);
  traj.controls.resize(n, T);
  traj.states.col(0) = start;
  for (int t = 0; t < T; ++t) {
    traj.controls.col(t) = a.segment(t * n, n);
    traj.states.col(t + 1) = traj.states.col(t) + traj.controls.col(t);
  }
  return traj;
}

Vec loss_gradient(const Vec& theta_stacked, const Vec& w, const Federation& fed) {
  const int N = fed.n_datasets();
  const int p = fed.p();
  const Vec tw = mix(theta_stacked, w, p);
  Vec core = Vec::Zero(p);
  for (int i = 0; i < N; ++i)
    core.noalias() +=
        w(i) * (fed.datasets[i].U.transpose() * (fed.datasets[i].U * tw - fed.datasets[i].Y));
  Vec grad(Eigen::Index(N) * p);
  for (int k = 0; k < N; ++k) grad.segment(k * p, p) = 2.0 * w(k) * core;
  return grad;
}

Trajectory gradient_descent(const Federation& fed, const Vec& w, const GdConfig& cfg,
                            const Vec& start) {
  require(cfg.learning_rate > 0.0, "gradient_descent: learning_rate must be > 0");
  require(cfg.steps >= 1, "gradient_descent: steps must be >= 1");
  const Eigen::Index n = start.size();
  Trajectory traj;
  traj.provenance = Provenance::gradient_descent;
  traj.states.resize(n, cfg.steps + 1);
  traj.controls.resize(n, cfg.steps);
  traj.states.col(0) = start;
  for (long t = 0; t < cfg.steps; ++t) {
    traj.controls.col(t) = -cfg.learning_rate * loss_gradient(traj.states.col(t), w, fed);
    traj.states.col(t + 1) = traj.states.col(t) + traj.controls.col(t);
    if (loss(traj.states.col(t + 1), w, fed) > 1e12)
      throw NumericalError("regret",
                           "gradient descent diverged (loss > 1e12); reduce the learning rate");
  }
  return traj;
}

}  // namespace fedkrr

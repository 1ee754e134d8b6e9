#include "fedkrr/spectral.hpp"

#include <Eigen/Eigenvalues>

namespace fedkrr {

Vec SpectralTape::apply_V(const Vec& x) const {
  const Vec Ex = E * x / wnorm;
  Vec out(Eigen::Index(N) * p);
  for (int k = 0; k < N; ++k) out.segment(k * p, p) = w(k) * Ex;
  return out;
}

Vec SpectralTape::apply_Vt(const Vec& y) const {
  Vec acc = Vec::Zero(p);
  for (int k = 0; k < N; ++k) acc += w(k) * y.segment(k * p, p);
  return E.transpose() * acc / wnorm;
}

Mat SpectralTape::dense_P(int t) const {
  const int n = N * p;
  Mat V(n, p);
  for (int k = 0; k < N; ++k) V.middleRows(k * p, p) = (w(k) / wnorm) * E;
  Mat P = V * d.row(t).asDiagonal() * V.transpose();
  P += rho(t) * (Mat::Identity(n, n) - V * V.transpose());
  return 0.5 * (P + P.transpose()).eval();
}

Vec SpectralTape::dense_S(int t) const {
  return apply_V(c.row(t).transpose()) + sigma(t) * a_perp;
}

SpectralTape spectral_backward(const TerminalConditions& terminal, const RegretConfig& cfg,
                               const Vec& anchor) {
  require(cfg.beta > 0.0, "spectral_backward: beta must be > 0");
  require(cfg.horizon >= 1, "spectral_backward: horizon must be >= 1");
  SpectralTape tape;
  tape.w = terminal.w;
  tape.wnorm = terminal.w.norm();
  tape.N = terminal.N;
  tape.p = terminal.p;
  tape.cfg = cfg;
  tape.anchor = anchor;
  const int T = cfg.horizon;
  const int p = terminal.p;
  const double lam = cfg.lambda, beta = cfg.beta, lb = lam + beta;

  Eigen::SelfAdjointEigenSolver<Mat> es(tape.wnorm * tape.wnorm * terminal.G);
  if (es.info() != Eigen::Success)
    throw NumericalError("spectral", "terminal eigendecomposition failed");
  tape.E = es.eigenvectors();

  tape.d.resize(T + 1, p);
  tape.rho.resize(T + 1);
  tape.c.resize(T + 1, p);
  tape.sigma.resize(T + 1);
  tape.r.resize(T + 1);

  tape.d.row(T) = es.eigenvalues().transpose();
  tape.rho(T) = 0.0;
  tape.c.row(T) = -tape.wnorm * (tape.E.transpose() * terminal.g).transpose();
  tape.sigma(T) = 0.0;
  tape.r(T) = terminal.r_T;

  tape.a_par = tape.apply_Vt(anchor);
  tape.a_perp = anchor - tape.apply_V(tape.a_par);
  const double perp2 = tape.a_perp.squaredNorm();
  const double anchor2 = anchor.squaredNorm();

  for (int t = T - 1; t >= 0; --t) {
    const Eigen::ArrayXd dn = tape.d.row(t + 1).transpose().array();
    tape.d.row(t) = (beta * (lam + dn) / (lb + dn)).matrix().transpose();
    tape.rho(t) = beta * (lam + tape.rho(t + 1)) / (lb + tape.rho(t + 1));
    const Eigen::ArrayXd vpar =
        tape.c.row(t + 1).transpose().array() - lam * tape.a_par.array();
    const double vperp = tape.sigma(t + 1) - lam;
    tape.c.row(t) = (beta * vpar / (lb + dn)).matrix().transpose();
    tape.sigma(t) = beta * vperp / (lb + tape.rho(t + 1));
    tape.r(t) = -(vpar.square() / (lb + dn)).sum() -
                vperp * vperp * perp2 / (lb + tape.rho(t + 1)) + lam * anchor2 +
                tape.r(t + 1);
  }
  return tape;
}

Trajectory spectral_rollout(const SpectralTape& tape) {
  return spectral_rollout(tape, tape.anchor);
}

Trajectory spectral_rollout(const SpectralTape& tape, const Vec& start) {
  const int T = tape.horizon();
  const Eigen::Index n = Eigen::Index(tape.N) * tape.p;
  require(start.size() == n, "spectral_rollout: start size mismatch");
  const double lam = tape.cfg.lambda, beta = tape.cfg.beta, lb = lam + beta;
  (void)beta;
  Trajectory traj;
  traj.provenance = Provenance::regret_optimal;
  traj.states.resize(n, T + 1);
  traj.controls.resize(n, T);
  traj.states.col(0) = start;
  Vec x = start;
  for (int t = 0; t < T; ++t) {
    const Eigen::ArrayXd dn = tape.d.row(t + 1).transpose().array();
    const Vec x_par = tape.apply_Vt(x);
    const Vec x_perp = x - tape.apply_V(x_par);
    const Eigen::ArrayXd z_par = (lam + dn) * x_par.array() - lam * tape.a_par.array() +
                                 tape.c.row(t + 1).transpose().array();
    const Vec z_perp =
        (lam + tape.rho(t + 1)) * x_perp + (tape.sigma(t + 1) - lam) * tape.a_perp;
    const Vec alpha =
        -(tape.apply_V((z_par / (lb + dn)).matrix()) + z_perp / (lb + tape.rho(t + 1)));
    traj.controls.col(t) = alpha;
    x += alpha;
    traj.states.col(t + 1) = x;
  }
  return traj;
}

double spectral_cost(const SpectralTape& tape, const Vec& start) {
  const Vec x_par = tape.apply_Vt(start);
  const Vec x_perp = start - tape.apply_V(x_par);
  const double quad = (tape.d.row(0).transpose().array() * x_par.array().square()).sum() +
                      tape.rho(0) * x_perp.squaredNorm();
  const double lin = tape.c.row(0).dot(x_par) + tape.sigma(0) * tape.a_perp.dot(start);
  return quad + 2.0 * lin + tape.r(0);
}

}  // namespace fedkrr

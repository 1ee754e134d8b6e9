#include "fedkrr/accelerated.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace fedkrr {

Mat SymmetricTape::dense_P(int t) const {
  Mat P(N * p, N * p);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) P.block(k * p, l * p, p, p) = (k == l) ? pi1[t] : pi2[t];
  return P;
}

Vec SymmetricTape::dense_S(int t) const {
  Vec S(Eigen::Index(N) * p);
  for (int k = 0; k < N; ++k) S.segment(k * p, p) = pi3[t];
  return S;
}

SymTerminal sym_terminal(const Federation& fed) {
  const int N = fed.n_datasets();
  const int p = fed.p();
  SymTerminal term;
  term.N = N;
  term.p = p;
  Mat G = Mat::Zero(p, p);
  Vec g = Vec::Zero(p);
  for (const auto& ds : fed.datasets) {
    G.noalias() += ds.U.transpose() * ds.U;
    g.noalias() += ds.U.transpose() * ds.Y;
  }
  G = 0.5 * (G + G.transpose()).eval();
  term.pi1 = G / double(N * N * N);
  term.pi2 = term.pi1;
  term.pi3 = -g / double(N * N);
  return term;
}

std::pair<Mat, Mat> gamma_maps(const Mat& pi1, const Mat& pi2, const RegretConfig& cfg, int N) {
  const int p = int(pi1.rows());
  const double lb = cfg.lambda + cfg.beta;
  const Mat I = Mat::Identity(p, p);
  Mat H = pi1 + double(N - 2) * pi2;
  H.diagonal().array() += lb;
  Eigen::LDLT<Mat> Hf(H);
  if (Hf.info() != Eigen::Success)
    throw NumericalError("accelerated", "gamma_maps: H factorization failed");
  const Mat Hinv_pi2 = Hf.solve(pi2);
  Mat A = pi1 - double(N - 1) * pi2 * Hinv_pi2;
  A.diagonal().array() += lb;
  Eigen::LDLT<Mat> Af(A);
  if (Af.info() != Eigen::Success)
    throw NumericalError("accelerated", "gamma_maps: core factorization failed");
  Mat gamma1 = Af.solve(I);
  gamma1 = 0.5 * (gamma1 + gamma1.transpose()).eval();
  Mat gamma2 = -Hf.solve(pi2 * gamma1);
  gamma2 = 0.5 * (gamma2 + gamma2.transpose()).eval();
  return {std::move(gamma1), std::move(gamma2)};
}

SymmetricTape sym_backward(const SymTerminal& terminal, const RegretConfig& cfg, int N,
                           const Vec& theta_mean) {
  require(cfg.beta > 0.0, "sym_backward: beta must be > 0");
  require(cfg.horizon >= 1, "sym_backward: horizon must be >= 1");
  require(theta_mean.size() == terminal.p, "sym_backward: theta_mean size mismatch");
  const int T = cfg.horizon;
  const int p = terminal.p;
  const Mat I = Mat::Identity(p, p);
  SymmetricTape tape;
  tape.cfg = cfg;
  tape.theta_mean = theta_mean;
  tape.N = N;
  tape.p = p;
  tape.pi1.resize(T + 1);
  tape.pi2.resize(T + 1);
  tape.pi3.resize(T + 1);
  tape.gamma1.resize(T + 1);
  tape.gamma2.resize(T + 1);
  tape.pi1[T] = terminal.pi1;
  tape.pi2[T] = terminal.pi2;
  tape.pi3[T] = terminal.pi3;
  for (int t = T - 1; t >= 0; --t) {
    auto [g1, g2] = gamma_maps(tape.pi1[t + 1], tape.pi2[t + 1], cfg, N);
    tape.gamma1[t + 1] = std::move(g1);
    tape.gamma2[t + 1] = std::move(g2);
    const Mat& G1 = tape.gamma1[t + 1];
    const Mat& G2 = tape.gamma2[t + 1];
    const double b2 = cfg.beta * cfg.beta;
    tape.pi1[t] = cfg.beta * I - b2 * G1;
    tape.pi2[t] = -b2 * G2;
    tape.pi3[t] = cfg.beta * ((G1 + double(N - 1) * G2) *
                              (tape.pi3[t + 1] - cfg.lambda * theta_mean));
  }
  return tape;
}

Vec helper_alpha(const Vec& theta_i, const Vec& theta_sum, const Mat& gamma1, const Mat& gamma2,
                 const Mat& pi1, const Mat& pi2, const Vec& pi3, const RegretConfig& cfg, int N,
                 const Vec& theta_mean) {
  const int p = int(pi1.rows());
  const Mat I = Mat::Identity(p, p);
  const double lam = cfg.lambda;
  const Mat self_map = (gamma1 - gamma2) * (lam * I + pi1 - pi2);
  const Mat sum_map = gamma1 * pi2 + gamma2 * (lam * I + pi1 + double(N - 2) * pi2);
  const Vec offset = (gamma1 + double(N - 1) * gamma2) * (pi3 - lam * theta_mean);
  return -(self_map * theta_i) - (sum_map * theta_sum) - offset;
}

Trajectory accelerated_rollout(const LocalOptima& optima, const SymmetricTape& tape,
                               const RegretConfig& cfg) {
  (void)cfg;
  return accelerated_rollout(tape, optima.stacked);
}

Trajectory accelerated_rollout(const SymmetricTape& tape, const Vec& start) {
  const int T = tape.horizon();
  const int N = tape.N;
  const int p = tape.p;
  require(start.size() == Eigen::Index(N) * p, "accelerated_rollout: start size mismatch");
  const RegretConfig& cfg = tape.cfg;
  const Mat I = Mat::Identity(p, p);
  Trajectory traj;
  traj.provenance = Provenance::accelerated;
  traj.states.resize(Eigen::Index(N) * p, T + 1);
  traj.controls.resize(Eigen::Index(N) * p, T);
  traj.states.col(0) = start;
  for (int t = 0; t < T; ++t) {
    const Mat& G1 = tape.gamma1[t + 1];
    const Mat& G2 = tape.gamma2[t + 1];
    const Mat& P1 = tape.pi1[t + 1];
    const Mat& P2 = tape.pi2[t + 1];
    // Same algebra as helper_alpha, with the step-invariant maps formed once.
    const Mat self_map = (G1 - G2) * (cfg.lambda * I + P1 - P2);
    const Mat sum_map = G1 * P2 + G2 * (cfg.lambda * I + P1 + double(N - 2) * P2);
    const Vec offset =
        (G1 + double(N - 1) * G2) * (tape.pi3[t + 1] - cfg.lambda * tape.theta_mean);
    Vec theta_sum = Vec::Zero(p);
    for (int k = 0; k < N; ++k) theta_sum += traj.states.col(t).segment(k * p, p);
    for (int k = 0; k < N; ++k) {
      const Vec alpha = -(self_map * traj.states.col(t).segment(k * p, p)) -
                        (sum_map * theta_sum) - offset;
      traj.controls.col(t).segment(k * p, p) = alpha;
    }
    traj.states.col(t + 1) = traj.states.col(t) + traj.controls.col(t);
  }
  return traj;
}

FastSymmetricTape fast_sym_backward(const SymTerminal& terminal, const RegretConfig& cfg, int N,
                                    const Vec& theta_mean) {
  require(cfg.beta > 0.0, "fast_sym_backward: beta must be > 0");
  require(cfg.horizon >= 1, "fast_sym_backward: horizon must be >= 1");
  const int T = cfg.horizon;
  const int p = terminal.p;
  const double lam = cfg.lambda, beta = cfg.beta, lb = lam + beta;
  FastSymmetricTape tape;
  tape.cfg = cfg;
  tape.N = N;
  tape.p = p;
  Eigen::SelfAdjointEigenSolver<Mat> es(terminal.pi1);
  if (es.info() != Eigen::Success)
    throw NumericalError("accelerated", "fast_sym_backward: eigendecomposition failed");
  tape.E = es.eigenvectors();
  tape.q1.resize(T + 1, p);
  tape.q2.resize(T + 1, p);
  tape.e3.resize(T + 1, p);
  tape.g1 = Mat::Zero(T + 1, p);
  tape.g2 = Mat::Zero(T + 1, p);
  tape.q1.row(T) = es.eigenvalues().transpose();
  tape.q2.row(T) = tape.q1.row(T);
  tape.e3.row(T) = (tape.E.transpose() * terminal.pi3).transpose();
  tape.ebar = tape.E.transpose() * theta_mean;
  for (int t = T - 1; t >= 0; --t) {
    const Eigen::ArrayXd a1 = tape.q1.row(t + 1).transpose().array();
    const Eigen::ArrayXd a2 = tape.q2.row(t + 1).transpose().array();
    const Eigen::ArrayXd h = lb + a1 + double(N - 2) * a2;
    const Eigen::ArrayXd g1 = 1.0 / (lb + a1 - double(N - 1) * a2.square() / h);
    const Eigen::ArrayXd g2 = -g1 * a2 / h;
    tape.g1.row(t + 1) = g1.matrix().transpose();
    tape.g2.row(t + 1) = g2.matrix().transpose();
    tape.q1.row(t) = (beta - beta * beta * g1).matrix().transpose();
    tape.q2.row(t) = (-beta * beta * g2).matrix().transpose();
    tape.e3.row(t) =
        (beta * (g1 + double(N - 1) * g2) *
         (tape.e3.row(t + 1).transpose().array() - lam * tape.ebar.array()))
            .matrix()
            .transpose();
  }
  return tape;
}

Trajectory fast_accelerated_rollout(const FastSymmetricTape& tape, const Vec& start) {
  const int T = tape.horizon();
  const int N = tape.N;
  const int p = tape.p;
  require(start.size() == Eigen::Index(N) * p, "fast_accelerated_rollout: start size mismatch");
  const double lam = tape.cfg.lambda;
  Trajectory traj;
  traj.provenance = Provenance::accelerated;
  traj.states.resize(Eigen::Index(N) * p, T + 1);
  traj.controls.resize(Eigen::Index(N) * p, T);
  traj.states.col(0) = start;
  // Work in the shared eigenbasis; map back when recording.
  Mat xi(p, N);
  for (int k = 0; k < N; ++k) xi.col(k) = tape.E.transpose() * start.segment(k * p, p);
  for (int t = 0; t < T; ++t) {
    const Eigen::ArrayXd a1 = tape.q1.row(t + 1).transpose().array();
    const Eigen::ArrayXd a2 = tape.q2.row(t + 1).transpose().array();
    const Eigen::ArrayXd g1 = tape.g1.row(t + 1).transpose().array();
    const Eigen::ArrayXd g2 = tape.g2.row(t + 1).transpose().array();
    const Eigen::ArrayXd e3 = tape.e3.row(t + 1).transpose().array();
    const Eigen::ArrayXd self_map = (g1 - g2) * (lam + a1 - a2);
    const Eigen::ArrayXd sum_map = g1 * a2 + g2 * (lam + a1 + double(N - 2) * a2);
    const Eigen::ArrayXd offset =
        (g1 + double(N - 1) * g2) * (e3 - lam * tape.ebar.array());
    const Eigen::ArrayXd xi_sum = xi.rowwise().sum().array();
    for (int k = 0; k < N; ++k) {
      const Eigen::ArrayXd alpha_xi =
          -(self_map * xi.col(k).array()) - (sum_map * xi_sum) - offset;
      xi.col(k) += alpha_xi.matrix();
      traj.controls.col(t).segment(k * p, p) = tape.E * alpha_xi.matrix();
    }
    traj.states.col(t + 1) = traj.states.col(t) + traj.controls.col(t);
  }
  return traj;
}

}  // namespace fedkrr

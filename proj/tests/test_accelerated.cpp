#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fedkrr/accelerated.hpp"
#include "fedkrr/rng.hpp"

using namespace fedkrr;

namespace {

Federation toy_federation(std::uint64_t seed, int N, int n, int hidden) {
  const FeatureMap map = build_feature_map(2, hidden, 5, false);
  return gen_teacher_federation(N, 2, std::vector<int>(size_t(N), n), 3, map, seed);
}

Vec random_vec(int n, std::uint64_t seed) {
  rng::Stream stream(seed);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = stream.normal();
  return v;
}

Mat toeplitz_from(const Mat& diag, const Mat& off, int N) {
  const int p = int(diag.rows());
  Mat full = Mat::Zero(N * p, N * p);
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) full.block(k * p, l * p, p, p) = (k == l) ? diag : off;
  return full;
}

}  // namespace

TEST_CASE("symmetric terminal blocks match hand sums") {
  const Federation fed = toy_federation(3, 2, 2, 1);  // N=2, p=1
  const SymTerminal term = sym_terminal(fed);
  CHECK(term.pi1 == term.pi2);  // bit-exact shared terminal

  double uu = 0.0, uy = 0.0;
  for (const auto& ds : fed.datasets)
    for (int j = 0; j < ds.n(); ++j) {
      uu += ds.U(j, 0) * ds.U(j, 0);
      uy += ds.U(j, 0) * ds.Y(j);
    }
  CHECK(term.pi1(0, 0) == doctest::Approx(uu / 8.0).epsilon(1e-13));   // 1/N^3
  CHECK(term.pi3(0) == doctest::Approx(-uy / 4.0).epsilon(1e-13));     // -1/N^2

  Federation zeros = fed;
  for (auto& ds : zeros.datasets) ds.Y.setZero();
  CHECK(sym_terminal(zeros).pi3.cwiseAbs().maxCoeff() == 0.0);

  // N=1 reduction: pi1 equals the full Gram and matches terminal_conditions.
  const Federation single = toy_federation(5, 1, 6, 3);
  Vec w1(1);
  w1 << 1.0;
  const SymTerminal t1 = sym_terminal(single);
  const TerminalConditions tc = terminal_conditions(single, w1);
  CHECK((t1.pi1 - tc.G).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + tc.G.norm()));
}

TEST_CASE("gamma maps: decoupled case, scalar formulas, Toeplitz inverse") {
  const RegretConfig cfg{0.4, 1.1, 3};
  const double lb = cfg.lambda + cfg.beta;

  Mat pi1(2, 2);
  pi1 << 1.3, 0.2, 0.2, 0.9;
  const auto [g1_dec, g2_dec] = gamma_maps(pi1, Mat::Zero(2, 2), cfg, 3);
  CHECK(g2_dec.cwiseAbs().maxCoeff() <= 1e-14);
  const Mat expect = (lb * Mat::Identity(2, 2) + pi1).inverse();
  CHECK((g1_dec - expect).cwiseAbs().maxCoeff() <= 1e-12);

  // Scalar arithmetic oracle.
  const double a = 0.8, b = 0.3;
  const int N = 4;
  Mat sa(1, 1), sb(1, 1);
  sa << a;
  sb << b;
  const auto [g1s, g2s] = gamma_maps(sa, sb, cfg, N);
  const double h = lb + a + (N - 2) * b;
  const double gamma1 = 1.0 / (lb + a - (N - 1) * b * b / h);
  const double gamma2 = -gamma1 * b / h;
  CHECK(g1s(0, 0) == doctest::Approx(gamma1).epsilon(1e-12));
  CHECK(g2s(0, 0) == doctest::Approx(gamma2).epsilon(1e-12));

  // Reconstruction: Toeplitz(gamma1, gamma2) inverts Toeplitz(lb I + pi1, pi2).
  rng::Stream stream(9);
  Mat B(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) B(i, j) = stream.normal();
  const Mat spd1 = B * B.transpose() + 0.5 * Mat::Identity(2, 2);
  const Mat off = 0.2 * (B + B.transpose());
  const auto [g1, g2] = gamma_maps(spd1, off, cfg, 3);
  const Mat big = toeplitz_from(lb * Mat::Identity(2, 2) + spd1, off, 3);
  const Mat inv_big = big.inverse();
  const Mat rebuilt = toeplitz_from(g1, g2, 3);
  CHECK((rebuilt - inv_big).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("symmetric backward: zero terminal and T=1 layouts") {
  const RegretConfig cfg{0.0, 1.2, 4};
  SymTerminal zero;
  zero.pi1 = Mat::Zero(2, 2);
  zero.pi2 = Mat::Zero(2, 2);
  zero.pi3 = Vec::Zero(2);
  zero.N = 3;
  zero.p = 2;
  const SymmetricTape tape = sym_backward(zero, cfg, 3, Vec::Zero(2));
  for (int t = 0; t <= 4; ++t) {
    CHECK(tape.pi2[size_t(t)].cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(tape.pi3[size_t(t)].cwiseAbs().maxCoeff() <= 1e-14);
    // With pi2 = 0 the pi1 recursion is the single-block Riccati fixed point.
    CHECK(tape.pi1[size_t(t)].cwiseAbs().maxCoeff() <= 1e-14);
  }

  const Federation fed = toy_federation(7, 2, 4, 2);
  const SymTerminal term = sym_terminal(fed);
  const SymmetricTape t1 = sym_backward(term, RegretConfig{0.3, 1.0, 1}, 2, Vec::Zero(2));
  CHECK(t1.pi1.size() == 2);
  CHECK((t1.pi1[1] - term.pi1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((t1.pi3[1] - term.pi3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Toeplitz faithfulness against the general backward recursion") {
  const Federation fed = toy_federation(11, 3, 5, 2);
  const LocalOptima optima = local_optima(fed, RidgeConfig{0.1});
  const Vec w = Vec::Constant(3, 1.0 / 3.0);
  for (const RegretConfig cfg :
       {RegretConfig{0.0, 1.0, 4}, RegretConfig{0.8, 1.4, 4}}) {
    const RiccatiTape dense =
        backward_riccati(terminal_conditions(fed, w), cfg, optima.stacked_mean);
    const SymmetricTape sym = sym_backward(sym_terminal(fed), cfg, 3, optima.mean_theta);
    for (int t = 0; t <= 4; ++t) {
      CHECK((sym.dense_P(t) - dense.P[size_t(t)]).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((sym.dense_S(t) - dense.S[size_t(t)]).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("helper control: zero case, scalar oracle, blockwise full-system oracle") {
  const RegretConfig cfg{0.6, 1.0, 2};
  const int N = 3, p = 2;
  const Vec zero = helper_alpha(Vec::Zero(p), Vec::Zero(p), Mat::Zero(p, p), Mat::Zero(p, p),
                                Mat::Zero(p, p), Mat::Zero(p, p), Vec::Zero(p), cfg, N,
                                Vec::Zero(p));
  CHECK(zero.cwiseAbs().maxCoeff() == 0.0);

  // Scalar hand arithmetic.
  Mat g1(1, 1), g2(1, 1), pi1(1, 1), pi2(1, 1);
  g1 << 0.5;
  g2 << -0.1;
  pi1 << 0.9;
  pi2 << 0.25;
  Vec pi3(1), th(1), sum(1), mean(1);
  pi3 << 0.4;
  th << 1.5;
  sum << 2.4;
  mean << 0.8;
  const Vec got = helper_alpha(th, sum, g1, g2, pi1, pi2, pi3, cfg, N, mean);
  const double lam = cfg.lambda;
  const double self_map = (0.5 - (-0.1)) * (lam + 0.9 - 0.25);
  const double sum_map = 0.5 * 0.25 + (-0.1) * (lam + 0.9 + (N - 2) * 0.25);
  const double offset = (0.5 + (N - 1) * (-0.1)) * (0.4 - lam * 0.8);
  CHECK(got(0) == doctest::Approx(-(self_map * 1.5 + sum_map * 2.4 + offset)).epsilon(1e-12));

  // Blockwise equality with the dense control law.
  const Federation fed = toy_federation(13, N, 4, p);
  const LocalOptima optima = local_optima(fed, RidgeConfig{0.2});
  const SymmetricTape tape = sym_backward(sym_terminal(fed), cfg, N, optima.mean_theta);
  const Vec theta = random_vec(N * p, 50);
  Vec theta_sum = Vec::Zero(p);
  for (int i = 0; i < N; ++i) theta_sum += theta.segment(i * p, p);

  const Mat Phat = tape.dense_P(2);  // values at t+1 = T for the step t = T-1
  const Vec Shat = tape.dense_S(2);
  const double lb = cfg.lambda + cfg.beta;
  const Mat M = lb * Mat::Identity(N * p, N * p) + Phat;
  const Vec full = -M.inverse() *
                   ((cfg.lambda * Mat::Identity(N * p, N * p) + Phat) * theta -
                    cfg.lambda * optima.stacked_mean + Shat);
  for (int i = 0; i < N; ++i) {
    const Vec mine = helper_alpha(theta.segment(i * p, p), theta_sum, tape.gamma1[2],
                                  tape.gamma2[2], tape.pi1[2], tape.pi2[2], tape.pi3[2],
                                  cfg, N, optima.mean_theta);
    CHECK((mine - full.segment(i * p, p)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("accelerated rollout equals the uniform-weight general rollout") {
  for (int N : {2, 3, 5}) {
    const Federation fed = toy_federation(17 + std::uint64_t(N), N, 4, 3);
    const LocalOptima optima = local_optima(fed, RidgeConfig{0.1});
    const Vec w = Vec::Constant(N, 1.0 / N);
    for (const RegretConfig cfg :
         {RegretConfig{0.0, 1.0, 5}, RegretConfig{0.9, 1.2, 5}}) {
      const Trajectory general = forward_rollout(
          backward_riccati(terminal_conditions(fed, w), cfg, optima.stacked_mean),
          optima.stacked);
      const SymmetricTape tape = sym_backward(sym_terminal(fed), cfg, N, optima.mean_theta);
      const Trajectory fast = accelerated_rollout(optima, tape, cfg);
      const double scale = 1.0 + general.states.cwiseAbs().maxCoeff();
      CHECK((fast.states - general.states).cwiseAbs().maxCoeff() <= 1e-8 * scale);
      CHECK((fast.controls - general.controls).cwiseAbs().maxCoeff() <= 1e-8 * scale);
    }
  }
}

TEST_CASE("accelerated rollout stays put on an interpolating symmetric start") {
  Federation fed = toy_federation(19, 1, 3, 6);  // n=3 < p=6: interpolation
  for (int i = 1; i < 3; ++i) {
    fed.datasets.push_back(fed.datasets[0]);
    fed.datasets.back().id = i + 1;
  }
  const LocalOptima optima = local_optima(fed, RidgeConfig{0.0});
  const RegretConfig cfg{0.5, 1.0, 4};
  const SymmetricTape tape = sym_backward(sym_terminal(fed), cfg, 3, optima.mean_theta);
  const Trajectory traj = accelerated_rollout(optima, tape, cfg);
  CHECK(traj.controls.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("diagonalized fast path reproduces the block symmetric algorithm") {
  for (int N : {2, 4}) {
    const Federation fed = toy_federation(23 + std::uint64_t(N), N, 5, 3);
    const LocalOptima optima = local_optima(fed, RidgeConfig{0.05});
    for (const RegretConfig cfg :
         {RegretConfig{0.0, 1.0, 6}, RegretConfig{0.7, 1.1, 6}}) {
      const SymTerminal term = sym_terminal(fed);
      const SymmetricTape block = sym_backward(term, cfg, N, optima.mean_theta);
      const FastSymmetricTape diag = fast_sym_backward(term, cfg, N, optima.mean_theta);
      const Trajectory a = accelerated_rollout(optima, block, cfg);
      const Trajectory b = fast_accelerated_rollout(diag, optima.stacked);
      const double scale = 1.0 + a.states.cwiseAbs().maxCoeff();
      CHECK((a.states - b.states).cwiseAbs().maxCoeff() <= 1e-9 * scale);
      CHECK((a.controls - b.controls).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    }
  }
}

TEST_CASE("energy gap to the uniform optimizer shrinks along the weight homotopy") {
  const int N = 4;
  const Federation fed = toy_federation(31, N, 6, 3);
  const LocalOptima optima = local_optima(fed, RidgeConfig{0.1});
  const SharingResult sh = share(fed, optima, 5.0);
  const Vec uniform = Vec::Constant(N, 1.0 / N);
  const RegretConfig cfg{0.4, 1.0, 8};

  const SymmetricTape stape = sym_backward(sym_terminal(fed), cfg, N, optima.mean_theta);
  const Trajectory aro = accelerated_rollout(optima, stape, cfg);

  double prev_gap = std::numeric_limits<double>::infinity();
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const Vec w = ((1.0 - s) * sh.posterior + s * uniform).eval();
    const Trajectory ro = forward_rollout(
        backward_riccati(terminal_conditions(fed, w), cfg, optima.stacked_mean),
        optima.stacked);
    const double gap = std::abs(energy(aro, cfg, w, fed, optima.stacked_mean) -
                                energy(ro, cfg, w, fed, optima.stacked_mean));
    CHECK(gap <= prev_gap + 1e-9);
    if (s == 1.0) CHECK(gap <= 1e-8);
    prev_gap = gap;
  }
}

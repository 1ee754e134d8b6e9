#pragma once

#include <utility>
#include <vector>

#include "fedkrr/regret.hpp"
#include "fedkrr/sharing.hpp"

namespace fedkrr {

// Terminal blocks of the uniform-weight system: every diagonal block of the
// full terminal matrix equals pi1, every off-diagonal block equals pi2 (and
// pi1 == pi2 at the terminal time), every block of the linear term is pi3.
struct SymTerminal {
  Mat pi1;
  Mat pi2;
  Vec pi3;
  int N = 0;
  int p = 0;
};

// Reduced backward tape: p x p blocks indexed t = 0..T. gamma1/gamma2 cache
// the inverse maps of step t (valid for t >= 1; the control at step t uses
// the entries at t+1).
struct SymmetricTape {
  std::vector<Mat> pi1;
  std::vector<Mat> pi2;
  std::vector<Vec> pi3;
  std::vector<Mat> gamma1;
  std::vector<Mat> gamma2;
  RegretConfig cfg;
  Vec theta_mean;
  int N = 0;
  int p = 0;
  int horizon() const { return int(pi3.size()) - 1; }
  Mat dense_P(int t) const;  // block-Toeplitz reconstruction
  Vec dense_S(int t) const;
};

SymTerminal sym_terminal(const Federation& fed);

// gamma1 = {(l+b)I + pi1 - (N-1) pi2 H^{-1} pi2}^{-1},
// gamma2 = -gamma1 pi2 H^{-1}, with H = (l+b)I + pi1 + (N-2) pi2.
// The block-Toeplitz matrix with diagonal gamma1 and off-diagonal gamma2 is
// the inverse of the one with diagonal (l+b)I + pi1 and off-diagonal pi2.
std::pair<Mat, Mat> gamma_maps(const Mat& pi1, const Mat& pi2, const RegretConfig& cfg, int N);

// Backward sweep in dimension p; theta_mean is the uniform-mean anchor.
SymmetricTape sym_backward(const SymTerminal& terminal, const RegretConfig& cfg, int N,
                           const Vec& theta_mean);

// Single-agent control given the shared sum of all agents' parameters.
Vec helper_alpha(const Vec& theta_i, const Vec& theta_sum, const Mat& gamma1, const Mat& gamma2,
                 const Mat& pi1, const Mat& pi2, const Vec& pi3, const RegretConfig& cfg, int N,
                 const Vec& theta_mean);

// Rollout with per-agent updates; theta_sum formed once per step. Default
// start is the stacked local optima.
Trajectory accelerated_rollout(const LocalOptima& optima, const SymmetricTape& tape,
                               const RegretConfig& cfg);
Trajectory accelerated_rollout(const SymmetricTape& tape, const Vec& start);

// Diagonalized variant: pi1(T) = E diag(q) E' and every later pi/gamma stays
// diagonal in E, so the backward pass and each step of the rollout are
// elementwise in R^p. Exact up to roundoff against the block form.
struct FastSymmetricTape {
  Mat E;     // p x p eigenbasis of pi1(T)
  Mat q1;    // (T+1) x p
  Mat q2;    // (T+1) x p
  Mat e3;    // (T+1) x p, pi3 in E coordinates
  Mat g1;    // (T+1) x p, gamma1 eigenvalues (rows 1..T valid)
  Mat g2;    // (T+1) x p
  Vec ebar;  // E' theta_mean
  RegretConfig cfg;
  int N = 0;
  int p = 0;
  int horizon() const { return int(q1.rows()) - 1; }
};

FastSymmetricTape fast_sym_backward(const SymTerminal& terminal, const RegretConfig& cfg, int N,
                                    const Vec& theta_mean);
Trajectory fast_accelerated_rollout(const FastSymmetricTape& tape, const Vec& start);

}  // namespace fedkrr

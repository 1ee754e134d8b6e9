#pragma once

#include <vector>

#include "fedkrr/core.hpp"
#include "fedkrr/data.hpp"

namespace fedkrr {

// Penalty strengths and horizon of the collaborative training problem.
// lambda = 0 is admitted: beta > 0 alone keeps every step strictly convex.
struct RegretConfig {
  double lambda = 0.0;
  double beta = 1.0;
  int horizon = 1;
};

enum class Provenance { regret_optimal, accelerated, gradient_descent, oracle, custom };

// Dense iterate record. states col t = Theta(t) for t = 0..T, controls col t =
// alpha(t) for t = 0..T-1; states.col(t+1) == states.col(t) + controls.col(t).
struct Trajectory {
  Mat states;
  Mat controls;
  Provenance provenance = Provenance::custom;
  int horizon() const { return int(controls.cols()); }
};

// Terminal cost written as a quadratic Theta' P Theta + 2 S' Theta + r. The
// block structure P_{kl} = w_k w_l G and S_k = -w_k g is kept factored; the
// dense Np x Np forms are assembled on demand.
struct TerminalConditions {
  Vec w;
  Mat G;        // p x p, sum_i w_i U_i' U_i
  Vec g;        // p,     sum_i w_i U_i' Y_i
  double r_T = 0.0;
  int N = 0;
  int p = 0;
  Mat dense_P() const;
  Vec dense_S() const;
};

// Backward value-function coefficients, index t = 0..T.
struct RiccatiTape {
  std::vector<Mat> P;
  std::vector<Vec> S;
  std::vector<double> r;
  RegretConfig cfg;
  Vec anchor;
  int horizon() const { return int(r.size()) - 1; }
};

// Cooperative loss sum_i w_i |U_i theta^w - Y_i|^2 at theta^w = sum_k w_k theta_k.
double loss(const Vec& theta_stacked, const Vec& w, const Federation& fed);

// Minimum of the cooperative loss over all stacked parameters; depends on the
// stack only through theta^w, so it is a single p-dimensional least squares.
double ideal_loss(const Vec& w, const Federation& fed);

// sum_{t=0}^{T-1} [lambda |Theta(t+1)-anchor|^2 + beta |alpha(t)|^2] + loss(Theta(T)).
double energy(const Trajectory& traj, const RegretConfig& cfg, const Vec& w,
              const Federation& fed, const Vec& anchor);

// Partial running-cost sums: entry t = sum over steps u < t of the running
// terms. Entry 0 is 0; entry T plus loss(Theta(T)) equals energy().
Vec running_costs(const Trajectory& traj, const RegretConfig& cfg, const Vec& anchor);

// Intermediate objective curve: entry t = running_costs[t] + loss(Theta(t)).
Vec energy_curve(const Trajectory& traj, const RegretConfig& cfg, const Vec& w,
                 const Federation& fed, const Vec& anchor);

// energy minus ideal_loss; non-negative for every trajectory.
double systemic_regret(const Trajectory& traj, const RegretConfig& cfg, const Vec& w,
                       const Federation& fed, const Vec& anchor);

TerminalConditions terminal_conditions(const Federation& fed, const Vec& w);

// Backward sweep t = T-1..0. Each step factorizes M = (lambda+beta)I + P(t+1)
// once and reuses it for P, S and r. The anchor enters the S and r recursions.
RiccatiTape backward_riccati(const TerminalConditions& terminal, const RegretConfig& cfg,
                             const Vec& anchor);

// Optimal rollout from Theta(0) = start (default: the tape's anchor) using
// alpha(t) = -[(lambda+beta)I + P(t+1)]^{-1} [(lambda I + P(t+1))Theta(t)
//             - lambda*anchor + S(t+1)].
Trajectory forward_rollout(const RiccatiTape& tape);
Trajectory forward_rollout(const RiccatiTape& tape, const Vec& start);

// Value of the rollout read off the tape: x'P(0)x + 2S(0)'x + r(0) at x = start.
double cost_via_value_function(const RiccatiTape& tape, const Vec& start);

// Brute-force minimizer of the energy as one dense quadratic program in the
// stacked controls (T*N*p variables). Verification only; guarded to TNp <= 600.
Trajectory qp_oracle(const Federation& fed, const Vec& w, const RegretConfig& cfg,
                     const Vec& anchor);
Trajectory qp_oracle(const Federation& fed, const Vec& w, const RegretConfig& cfg,
                     const Vec& anchor, const Vec& start);

struct GdConfig {
  double learning_rate = 7e-5;
  long steps = 10000;
};

// Gradient of the cooperative loss; block k is 2 w_k sum_i w_i U_i'(U_i theta^w - Y_i).
Vec loss_gradient(const Vec& theta_stacked, const Vec& w, const Federation& fed);

// Plain gradient descent on the cooperative loss, all iterates recorded.
// Aborts with NumericalError once the loss exceeds 1e12.
Trajectory gradient_descent(const Federation& fed, const Vec& w, const GdConfig& cfg,
                            const Vec& start);

}  // namespace fedkrr

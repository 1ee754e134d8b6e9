#pragma once

#include "fedkrr/regret.hpp"

namespace fedkrr {

// Exact reduced form of the backward recursion. P(T) = V diag(mu) V' with
// V = kron(w, I_p) E / |w| (orthonormal, rank <= p), and the map
// P -> beta I - beta^2 [(lambda+beta)I + P]^{-1} preserves the eigenbasis, so
// every P(t) = V diag(d_t) V' + rho_t (I - VV'). Eigenvalues evolve by the
// scalar map f(x) = beta (lambda + x) / (lambda + beta + x); rho_T = 0.
// S(t) stays in span{V, anchor_perp}: S(t) = V c_t + sigma_t anchor_perp.
// Cost per backward or forward step is O(Np + p^2) instead of O((Np)^3).
struct SpectralTape {
  Vec w;
  double wnorm = 0.0;
  Mat E;       // p x p eigenvectors of |w|^2 G
  Mat d;       // (T+1) x p eigenvalues of P(t) on span(V)
  Vec rho;     // (T+1) eigenvalue of P(t) on the orthogonal complement
  Mat c;       // (T+1) x p coefficients of S(t) along V
  Vec sigma;   // (T+1) coefficient of S(t) along anchor_perp
  Vec r;       // (T+1)
  Vec a_par;   // V' anchor
  Vec a_perp;  // anchor - V a_par
  Vec anchor;
  RegretConfig cfg;
  int N = 0;
  int p = 0;

  int horizon() const { return int(rho.size()) - 1; }
  Vec apply_V(const Vec& x) const;   // R^p -> R^{Np}
  Vec apply_Vt(const Vec& y) const;  // R^{Np} -> R^p
  Mat dense_P(int t) const;
  Vec dense_S(int t) const;
};

// Same contract as backward_riccati / forward_rollout / cost_via_value_function,
// in the reduced representation. Results agree with the dense path to roundoff.
SpectralTape spectral_backward(const TerminalConditions& terminal, const RegretConfig& cfg,
                               const Vec& anchor);
Trajectory spectral_rollout(const SpectralTape& tape);
Trajectory spectral_rollout(const SpectralTape& tape, const Vec& start);
double spectral_cost(const SpectralTape& tape, const Vec& start);

}  // namespace fedkrr

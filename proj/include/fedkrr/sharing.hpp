#pragma once

#include <vector>

#include "fedkrr/core.hpp"
#include "fedkrr/data.hpp"

namespace fedkrr {

struct LocalOptima {
  std::vector<Vec> thetas;  // per-dataset ridge solutions theta*_i
  Vec stacked;              // concatenation, length N*p
  Vec mean_theta;           // average of the thetas
  Vec stacked_mean;         // mean_theta repeated N times
};

struct SharingResult {
  Vec scores;
  Vec prior;
  Vec posterior;
  double eta = 0.0;
};

LocalOptima local_optima(const Federation& fed, const RidgeConfig& cfg);
// Per-dataset ridge coefficients.
LocalOptima local_optima(const Federation& fed, const std::vector<double>& kappas);

// s_i: mean squared error of theta*_i on the main dataset.
Vec scores(const Federation& fed, const LocalOptima& optima);

// prior_i proportional to [s_1 + eta - s_i]_+ (clamped linear relevance).
Vec prior_weights(const Vec& scores, double eta);

// Minimizer of kl_objective over the simplex:
// w_i proportional to exp(-s_i/eta) * [s_1 + eta - s_i]_+.
Vec posterior_weights(const Vec& scores, double eta);

// sum_i w_i s_i + eta * KL(w || prior); +infinity when w puts mass on an index
// excluded by the prior's clamp.
double kl_objective(const Vec& w, const Vec& scores, double eta);

SharingResult share(const Federation& fed, const LocalOptima& optima, double eta);

}  // namespace fedkrr

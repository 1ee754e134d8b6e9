#pragma once

#include <cstdint>

#include "fedkrr/core.hpp"

namespace fedkrr {

struct RidgeConfig {
  double kappa = 0.0;
};

// Frozen random hidden layer defining phi: R^d -> R^p,
// phi(x) = ReLU(A x + b), optionally followed by a constant-1 feature.
struct FeatureMap {
  int input_dim = 0;
  int hidden_width = 0;
  bool include_constant = false;
  std::uint64_t seed = 0;
  double weight_scale = 1.0;
  Mat hidden_weights;  // h x d
  Vec hidden_bias;     // h

  int output_dim() const { return hidden_width + (include_constant ? 1 : 0); }
};

FeatureMap build_feature_map(int d, int hidden_width, std::uint64_t seed,
                             double weight_scale, bool include_constant);
// weight_scale defaults to 1/sqrt(d), keeping feature magnitudes O(1).
FeatureMap build_feature_map(int d, int hidden_width, std::uint64_t seed,
                             bool include_constant = false);

// Row j of the result is phi(x_j).
Mat featurize(const FeatureMap& map, const Mat& X);

struct RidgeSolution {
  Vec theta;
  bool min_norm = false;  // set when kappa=0 met a rank-deficient system
};

// Minimizes ||U theta - Y||^2 + kappa ||theta||^2. With kappa=0 and a
// rank-deficient U the minimum-norm least-squares solution is returned.
RidgeSolution ridge_solve(const Mat& U, const Vec& Y, const RidgeConfig& cfg);

Vec predict(const Vec& theta, const Mat& U);
double sse(const Vec& theta, const Mat& U, const Vec& Y);

}  // namespace fedkrr

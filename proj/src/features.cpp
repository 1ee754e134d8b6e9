#include "fedkrr/features.hpp"

#include <cmath>

#include "fedkrr/rng.hpp"

namespace fedkrr {

FeatureMap build_feature_map(int d, int hidden_width, std::uint64_t seed,
                             double weight_scale, bool include_constant) {
  require(d >= 1, "build_feature_map: input_dim must be >= 1");
  require(hidden_width >= 1, "build_feature_map: hidden_width must be >= 1");
  FeatureMap map;
  map.input_dim = d;
  map.hidden_width = hidden_width;
  map.include_constant = include_constant;
  map.seed = seed;
  map.weight_scale = weight_scale;
  map.hidden_weights.resize(hidden_width, d);
  map.hidden_bias.resize(hidden_width);
  rng::Stream gen(rng::key({seed, 0xfea7u}));
  for (int i = 0; i < hidden_width; ++i)
    for (int j = 0; j < d; ++j) map.hidden_weights(i, j) = weight_scale * gen.normal();
  for (int i = 0; i < hidden_width; ++i) map.hidden_bias(i) = weight_scale * gen.normal();
  return map;
}

FeatureMap build_feature_map(int d, int hidden_width, std::uint64_t seed,
                             bool include_constant) {
  return build_feature_map(d, hidden_width, seed, 1.0 / std::sqrt(double(d)),
                           include_constant);
}

Mat featurize(const FeatureMap& map, const Mat& X) {
  require(X.cols() == map.input_dim, "featurize: input dimension mismatch");
  Mat U(X.rows(), map.output_dim());
  U.leftCols(map.hidden_width) =
      ((X * map.hidden_weights.transpose()).rowwise() + map.hidden_bias.transpose())
          .cwiseMax(0.0);
  if (map.include_constant) U.col(map.hidden_width).setOnes();
  return U;
}

RidgeSolution ridge_solve(const Mat& U, const Vec& Y, const RidgeConfig& cfg) {
  require(U.rows() == Y.size(), "ridge_solve: row count mismatch");
  require(U.rows() >= 1, "ridge_solve: empty system");
  require(cfg.kappa >= 0.0, "ridge_solve: kappa must be >= 0");
  const auto p = U.cols();
  RidgeSolution out;
  if (cfg.kappa > 0.0) {
    Mat A = U.transpose() * U;
    A.diagonal().array() += cfg.kappa;
    out.theta = Eigen::LDLT<Mat>(A).solve(U.transpose() * Y);
    return out;
  }
  // kappa = 0: rank-revealing path; min-norm least squares when deficient.
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(U);
  out.theta = cod.solve(Y);
  out.min_norm = cod.rank() < p;
  return out;
}

Vec predict(const Vec& theta, const Mat& U) {
  require(U.cols() == theta.size(), "predict: dimension mismatch");
  return U * theta;
}

double sse(const Vec& theta, const Mat& U, const Vec& Y) {
  require(U.rows() == Y.size(), "sse: row count mismatch");
  return (predict(theta, U) - Y).squaredNorm();
}

}  // namespace fedkrr

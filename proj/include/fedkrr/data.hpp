#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fedkrr/core.hpp"
#include "fedkrr/features.hpp"

namespace fedkrr {

struct Dataset {
  Mat X;   // n x d raw inputs; empty once only features are meaningful
  Mat U;   // n x p features
  Vec Y;   // n targets
  int id = 0;

  int n() const { return int(Y.size()); }
  bool has_inputs() const { return X.size() > 0; }
};

// Ordered collection of datasets; index 0 is the main dataset ("dataset 1").
struct Federation {
  std::vector<Dataset> datasets;
  FeatureMap feature_map;

  int n_datasets() const { return int(datasets.size()); }
  int p() const { return datasets.empty() ? 0 : int(datasets[0].U.cols()); }
  int total_samples() const;
};

struct AttackSpec {
  double q = 0.0;    // fraction of pairs the adversary may change
  double eps = 0.0;  // per-pair perturbation radius
  std::uint64_t seed = 0;
};

// Synthetic targets from per-dataset random ReLU teacher networks
// (one hidden layer of `teacher_width` nodes); inputs are standard normal.
Federation gen_teacher_federation(int N, int d,
                                  const std::vector<int>& samples_per_dataset,
                                  int teacher_width, const FeatureMap& map,
                                  std::uint64_t seed, double teacher_scale = 1.0);

struct AssumptionReport {
  double K_x = 0.0;  // max feature norm
  double K_y = 0.0;  // max squared target
  bool gram_psd = false;
  bool weighted_psd = false;
};
AssumptionReport check_assumptions(const Federation& fed, const Vec& w);

// Changes exactly floor(q * total_samples) feature/target pairs, selected
// uniformly without replacement across the whole federation. Features move by
// eps along a uniform random direction; targets by +-sqrt(eps).
Federation perturb(const Federation& fed, const AttackSpec& spec);

// Directory layout: meta.json plus dataset_<k>/X.csv, dataset_<k>/Y.csv.
void export_federation(const Federation& fed, const std::string& dir);
Federation import_federation(const std::string& dir);

}  // namespace fedkrr

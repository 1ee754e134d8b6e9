#include "fedkrr/data.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "fedkrr/csv.hpp"
#include "fedkrr/rng.hpp"

namespace fedkrr {

namespace fs = std::filesystem;
using nlohmann::json;

int Federation::total_samples() const {
  int n = 0;
  for (const auto& d : datasets) n += d.n();
  return n;
}

Federation gen_teacher_federation(int N, int d,
                                  const std::vector<int>& samples_per_dataset,
                                  int teacher_width, const FeatureMap& map,
                                  std::uint64_t seed, double teacher_scale) {
  require(N >= 1, "gen_teacher_federation: N must be >= 1");
  require(int(samples_per_dataset.size()) == N,
          "gen_teacher_federation: one sample count per dataset required");
  require(map.input_dim == d, "gen_teacher_federation: map input_dim != d");
  Federation fed;
  fed.feature_map = map;
  fed.datasets.resize(N);
  for (int i = 0; i < N; ++i) {
    const int n = samples_per_dataset[i];
    require(n >= 1, "gen_teacher_federation: dataset sizes must be >= 1");
    rng::Stream gen(rng::key({seed, 0x7ea0u, std::uint64_t(i)}));
    Mat A(teacher_width, d);
    Vec b(teacher_width), c(teacher_width);
    for (int r = 0; r < teacher_width; ++r)
      for (int s = 0; s < d; ++s) A(r, s) = teacher_scale * gen.normal();
    for (int r = 0; r < teacher_width; ++r) b(r) = teacher_scale * gen.normal();
    for (int r = 0; r < teacher_width; ++r)
      c(r) = teacher_scale * gen.normal() / std::sqrt(double(teacher_width));
    Dataset& ds = fed.datasets[i];
    ds.id = i + 1;
    ds.X.resize(n, d);
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < d; ++s) ds.X(j, s) = gen.normal();
    ds.Y = ((ds.X * A.transpose()).rowwise() + b.transpose()).cwiseMax(0.0) * c;
    ds.U = featurize(map, ds.X);
  }
  return fed;
}

AssumptionReport check_assumptions(const Federation& fed, const Vec& w) {
  require(w.size() == fed.n_datasets(), "check_assumptions: weight count mismatch");
  AssumptionReport rep;
  const int p = fed.p();
  Mat gram = Mat::Zero(p, p);      // sum over all pairs of u u^T
  Mat gram_w = Mat::Zero(p, p);    // w-weighted version
  for (int i = 0; i < fed.n_datasets(); ++i) {
    const Dataset& ds = fed.datasets[i];
    rep.K_x = std::max(rep.K_x, std::sqrt(ds.U.rowwise().squaredNorm().maxCoeff()));
    rep.K_y = std::max(rep.K_y, ds.Y.cwiseAbs2().maxCoeff());
    Mat g = ds.U.transpose() * ds.U;
    gram += g;
    gram_w += w(i) * g;
  }
  const double tol = 1e-8;
  rep.gram_psd =
      Eigen::SelfAdjointEigenSolver<Mat>(gram).eigenvalues().minCoeff() >= -tol;
  // The weighted block matrix [w_k w_l G] has eigenvalues ||w||^2 eig(G) and 0.
  double lo = Eigen::SelfAdjointEigenSolver<Mat>(gram_w).eigenvalues().minCoeff();
  rep.weighted_psd = w.squaredNorm() * std::min(lo, 0.0) >= -tol;
  return rep;
}

Federation perturb(const Federation& fed, const AttackSpec& spec) {
  require(spec.q >= 0.0 && spec.q <= 1.0, "perturb: q must lie in [0,1]");
  require(spec.eps >= 0.0, "perturb: eps must be >= 0");
  Federation out = fed;
  const int total = fed.total_samples();
  const int m = int(std::floor(spec.q * total));
  if (m == 0 || spec.eps == 0.0) return out;

  // Partial Fisher-Yates over global sample indices.
  std::vector<int> idx(total);
  for (int i = 0; i < total; ++i) idx[i] = i;
  rng::Stream gen(rng::key({spec.seed, 0xa77accULL}));
  for (int i = 0; i < m; ++i) {
    int j = i + int(gen.below(std::uint64_t(total - i)));
    std::swap(idx[i], idx[j]);
  }

  const int p = fed.p();
  const double dy = std::sqrt(spec.eps);
  for (int i = 0; i < m; ++i) {
    int g = idx[i];
    int di = 0;
    while (g >= out.datasets[di].n()) g -= out.datasets[di++].n();
    Dataset& ds = out.datasets[di];
    // Uniform direction on the sphere, scaled to radius eps.
    Vec dir(p);
    double norm2;
    do {
      for (int k = 0; k < p; ++k) dir(k) = gen.normal();
      norm2 = dir.squaredNorm();
    } while (norm2 == 0.0);
    ds.U.row(g) += (spec.eps / std::sqrt(norm2)) * dir.transpose();
    ds.Y(g) += (gen.uniform() < 0.5 ? -dy : dy);
    if (ds.has_inputs()) ds.X.resize(0, 0);  // raw inputs no longer consistent
  }
  return out;
}

void export_federation(const Federation& fed, const std::string& dir) {
  fs::create_directories(dir);
  json meta;
  meta["n_datasets"] = fed.n_datasets();
  meta["input_dim"] = fed.feature_map.input_dim;
  meta["output_dim"] = fed.feature_map.output_dim();
  meta["map"] = {{"hidden_width", fed.feature_map.hidden_width},
                 {"seed", fed.feature_map.seed},
                 {"weight_scale", fed.feature_map.weight_scale},
                 {"include_constant", fed.feature_map.include_constant}};
  std::vector<int> sizes;
  for (const auto& ds : fed.datasets) {
    require(ds.has_inputs(), "export_federation: raw inputs required");
    sizes.push_back(ds.n());
  }
  meta["samples"] = sizes;
  std::ofstream(fs::path(dir) / "meta.json") << meta.dump(2) << "\n";

  std::vector<std::string> xh, yh{"y"};
  for (int j = 0; j < fed.feature_map.input_dim; ++j) xh.push_back("x" + std::to_string(j));
  for (const auto& ds : fed.datasets) {
    fs::path sub = fs::path(dir) / ("dataset_" + std::to_string(ds.id));
    fs::create_directories(sub);
    csv::write_matrix((sub / "X.csv").string(), ds.X, xh);
    csv::write_matrix((sub / "Y.csv").string(), ds.Y, yh);
  }
}

Federation import_federation(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "meta.json");
  require(bool(in), "import_federation: missing meta.json in " + dir);
  json meta = json::parse(in);
  Federation fed;
  fed.feature_map = build_feature_map(
      meta.at("input_dim").get<int>(), meta.at("map").at("hidden_width").get<int>(),
      meta.at("map").at("seed").get<std::uint64_t>(),
      meta.at("map").at("weight_scale").get<double>(),
      meta.at("map").at("include_constant").get<bool>());
  const int N = meta.at("n_datasets").get<int>();
  for (int i = 1; i <= N; ++i) {
    fs::path sub = fs::path(dir) / ("dataset_" + std::to_string(i));
    Dataset ds;
    ds.id = i;
    ds.X = csv::read_matrix((sub / "X.csv").string());
    Mat y = csv::read_matrix((sub / "Y.csv").string());
    require(y.cols() == 1, "import_federation: Y.csv must have one column");
    ds.Y = y.col(0);
    ds.U = featurize(fed.feature_map, ds.X);
    fed.datasets.push_back(std::move(ds));
  }
  return fed;
}

}  // namespace fedkrr

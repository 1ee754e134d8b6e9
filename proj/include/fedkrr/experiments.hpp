#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "fedkrr/config.hpp"
#include "fedkrr/pricing.hpp"
#include "fedkrr/robustness.hpp"

namespace fedkrr {

// Synthetic teacher-student study: regret-optimal, accelerated and gradient
// descent trained on the same federations, traces evaluated under the
// posterior weights.
struct ConvergeConfig {
  int n_datasets = 5;
  int input_dim = 5;
  int samples = 100;
  int teacher_width = 10;
  int hidden_width = 500;
  double kappa = 0.0;
  double lambda = 0.0;
  double beta = 1.0;
  double eta = 10.0;
  int horizon = 1000;
  double gd_learning_rate = 7e-5;
  long gd_steps = 10000;
  long trace_stride = 1;
  double teacher_scale = 1.0;
  std::vector<std::uint64_t> seeds{1, 2, 3};
};

struct TraceRow {
  std::string method;
  std::uint64_t seed = 0;
  long iteration = 0;
  double loss = 0.0;
  double energy = 0.0;
  double regret = 0.0;
};

std::vector<TraceRow> run_converge(const ConvergeConfig& cfg);

struct WeightsConfig {
  int n_datasets = 5;
  int input_dim = 5;
  int samples = 100;
  int teacher_width = 10;
  int hidden_width = 500;
  double kappa = 0.0;
  double eta = 10.0;
  double teacher_scale = 1.0;
  std::uint64_t seed = 1;
};

struct WeightsRow {
  int dataset = 0;  // 1-based in output
  double score = 0.0;
  double prior = 0.0;
  double posterior = 0.0;
};

std::vector<WeightsRow> run_weights(const WeightsConfig& cfg);

struct PriceDatasetSpec {
  ModelParams model;
  int n_paths = 100;
};

struct PriceConfig {
  std::vector<PriceDatasetSpec> datasets;  // index 0 = main
  double strike = 100.0;
  double T_mat = 3.0;
  int n_dates = 9;
  int eval_paths = 10000;
  int substeps = 10;
  int fine_steps = 300;
  int assets = 2;
  int hidden_width = 300;
  double kappa = 2.0;
  double ro_lambda = 2.0;
  double ro_beta = 1.0;
  int ro_horizon = 1;
  bool itm_only = false;
  std::vector<std::string> methods;
  int n_runs = 10;
  std::uint64_t seed = 1;
};

// "lo-3", "lo-1@700", "mlo", "jo", "jso-1+2+3", "ro-100", "aro-50".
struct MethodSpec {
  std::string token;
  OptimizerKind kind;
  int paths_override = 0;  // lo-i@<n>: dataset i simulated with n paths
};
MethodSpec parse_method(const std::string& token, const PriceConfig& cfg);

struct OverviewRow {
  std::string method;
  double rp = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double mean_price = 0.0;
  double sigma_hat = 0.0;
  int n_runs = 0;
};

struct PriceOutputs {
  std::vector<OverviewRow> overview;
  std::vector<std::tuple<std::string, int, double>> runs;  // (method, run, price)
};

// Same paths and feature map for every method within a run; RP relative to
// the mean lo-1 price (lo-1 must be among the methods).
PriceOutputs run_price(const PriceConfig& cfg);

// 13 max-call datasets: one main plus every combination of
// r in {0.05, 0.5}, sigma in {0.15, 0.2, 0.25}, v_inf in {0.005, 0.015}.
PriceConfig experiment1_config();
// Rough main (H = 0.1), a dominating dissimilar set (r = 0.5), a close set.
PriceConfig experiment2_config();

struct RobustnessConfig {
  int n_datasets = 5;
  int input_dim = 5;
  int samples = 100;
  int teacher_width = 10;
  int hidden_width = 40;
  double kappa = 0.0;
  double lambda = 1.0;
  double beta = 1.0;
  double eta = 10.0;
  int horizon = 20;
  double teacher_scale = 1.0;
  std::uint64_t data_seed = 1;
  std::vector<double> q_grid{0.05, 0.1, 0.2, 0.4};
  std::vector<double> eps_grid{0.01, 0.05, 0.1};
  std::vector<std::uint64_t> attack_seeds{1, 2, 3, 4, 5};
};

RobustnessReport run_robustness(const RobustnessConfig& cfg);

struct BenchConfig {
  std::vector<int> n_list{4, 8, 16};
  int hidden_width = 32;  // feature dimension (no constant feature)
  int input_dim = 4;
  int teacher_width = 8;
  int samples = 64;
  int horizon = 50;
  int reps = 3;
  std::uint64_t seed = 7;
};

struct BenchRow {
  int n_datasets = 0;
  double general_ms = 0.0;
  double symmetric_ms = 0.0;
  double ratio = 0.0;
};

// Wall-clock of one full train (terminal assembly + backward + rollout) for
// the general and the symmetric algorithm on the same uniform-weight problem;
// best of `reps` repetitions.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

struct PlotPoint {
  long iteration = 0;
  double loss_mean = 0.0, loss_std = 0.0;
  double energy_mean = 0.0, energy_std = 0.0;
  double regret_mean = 0.0, regret_std = 0.0;
};

// Per-method mean and std over seeds at each traced iteration, gnuplot-ready.
// Population std, so a single seed yields an all-zero std column.
std::map<std::string, std::vector<PlotPoint>> emit_plot_data(
    const std::vector<TraceRow>& rows);

// Reads a trace.csv written by the converge subcommand; throws ConfigError
// on malformed input (wrong header, ragged rows, unparsable numbers).
std::vector<TraceRow> parse_trace_csv(const std::string& path);

// Config-file bindings (flat key=value; see configs/ for the schema).
ConvergeConfig converge_from_config(const Config& cfg);
WeightsConfig weights_from_config(const Config& cfg);
PriceConfig price_from_config(const Config& cfg);
RobustnessConfig robustness_from_config(const Config& cfg);
BenchConfig bench_from_config(const Config& cfg);

}  // namespace fedkrr

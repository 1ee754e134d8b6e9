#include "fedkrr/experiments.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <tuple>

#include "fedkrr/csv.hpp"

#include "fedkrr/accelerated.hpp"
#include "fedkrr/regret.hpp"
#include "fedkrr/rng.hpp"
#include "fedkrr/sharing.hpp"
#include "fedkrr/spectral.hpp"

namespace fedkrr {

namespace {

constexpr std::uint64_t kMapTag = 0xfea7a9ULL;
constexpr std::uint64_t kDataTag = 0xda7a5eULL;
constexpr std::uint64_t kPathTag = 0xd5ULL;
constexpr std::uint64_t kEvalTag = 0xe7ULL;

struct TeacherSetup {
  FeatureMap map;
  Federation fed;
};

TeacherSetup make_teacher(int n_datasets, int input_dim, int samples, int teacher_width,
                          int hidden_width, double teacher_scale, std::uint64_t seed) {
  TeacherSetup setup;
  setup.map = build_feature_map(input_dim, hidden_width, rng::key({seed, kMapTag}), false);
  setup.fed = gen_teacher_federation(n_datasets, input_dim,
                                     std::vector<int>(size_t(n_datasets), samples),
                                     teacher_width, setup.map, rng::key({seed, kDataTag}),
                                     teacher_scale);
  return setup;
}

void append_trace(std::vector<TraceRow>& rows, const std::string& method, std::uint64_t seed,
                  const Trajectory& traj, const RegretConfig& rc, const Vec& w,
                  const Federation& fed, const Vec& anchor, double lstar, long stride) {
  const Vec run = running_costs(traj, rc, anchor);
  const long T = traj.horizon();
  for (long t = 0; t <= T; ++t) {
    if (t % stride != 0 && t != T) continue;
    const double l = loss(traj.states.col(t), w, fed);
    rows.push_back({method, seed, t, l, run(t) + l, run(t) + l - lstar});
  }
}

}  // namespace

std::vector<TraceRow> run_converge(const ConvergeConfig& cfg) {
  require(cfg.horizon >= 1 && cfg.gd_steps >= 1, "converge: horizon and gd_steps must be >= 1");
  require(cfg.trace_stride >= 1, "converge: trace_stride must be >= 1");
  require(!cfg.seeds.empty(), "converge: seed list empty");
  std::vector<TraceRow> rows;
  const RegretConfig rc{cfg.lambda, cfg.beta, cfg.horizon};
  for (std::uint64_t seed : cfg.seeds) {
    const TeacherSetup setup = make_teacher(cfg.n_datasets, cfg.input_dim, cfg.samples,
                                            cfg.teacher_width, cfg.hidden_width,
                                            cfg.teacher_scale, seed);
    const Federation& fed = setup.fed;
    const LocalOptima optima = local_optima(fed, RidgeConfig{cfg.kappa});
    const Vec w = posterior_weights(scores(fed, optima), cfg.eta);
    const double lstar = ideal_loss(w, fed);

    const SpectralTape tape = spectral_backward(terminal_conditions(fed, w), rc, optima.stacked);
    const Trajectory ro = spectral_rollout(tape);
    append_trace(rows, "ro", seed, ro, rc, w, fed, optima.stacked, lstar, cfg.trace_stride);

    // Symmetric variant under the uniform-mean substitution: anchored at the
    // mean of the local optima and started there (synchronized agents).
    const FastSymmetricTape sym =
        fast_sym_backward(sym_terminal(fed), rc, cfg.n_datasets, optima.mean_theta);
    const Trajectory aro = fast_accelerated_rollout(sym, optima.stacked_mean);
    append_trace(rows, "aro", seed, aro, rc, w, fed, optima.stacked_mean, lstar,
                 cfg.trace_stride);

    // Gradient descent, streamed: iterates are not kept.
    Vec theta = optima.stacked;
    double run_acc = 0.0;
    double l = loss(theta, w, fed);
    rows.push_back({"gd", seed, 0, l, l, l - lstar});
    for (long t = 1; t <= cfg.gd_steps; ++t) {
      const Vec step = -cfg.gd_learning_rate * loss_gradient(theta, w, fed);
      theta += step;
      run_acc += cfg.beta * step.squaredNorm() +
                 cfg.lambda * (theta - optima.stacked).squaredNorm();
      l = loss(theta, w, fed);
      if (l > 1e12)
        throw NumericalError("regret",
                             "gradient descent diverged (loss > 1e12); reduce the learning rate");
      if (t % cfg.trace_stride == 0 || t == cfg.gd_steps)
        rows.push_back({"gd", seed, t, l, run_acc + l, run_acc + l - lstar});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const TraceRow& a, const TraceRow& b) {
    return std::tie(a.method, a.seed, a.iteration) < std::tie(b.method, b.seed, b.iteration);
  });
  return rows;
}

std::vector<WeightsRow> run_weights(const WeightsConfig& cfg) {
  const TeacherSetup setup = make_teacher(cfg.n_datasets, cfg.input_dim, cfg.samples,
                                          cfg.teacher_width, cfg.hidden_width,
                                          cfg.teacher_scale, cfg.seed);
  const LocalOptima optima = local_optima(setup.fed, RidgeConfig{cfg.kappa});
  const SharingResult sh = share(setup.fed, optima, cfg.eta);
  std::vector<WeightsRow> rows;
  for (int i = 0; i < cfg.n_datasets; ++i)
    rows.push_back({i + 1, sh.scores(i), sh.prior(i), sh.posterior(i)});
  return rows;
}

MethodSpec parse_method(const std::string& token, const PriceConfig& cfg) {
  const auto bad = [&](const std::string& why) {
    throw ConfigError("config: method '" + token + "': " + why);
  };
  MethodSpec spec;
  spec.token = token;
  const int n_sets = int(cfg.datasets.size());
  if (token == "mlo") {
    spec.kind = MloSpec{};
    return spec;
  }
  if (token == "jo") {
    spec.kind = JoSpec{};
    return spec;
  }
  if (token.rfind("lo-", 0) == 0) {
    std::string rest = token.substr(3);
    const auto at = rest.find('@');
    if (at != std::string::npos) {
      try {
        spec.paths_override = std::stoi(rest.substr(at + 1));
      } catch (...) {
        bad("bad path count after '@'");
      }
      if (spec.paths_override < 1) bad("path count must be >= 1");
      rest = rest.substr(0, at);
    }
    int idx = 0;
    try {
      idx = std::stoi(rest);
    } catch (...) {
      bad("bad dataset index");
    }
    if (idx < 1 || idx > n_sets) bad("dataset index out of range");
    spec.kind = LoSpec{idx - 1};
    return spec;
  }
  if (token.rfind("jso-", 0) == 0) {
    JsoSpec jso;
    for (const auto& part : [&] {
           std::vector<std::string> parts;
           std::string rest = token.substr(4), item;
           std::istringstream is(rest);
           while (std::getline(is, item, '+')) parts.push_back(item);
           return parts;
         }()) {
      int idx = 0;
      try {
        idx = std::stoi(part);
      } catch (...) {
        bad("bad subset index '" + part + "'");
      }
      if (idx < 1 || idx > n_sets) bad("subset index out of range");
      jso.subset.push_back(idx - 1);
    }
    if (jso.subset.empty()) bad("empty subset");
    spec.kind = jso;
    return spec;
  }
  if (token.rfind("ro-", 0) == 0 || token.rfind("aro-", 0) == 0) {
    const bool accelerated = token[0] == 'a';
    double eta = 0.0;
    try {
      eta = std::stod(token.substr(accelerated ? 4 : 3));
    } catch (...) {
      bad("bad eta");
    }
    if (eta <= 0.0) bad("eta must be > 0");
    if (accelerated)
      spec.kind = AroSpec{eta, cfg.ro_lambda, cfg.ro_beta, cfg.ro_horizon};
    else
      spec.kind = RoSpec{eta, cfg.ro_lambda, cfg.ro_beta, cfg.ro_horizon};
    return spec;
  }
  bad("unknown method");
  return spec;  // unreachable
}

namespace {

PathSet simulate_dataset(const PriceConfig& cfg, const ModelParams& model, int n_paths,
                         std::uint64_t seed) {
  if (model.hurst < 0.5)
    return simulate_rough_heston(model, cfg.assets, n_paths, cfg.n_dates, cfg.T_mat,
                                 cfg.fine_steps, seed);
  return simulate_heston(model, cfg.assets, n_paths, cfg.n_dates, cfg.T_mat, cfg.substeps,
                         seed);
}

}  // namespace

PriceOutputs run_price(const PriceConfig& cfg) {
  require(!cfg.datasets.empty(), "price: no datasets configured");
  require(cfg.n_runs >= 2, "price: n_runs must be >= 2");
  require(!cfg.methods.empty(), "price: no methods configured");
  std::vector<MethodSpec> specs;
  specs.reserve(cfg.methods.size());
  bool has_base = false;
  for (const auto& token : cfg.methods) {
    specs.push_back(parse_method(token, cfg));
    for (size_t i = 0; i + 1 < specs.size(); ++i)
      require(specs[i].token != token, "price: duplicate method '" + token + "'");
    if (token == "lo-1") has_base = true;
  }
  require(has_base, "price: methods must include lo-1 (the relative-performance base)");

  const double rate = cfg.datasets[0].model.rate;
  const RidgeConfig ridge{cfg.kappa};
  const RlsmOptions opts{cfg.itm_only};
  std::map<std::string, std::vector<double>> prices;
  for (const auto& s : specs) prices[s.token].assign(size_t(cfg.n_runs), 0.0);

  for (int run = 0; run < cfg.n_runs; ++run) {
    const std::uint64_t run_seed = rng::key({cfg.seed, std::uint64_t(run)});
    const FeatureMap map =
        build_feature_map(cfg.assets, cfg.hidden_width, rng::key({run_seed, kMapTag}), true);
    std::vector<PathSet> train(cfg.datasets.size());
    for (size_t i = 0; i < cfg.datasets.size(); ++i)
      train[i] = simulate_dataset(cfg, cfg.datasets[i].model, cfg.datasets[i].n_paths,
                                  rng::key({run_seed, kPathTag, std::uint64_t(i)}));
    const PathSet eval_paths = simulate_dataset(cfg, cfg.datasets[0].model, cfg.eval_paths,
                                                rng::key({run_seed, kEvalTag}));
    // Oversampled variants share the dataset's seed, so the standard paths
    // are a prefix of the oversampled ones.
    std::map<std::pair<int, int>, PathSet> oversampled;
    for (const auto& s : specs) {
      if (s.paths_override == 0) continue;
      const int ds = std::get<LoSpec>(s.kind).dataset;
      const auto key = std::make_pair(ds, s.paths_override);
      if (!oversampled.count(key))
        oversampled[key] =
            simulate_dataset(cfg, cfg.datasets[ds].model, s.paths_override,
                             rng::key({run_seed, kPathTag, std::uint64_t(ds)}));
    }
    for (const auto& s : specs) {
      const std::vector<PathSet>* use = &train;
      std::vector<PathSet> swapped;
      if (s.paths_override > 0) {
        const int ds = std::get<LoSpec>(s.kind).dataset;
        swapped = train;
        swapped[ds] = oversampled.at({ds, s.paths_override});
        use = &swapped;
      }
      prices[s.token][run] =
          rlsm_price(*use, eval_paths, cfg.strike, rate, map, ridge, s.kind, opts).price;
    }
  }

  double base = 0.0;
  for (double x : prices["lo-1"]) base += x;
  base /= cfg.n_runs;
  require(base > 0.0, "price: lo-1 mean price is zero; relative performance undefined");

  PriceOutputs out;
  for (const auto& s : specs) {
    const auto& pr = prices[s.token];
    std::vector<double> rps(pr.size());
    double mean_price = 0.0;
    for (size_t r = 0; r < pr.size(); ++r) {
      rps[r] = pr[r] / base;
      mean_price += pr[r];
    }
    mean_price /= double(pr.size());
    const EvalStats st = confidence_interval(rps);
    out.overview.push_back(
        {s.token, st.RP, st.ci_low, st.ci_high, mean_price, st.sigma_hat, st.n_runs});
    for (size_t r = 0; r < pr.size(); ++r) out.runs.emplace_back(s.token, int(r), pr[r]);
  }
  return out;
}

PriceConfig experiment1_config() {
  PriceConfig cfg;
  ModelParams main;
  main.rate = 0.05;
  main.dividend = 0.1;
  main.mean_reversion = 2.0;
  main.v_inf = 0.01;
  main.sigma = 0.2;
  main.rho = -0.3;
  main.X0 = 100.0;
  main.v0 = main.v_inf;
  main.hurst = 0.5;
  cfg.datasets.push_back({main, 100});
  for (double r : {0.05, 0.5}) {
    for (double sigma : {0.15, 0.2, 0.25}) {
      for (double v_inf : {0.005, 0.015}) {
        ModelParams m = main;
        m.rate = r;
        m.sigma = sigma;
        m.v_inf = v_inf;
        m.v0 = v_inf;
        cfg.datasets.push_back({m, 100});
      }
    }
  }
  for (int i = 1; i <= 13; ++i) cfg.methods.push_back("lo-" + std::to_string(i));
  cfg.methods.insert(cfg.methods.end(),
                     {"mlo", "jo", "jso-1+2+3+4+5+6+7", "ro-10", "ro-100", "ro-500",
                      "lo-1@700", "lo-1@5000"});
  return cfg;
}

PriceConfig experiment2_config() {
  PriceConfig cfg;
  ModelParams main;
  main.rate = 0.05;
  main.dividend = 0.1;
  main.mean_reversion = 2.0;
  main.v_inf = 0.01;
  main.sigma = 0.2;
  main.rho = -0.3;
  main.X0 = 100.0;
  main.v0 = main.v_inf;
  main.hurst = 0.1;
  cfg.datasets.push_back({main, 100});
  ModelParams second = main;
  second.hurst = 0.5;
  second.rate = 0.5;
  cfg.datasets.push_back({second, 5000});
  ModelParams third = main;
  third.hurst = 0.5;
  cfg.datasets.push_back({third, 100});
  cfg.methods = {"lo-1", "lo-2", "lo-3", "mlo", "jo", "ro-50", "ro-100"};
  return cfg;
}

RobustnessReport run_robustness(const RobustnessConfig& cfg) {
  const TeacherSetup setup = make_teacher(cfg.n_datasets, cfg.input_dim, cfg.samples,
                                          cfg.teacher_width, cfg.hidden_width,
                                          cfg.teacher_scale, cfg.data_seed);
  const RidgeConfig ridge{cfg.kappa};
  const LocalOptima optima = local_optima(setup.fed, ridge);
  const Vec w = posterior_weights(scores(setup.fed, optima), cfg.eta);
  return robustness_sweep(setup.fed, w, RegretConfig{cfg.lambda, cfg.beta, cfg.horizon}, ridge,
                          cfg.q_grid, cfg.eps_grid, cfg.attack_seeds);
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  require(cfg.reps >= 1, "bench: reps must be >= 1");
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  double checksum = 0.0;
  for (int N : cfg.n_list) {
    const std::uint64_t seed = rng::key({cfg.seed, std::uint64_t(N)});
    const TeacherSetup setup = make_teacher(N, cfg.input_dim, cfg.samples, cfg.teacher_width,
                                            cfg.hidden_width, 1.0, seed);
    const Federation& fed = setup.fed;
    const LocalOptima optima = local_optima(fed, RidgeConfig{0.0});
    const Vec w = Vec::Constant(N, 1.0 / double(N));
    const RegretConfig rc{0.0, 1.0, cfg.horizon};
    BenchRow row;
    row.n_datasets = N;
    row.general_ms = 1e300;
    row.symmetric_ms = 1e300;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const auto t0 = clock::now();
      const RiccatiTape tape =
          backward_riccati(terminal_conditions(fed, w), rc, optima.stacked_mean);
      const Trajectory traj = forward_rollout(tape, optima.stacked);
      const auto t1 = clock::now();
      checksum += traj.states.col(cfg.horizon).sum();
      row.general_ms = std::min(
          row.general_ms, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const auto t0 = clock::now();
      const SymmetricTape tape = sym_backward(sym_terminal(fed), rc, N, optima.mean_theta);
      const Trajectory traj = accelerated_rollout(tape, optima.stacked);
      const auto t1 = clock::now();
      checksum += traj.states.col(cfg.horizon).sum();
      row.symmetric_ms = std::min(
          row.symmetric_ms, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    row.ratio = row.general_ms / row.symmetric_ms;
    rows.push_back(row);
  }
  if (!std::isfinite(checksum))
    throw NumericalError("regret", "bench produced non-finite iterates");
  return rows;
}

std::map<std::string, std::vector<PlotPoint>> emit_plot_data(
    const std::vector<TraceRow>& rows) {
  std::map<std::string, std::map<long, std::array<std::vector<double>, 3>>> cells;
  for (const auto& r : rows) {
    auto& cell = cells[r.method][r.iteration];
    cell[0].push_back(r.loss);
    cell[1].push_back(r.energy);
    cell[2].push_back(r.regret);
  }
  const auto stats = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= double(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return std::make_pair(mean, std::sqrt(var / double(xs.size())));
  };
  std::map<std::string, std::vector<PlotPoint>> out;
  for (const auto& [method, by_iter] : cells) {
    auto& series = out[method];
    for (const auto& [iter, cell] : by_iter) {
      PlotPoint p;
      p.iteration = iter;
      std::tie(p.loss_mean, p.loss_std) = stats(cell[0]);
      std::tie(p.energy_mean, p.energy_std) = stats(cell[1]);
      std::tie(p.regret_mean, p.regret_std) = stats(cell[2]);
      series.push_back(p);
    }
  }
  return out;
}

namespace {

double trace_num(const std::string& cell, const std::string& path) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (errno != 0 || end == cell.c_str() || *end != '\0')
    throw ConfigError("trace: malformed number '" + cell + "' in " + path);
  return v;
}

}  // namespace

std::vector<TraceRow> parse_trace_csv(const std::string& path) {
  csv::Table table;
  try {
    table = csv::read_table(path);
  } catch (const std::exception& e) {
    throw ConfigError("trace: " + std::string(e.what()));
  }
  const std::vector<std::string> expected{"method", "seed",   "iteration",
                                          "loss",   "energy", "regret"};
  if (table.header != expected)
    throw ConfigError("trace: unexpected header in " + path);
  std::vector<TraceRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& cells : table.rows) {
    if (cells.size() != expected.size())
      throw ConfigError("trace: ragged row in " + path);
    TraceRow r;
    r.method = cells[0];
    r.seed = std::uint64_t(trace_num(cells[1], path));
    r.iteration = long(trace_num(cells[2], path));
    r.loss = trace_num(cells[3], path);
    r.energy = trace_num(cells[4], path);
    r.regret = trace_num(cells[5], path);
    rows.push_back(std::move(r));
  }
  return rows;
}

ConvergeConfig converge_from_config(const Config& c) {
  ConvergeConfig cfg;
  cfg.n_datasets = c.get_int("n_datasets", cfg.n_datasets);
  cfg.input_dim = c.get_int("input_dim", cfg.input_dim);
  cfg.samples = c.get_int("samples", cfg.samples);
  cfg.teacher_width = c.get_int("teacher_width", cfg.teacher_width);
  cfg.hidden_width = c.get_int("hidden", cfg.hidden_width);
  cfg.kappa = c.get_double("kappa", cfg.kappa);
  cfg.lambda = c.get_double("lambda", cfg.lambda);
  cfg.beta = c.get_double("beta", cfg.beta);
  cfg.eta = c.get_double("eta", cfg.eta);
  cfg.horizon = c.get_int("horizon", cfg.horizon);
  cfg.gd_learning_rate = c.get_double("gd_learning_rate", cfg.gd_learning_rate);
  cfg.gd_steps = c.get_long("gd_steps", cfg.gd_steps);
  cfg.trace_stride = c.get_long("trace_stride", cfg.trace_stride);
  cfg.teacher_scale = c.get_double("teacher_scale", cfg.teacher_scale);
  cfg.seeds = c.get_u64s("seeds", cfg.seeds);
  return cfg;
}

WeightsConfig weights_from_config(const Config& c) {
  WeightsConfig cfg;
  cfg.n_datasets = c.get_int("n_datasets", cfg.n_datasets);
  cfg.input_dim = c.get_int("input_dim", cfg.input_dim);
  cfg.samples = c.get_int("samples", cfg.samples);
  cfg.teacher_width = c.get_int("teacher_width", cfg.teacher_width);
  cfg.hidden_width = c.get_int("hidden", cfg.hidden_width);
  cfg.kappa = c.get_double("kappa", cfg.kappa);
  cfg.eta = c.get_double("eta", cfg.eta);
  cfg.teacher_scale = c.get_double("teacher_scale", cfg.teacher_scale);
  cfg.seed = c.get_u64("seed", cfg.seed);
  return cfg;
}

PriceConfig price_from_config(const Config& c) {
  const std::string preset = c.get_str("preset", "none");
  PriceConfig cfg;
  if (preset == "experiment1")
    cfg = experiment1_config();
  else if (preset == "experiment2")
    cfg = experiment2_config();
  else if (preset != "none")
    throw ConfigError("config: unknown preset '" + preset + "'");
  cfg.strike = c.get_double("strike", cfg.strike);
  cfg.T_mat = c.get_double("maturity", cfg.T_mat);
  cfg.n_dates = c.get_int("dates", cfg.n_dates);
  cfg.eval_paths = c.get_int("eval_paths", cfg.eval_paths);
  cfg.substeps = c.get_int("substeps", cfg.substeps);
  cfg.fine_steps = c.get_int("fine_steps", cfg.fine_steps);
  cfg.assets = c.get_int("assets", cfg.assets);
  cfg.hidden_width = c.get_int("hidden", cfg.hidden_width);
  cfg.kappa = c.get_double("kappa", cfg.kappa);
  cfg.ro_lambda = c.get_double("ro_lambda", cfg.ro_lambda);
  cfg.ro_beta = c.get_double("ro_beta", cfg.ro_beta);
  cfg.ro_horizon = c.get_int("ro_horizon", cfg.ro_horizon);
  cfg.itm_only = c.get_bool("itm_only", cfg.itm_only);
  cfg.methods = c.get_strs("methods", cfg.methods);
  cfg.n_runs = c.get_int("n_runs", cfg.n_runs);
  cfg.seed = c.get_u64("seed", cfg.seed);
  const int n_datasets = c.get_int("n_datasets", int(cfg.datasets.size()));
  require(n_datasets >= 1, "config: n_datasets must be >= 1");
  const PriceDatasetSpec tmpl = cfg.datasets.empty() ? PriceDatasetSpec{} : cfg.datasets[0];
  cfg.datasets.resize(size_t(n_datasets), tmpl);
  for (int i = 0; i < n_datasets; ++i) {
    const std::string prefix = "dataset." + std::to_string(i + 1) + ".";
    ModelParams& m = cfg.datasets[size_t(i)].model;
    m.rate = c.get_double(prefix + "r", m.rate);
    m.dividend = c.get_double(prefix + "delta", m.dividend);
    m.mean_reversion = c.get_double(prefix + "k", m.mean_reversion);
    m.v_inf = c.get_double(prefix + "v_inf", m.v_inf);
    m.sigma = c.get_double(prefix + "sigma", m.sigma);
    m.rho = c.get_double(prefix + "rho", m.rho);
    m.X0 = c.get_double(prefix + "x0", m.X0);
    m.v0 = c.get_double(prefix + "v0", m.v0);
    m.hurst = c.get_double(prefix + "hurst", m.hurst);
    cfg.datasets[size_t(i)].n_paths =
        c.get_int(prefix + "paths", cfg.datasets[size_t(i)].n_paths);
  }
  return cfg;
}

RobustnessConfig robustness_from_config(const Config& c) {
  RobustnessConfig cfg;
  cfg.n_datasets = c.get_int("n_datasets", cfg.n_datasets);
  cfg.input_dim = c.get_int("input_dim", cfg.input_dim);
  cfg.samples = c.get_int("samples", cfg.samples);
  cfg.teacher_width = c.get_int("teacher_width", cfg.teacher_width);
  cfg.hidden_width = c.get_int("hidden", cfg.hidden_width);
  cfg.kappa = c.get_double("kappa", cfg.kappa);
  cfg.lambda = c.get_double("lambda", cfg.lambda);
  cfg.beta = c.get_double("beta", cfg.beta);
  cfg.eta = c.get_double("eta", cfg.eta);
  cfg.horizon = c.get_int("horizon", cfg.horizon);
  cfg.teacher_scale = c.get_double("teacher_scale", cfg.teacher_scale);
  cfg.data_seed = c.get_u64("seed", cfg.data_seed);
  cfg.q_grid = c.get_doubles("q_grid", cfg.q_grid);
  cfg.eps_grid = c.get_doubles("eps_grid", cfg.eps_grid);
  cfg.attack_seeds = c.get_u64s("attack_seeds", cfg.attack_seeds);
  return cfg;
}

BenchConfig bench_from_config(const Config& c) {
  BenchConfig cfg;
  std::vector<double> n_list(cfg.n_list.begin(), cfg.n_list.end());
  n_list = c.get_doubles("n_list", n_list);
  cfg.n_list.clear();
  for (double n : n_list) {
    require(n >= 2.0 && n == std::floor(n), "config: n_list entries must be integers >= 2");
    cfg.n_list.push_back(int(n));
  }
  cfg.hidden_width = c.get_int("hidden", cfg.hidden_width);
  cfg.input_dim = c.get_int("input_dim", cfg.input_dim);
  cfg.teacher_width = c.get_int("teacher_width", cfg.teacher_width);
  cfg.samples = c.get_int("samples", cfg.samples);
  cfg.horizon = c.get_int("horizon", cfg.horizon);
  cfg.reps = c.get_int("reps", cfg.reps);
  cfg.seed = c.get_u64("seed", cfg.seed);
  return cfg;
}

}  // namespace fedkrr

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fedkrr/config.hpp"
#include "fedkrr/csv.hpp"
#include "fedkrr/experiments.hpp"
#include "fedkrr/manifest.hpp"

namespace fs = std::filesystem;
using namespace fedkrr;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;
  CLI::Option* seed_opt = nullptr;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "config file (key = value lines)")
      ->check(CLI::ExistingFile);
  sub->add_option("--output-dir", f.output_dir, "directory for result files")
      ->capture_default_str();
  f.seed_opt = sub->add_option("--seed", f.seed, "override the config seed");
  sub->add_option("--set", f.overrides, "override a config key (key=value, repeatable)");
}

Config load_config(const CommonFlags& f) {
  Config cfg = f.config_path.empty() ? Config() : Config::from_file(f.config_path);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed_opt != nullptr && f.seed_opt->count() > 0)
    cfg.set("seed", std::to_string(f.seed));
  return cfg;
}

void reject_unknown(const Config& cfg) {
  const auto unused = cfg.unused_keys();
  if (unused.empty()) return;
  std::string msg = "config: unknown key(s) in " + cfg.origin() + ":";
  for (const auto& k : unused) msg += " " + k;
  throw ConfigError(msg);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw ConfigError("write failed: " + path.string());
}

void cmd_weights(const CommonFlags& f) {
  Config cfg = load_config(f);
  const WeightsConfig wc = weights_from_config(cfg);
  reject_unknown(cfg);
  const auto rows = run_weights(wc);
  fs::create_directories(f.output_dir);
  std::ostringstream os;
  os << "dataset,score,prior,posterior\n";
  for (const auto& r : rows)
    os << r.dataset << ',' << csv::format(r.score) << ',' << csv::format(r.prior) << ','
       << csv::format(r.posterior) << '\n';
  write_text(fs::path(f.output_dir) / "weights.csv", os.str());
  write_manifest(f.output_dir, "weights", cfg, {"weights.csv"});
}

void cmd_converge(const CommonFlags& f) {
  Config cfg = load_config(f);
  const ConvergeConfig cc = converge_from_config(cfg);
  reject_unknown(cfg);
  const auto rows = run_converge(cc);
  fs::create_directories(f.output_dir);
  std::ostringstream os;
  os << "method,seed,iteration,loss,energy,regret\n";
  for (const auto& r : rows)
    os << r.method << ',' << r.seed << ',' << r.iteration << ',' << csv::format(r.loss)
       << ',' << csv::format(r.energy) << ',' << csv::format(r.regret) << '\n';
  write_text(fs::path(f.output_dir) / "trace.csv", os.str());
  std::vector<std::string> outputs{"trace.csv"};
  for (const auto& [method, series] : emit_plot_data(rows)) {
    std::ostringstream ps;
    ps << "# iteration loss_mean loss_std energy_mean energy_std regret_mean regret_std\n";
    for (const auto& p : series)
      ps << p.iteration << ' ' << csv::format(p.loss_mean) << ' ' << csv::format(p.loss_std)
         << ' ' << csv::format(p.energy_mean) << ' ' << csv::format(p.energy_std) << ' '
         << csv::format(p.regret_mean) << ' ' << csv::format(p.regret_std) << '\n';
    const std::string name = "plot_" + method + ".dat";
    write_text(fs::path(f.output_dir) / name, ps.str());
    outputs.push_back(name);
  }
  write_manifest(f.output_dir, "converge", cfg, outputs);
}

void cmd_price(const CommonFlags& f) {
  Config cfg = load_config(f);
  const PriceConfig pc = price_from_config(cfg);
  reject_unknown(cfg);
  const PriceOutputs out = run_price(pc);
  fs::create_directories(f.output_dir);
  std::ostringstream ov;
  ov << "method,rp,ci_low,ci_high,mean_price,n_runs\n";
  for (const auto& r : out.overview)
    ov << r.method << ',' << csv::format(r.rp) << ',' << csv::format(r.ci_low) << ','
       << csv::format(r.ci_high) << ',' << csv::format(r.mean_price) << ',' << r.n_runs
       << '\n';
  write_text(fs::path(f.output_dir) / "training_overview.csv", ov.str());
  std::ostringstream pr;
  pr << "method,run,price\n";
  for (const auto& [method, run, price] : out.runs)
    pr << method << ',' << run << ',' << csv::format(price) << '\n';
  write_text(fs::path(f.output_dir) / "prices.csv", pr.str());
  write_manifest(f.output_dir, "price", cfg, {"prices.csv", "training_overview.csv"});
}

void cmd_robustness(const CommonFlags& f) {
  Config cfg = load_config(f);
  const RobustnessConfig rc = robustness_from_config(cfg);
  reject_unknown(cfg);
  const RobustnessReport report = run_robustness(rc);
  fs::create_directories(f.output_dir);
  std::ostringstream os;
  os << "q,eps,seed,delta_l,bound,ratio\n";
  for (const auto& r : report.rows)
    os << csv::format(r.q) << ',' << csv::format(r.eps) << ',' << r.seed << ','
       << csv::format(r.delta_L) << ',' << csv::format(r.bound_factor) << ','
       << csv::format(r.ratio) << '\n';
  os << "# summary max_ratio=" << csv::format(report.max_ratio)
     << " median_ratio=" << csv::format(report.median_ratio) << '\n';
  write_text(fs::path(f.output_dir) / "robustness.csv", os.str());
  write_manifest(f.output_dir, "robustness", cfg, {"robustness.csv"});
}

void cmd_bench(const CommonFlags& f) {
  Config cfg = load_config(f);
  const BenchConfig bc = bench_from_config(cfg);
  reject_unknown(cfg);
  const auto rows = run_bench(bc);
  fs::create_directories(f.output_dir);
  std::ostringstream os;
  os << "n_datasets,general_ms,symmetric_ms,ratio\n";
  for (const auto& r : rows)
    os << r.n_datasets << ',' << csv::format(r.general_ms) << ','
       << csv::format(r.symmetric_ms) << ',' << csv::format(r.ratio) << '\n';
  write_text(fs::path(f.output_dir) / "bench.csv", os.str());
  write_manifest(f.output_dir, "bench", cfg, {"bench.csv"});
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("FEDKRR_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) Eigen::setNbThreads(n);
  }

  CLI::App app{"federated transfer learning for finite-rank kernel ridge regressors"};
  app.require_subcommand(1);

  CommonFlags wf, cf, pf, rf, bf;
  CLI::App* weights = app.add_subcommand("weights", "dataset scores and sharing weights");
  add_common(weights, wf);
  CLI::App* converge = app.add_subcommand("converge", "synthetic convergence study traces");
  add_common(converge, cf);
  CLI::App* price = app.add_subcommand("price", "Bermudan max-call pricing experiments");
  add_common(price, pf);
  CLI::App* robustness =
      app.add_subcommand("robustness", "data-poisoning sensitivity sweep");
  add_common(robustness, rf);
  CLI::App* bench =
      app.add_subcommand("bench", "general vs symmetric training wall-clock scaling");
  add_common(bench, bf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(weights)) cmd_weights(wf);
    if (app.got_subcommand(converge)) cmd_converge(cf);
    if (app.got_subcommand(price)) cmd_price(pf);
    if (app.got_subcommand(robustness)) cmd_robustness(rf);
    if (app.got_subcommand(bench)) cmd_bench(bf);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure in module '" << e.module() << "': " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

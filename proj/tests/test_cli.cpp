#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fedkrr/config.hpp"
#include "fedkrr/experiments.hpp"

namespace fs = std::filesystem;
using namespace fedkrr;

namespace {

const fs::path kWork = fs::temp_directory_path() / "fedkrr_cli_tests";

fs::path fresh_dir(const std::string& name) {
  const fs::path d = kWork / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  REQUIRE(bool(os));
  os << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(bool(is));
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

int run_cli(const std::string& args, const std::string& redirect = ">/dev/null 2>&1") {
  const std::string cmd = std::string("\"") + FEDKRR_CLI_PATH + "\" " + args + " " + redirect;
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

const char* kWeightsCfg =
    "n_datasets = 4\n"
    "input_dim = 3\n"
    "samples = 20\n"
    "teacher_width = 4\n"
    "hidden = 16\n"
    "eta = 5\n";

const char* kConvergeCfg =
    "n_datasets = 2\n"
    "input_dim = 2\n"
    "samples = 12\n"
    "teacher_width = 3\n"
    "hidden = 8\n"
    "eta = 10\n"
    "lambda = 0\n"
    "beta = 1\n"
    "horizon = 4\n"
    "gd_learning_rate = 2e-4\n"
    "gd_steps = 12\n"
    "trace_stride = 4\n"
    "seeds = 1, 2\n";

const char* kPriceCfg =
    "n_datasets = 2\n"
    "assets = 1\n"
    "dates = 3\n"
    "maturity = 1.0\n"
    "eval_paths = 80\n"
    "substeps = 2\n"
    "hidden = 10\n"
    "kappa = 2\n"
    "n_runs = 2\n"
    "methods = lo-1, jo, ro-100\n"
    "seed = 3\n"
    "dataset.1.r = 0.05\n"
    "dataset.1.delta = 0.1\n"
    "dataset.1.k = 2\n"
    "dataset.1.v_inf = 0.01\n"
    "dataset.1.sigma = 0.2\n"
    "dataset.1.rho = -0.3\n"
    "dataset.1.v0 = 0.01\n"
    "dataset.1.paths = 40\n"
    "dataset.2.r = 0.5\n"
    "dataset.2.delta = 0.1\n"
    "dataset.2.k = 2\n"
    "dataset.2.v_inf = 0.01\n"
    "dataset.2.sigma = 0.2\n"
    "dataset.2.rho = -0.3\n"
    "dataset.2.v0 = 0.01\n"
    "dataset.2.paths = 40\n";

}  // namespace

TEST_CASE("weights subcommand writes the score table and a complete manifest") {
  const fs::path dir = fresh_dir("weights");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, kWeightsCfg);
  const int rc = run_cli("weights --config " + cfg.string() + " --output-dir " +
                         (dir / "out").string());
  REQUIRE(rc == 0);

  const std::string table = slurp(dir / "out" / "weights.csv");
  const auto rows = lines_of(table);
  REQUIRE(rows.size() == 5);  // header + one row per dataset
  CHECK(rows[0] == "dataset,score,prior,posterior");

  const std::string manifest = slurp(dir / "out" / "manifest.json");
  CHECK(manifest.find("\"subcommand\": \"weights\"") != std::string::npos);
  CHECK(manifest.find("weights.csv") != std::string::npos);
  // Every consumed key appears with its resolved value, defaults included.
  CHECK(manifest.find("\"eta\": \"5\"") != std::string::npos);
  CHECK(manifest.find("\"kappa\"") != std::string::npos);
  CHECK(manifest.find("\"seed\"") != std::string::npos);

  const fs::path dir2 = fresh_dir("weights_rerun");
  REQUIRE(run_cli("weights --config " + cfg.string() + " --output-dir " + dir2.string()) == 0);
  CHECK(slurp(dir2 / "weights.csv") == table);
}

TEST_CASE("converge subcommand emits a sorted trace and per-method plot files") {
  const fs::path dir = fresh_dir("converge");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, kConvergeCfg);
  const fs::path out = dir / "out";
  REQUIRE(run_cli("converge --config " + cfg.string() + " --output-dir " + out.string()) == 0);

  const auto rows = parse_trace_csv((out / "trace.csv").string());
  std::set<std::string> methods;
  std::set<std::uint64_t> seeds;
  for (const auto& r : rows) {
    methods.insert(r.method);
    seeds.insert(r.seed);
    CHECK(std::isfinite(r.loss));
    CHECK(std::isfinite(r.energy));
    CHECK(std::isfinite(r.regret));
  }
  CHECK(methods == std::set<std::string>{"aro", "gd", "ro"});
  CHECK(seeds == std::set<std::uint64_t>{1, 2});
  long ro_max = -1, gd_max = -1;
  for (const auto& r : rows) {
    if (r.method == "ro" && r.seed == 1) ro_max = std::max(ro_max, r.iteration);
    if (r.method == "gd" && r.seed == 1) gd_max = std::max(gd_max, r.iteration);
  }
  CHECK(ro_max == 4);
  CHECK(gd_max == 12);

  for (const char* name : {"plot_gd.dat", "plot_ro.dat", "plot_aro.dat"}) {
    const std::string plot = slurp(out / name);
    CHECK(plot.rfind("# iteration loss_mean loss_std", 0) == 0);
  }

  const fs::path out2 = fresh_dir("converge_rerun");
  REQUIRE(run_cli("converge --config " + cfg.string() + " --output-dir " + out2.string()) == 0);
  CHECK(slurp(out2 / "trace.csv") == slurp(out / "trace.csv"));
  CHECK(slurp(out2 / "plot_ro.dat") == slurp(out / "plot_ro.dat"));
}

TEST_CASE("numerical failures exit with code 2 and name the module") {
  const fs::path dir = fresh_dir("diverge");
  const fs::path cfg = dir / "run.cfg";
  std::string text(kConvergeCfg);
  const auto at = text.find("gd_learning_rate = 2e-4");
  REQUIRE(at != std::string::npos);
  text.replace(at, std::string("gd_learning_rate = 2e-4").size(), "gd_learning_rate = 10.0");
  write_file(cfg, text);
  const fs::path err = dir / "err.txt";
  const int rc = run_cli("converge --config " + cfg.string() + " --output-dir " +
                             (dir / "out").string(),
                         ">/dev/null 2> " + err.string());
  CHECK(rc == 2);
  const std::string msg = slurp(err);
  CHECK(msg.find("numerical failure in module 'regret'") != std::string::npos);
}

TEST_CASE("configuration mistakes exit with code 1") {
  const fs::path dir = fresh_dir("badcfg");

  SUBCASE("missing config file") {
    CHECK(run_cli("weights --config " + (dir / "nope.cfg").string() + " --output-dir " +
                  dir.string()) == 1);
  }

  SUBCASE("unknown key") {
    const fs::path cfg = dir / "unknown.cfg";
    write_file(cfg, std::string(kWeightsCfg) + "typo_key = 3\n");
    CHECK(run_cli("weights --config " + cfg.string() + " --output-dir " + dir.string()) == 1);
  }

  SUBCASE("malformed line") {
    const fs::path cfg = dir / "nokv.cfg";
    write_file(cfg, "just words, no assignment\n");
    CHECK(run_cli("weights --config " + cfg.string() + " --output-dir " + dir.string()) == 1);
  }

  SUBCASE("price without the lo-1 base method") {
    const fs::path cfg = dir / "nobase.cfg";
    std::string text(kPriceCfg);
    const auto at = text.find("methods = lo-1, jo, ro-100");
    REQUIRE(at != std::string::npos);
    text.replace(at, std::string("methods = lo-1, jo, ro-100").size(), "methods = jo, mlo");
    write_file(cfg, text);
    CHECK(run_cli("price --config " + cfg.string() + " --output-dir " + dir.string()) == 1);
  }

  SUBCASE("price with an unparseable method token") {
    const fs::path cfg = dir / "badmethod.cfg";
    std::string text(kPriceCfg);
    const auto at = text.find("methods = lo-1, jo, ro-100");
    REQUIRE(at != std::string::npos);
    text.replace(at, std::string("methods = lo-1, jo, ro-100").size(), "methods = lo-1, zz-9");
    write_file(cfg, text);
    CHECK(run_cli("price --config " + cfg.string() + " --output-dir " + dir.string()) == 1);
  }

  SUBCASE("no subcommand") { CHECK(run_cli("") == 1); }
}

TEST_CASE("command-line overrides land in the manifest and the results") {
  const fs::path dir = fresh_dir("overrides");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, kWeightsCfg);
  const fs::path a = dir / "a";
  const fs::path b = dir / "b";
  REQUIRE(run_cli("weights --config " + cfg.string() + " --output-dir " + a.string()) == 0);
  REQUIRE(run_cli("weights --config " + cfg.string() + " --output-dir " + b.string() +
                  " --set eta=0.5 --seed 9") == 0);
  const std::string manifest = slurp(b / "manifest.json");
  CHECK(manifest.find("\"eta\": \"0.5\"") != std::string::npos);
  CHECK(manifest.find("\"seed\": \"9\"") != std::string::npos);
  CHECK(slurp(a / "weights.csv") != slurp(b / "weights.csv"));
}

TEST_CASE("price subcommand writes the overview and per-run tables") {
  const fs::path dir = fresh_dir("price");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg, kPriceCfg);
  const fs::path out = dir / "out";
  REQUIRE(run_cli("price --config " + cfg.string() + " --output-dir " + out.string()) == 0);

  const std::string overview = slurp(out / "training_overview.csv");
  const auto rows = lines_of(overview);
  REQUIRE(rows.size() == 4);  // header + 3 methods, config order
  CHECK(rows[0] == "method,rp,ci_low,ci_high,mean_price,n_runs");
  CHECK(rows[1].rfind("lo-1,", 0) == 0);
  CHECK(rows[2].rfind("jo,", 0) == 0);
  CHECK(rows[3].rfind("ro-100,", 0) == 0);
  {
    std::istringstream is(rows[1].substr(5));
    std::string cell;
    std::getline(is, cell, ',');
    CHECK(std::abs(std::strtod(cell.c_str(), nullptr) - 1.0) <= 1e-12);  // base method
  }

  const auto prices = lines_of(slurp(out / "prices.csv"));
  REQUIRE(prices.size() == 1 + 3 * 2);  // header + methods x runs
  CHECK(prices[0] == "method,run,price");

  const fs::path out2 = fresh_dir("price_rerun");
  REQUIRE(run_cli("price --config " + cfg.string() + " --output-dir " + out2.string()) == 0);
  CHECK(slurp(out2 / "training_overview.csv") == overview);
}

TEST_CASE("robustness subcommand writes the sweep with a summary") {
  const fs::path dir = fresh_dir("robustness");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg,
             "n_datasets = 3\n"
             "input_dim = 2\n"
             "samples = 15\n"
             "teacher_width = 3\n"
             "hidden = 10\n"
             "horizon = 5\n"
             "q_grid = 0.2, 0.4\n"
             "eps_grid = 0.1\n"
             "attack_seeds = 1, 2\n");
  const fs::path out = dir / "out";
  REQUIRE(run_cli("robustness --config " + cfg.string() + " --output-dir " + out.string()) ==
          0);
  const std::string text = slurp(out / "robustness.csv");
  const auto rows = lines_of(text);
  CHECK(rows[0] == "q,eps,seed,delta_l,bound,ratio");
  CHECK(text.find("# summary max_ratio=") != std::string::npos);
  long data_rows = 0;
  for (const auto& r : rows)
    if (!r.empty() && r[0] != 'q' && r[0] != '#') ++data_rows;
  CHECK(data_rows == 2 * 1 * 2);
}

TEST_CASE("bench subcommand reports one timing row per federation size") {
  const fs::path dir = fresh_dir("bench");
  const fs::path cfg = dir / "run.cfg";
  write_file(cfg,
             "n_list = 2, 3\n"
             "hidden = 8\n"
             "input_dim = 2\n"
             "teacher_width = 3\n"
             "samples = 10\n"
             "horizon = 3\n"
             "reps = 1\n");
  const fs::path out = dir / "out";
  REQUIRE(run_cli("bench --config " + cfg.string() + " --output-dir " + out.string()) == 0);
  const auto rows = lines_of(slurp(out / "bench.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "n_datasets,general_ms,symmetric_ms,ratio");
  CHECK(rows[1].rfind("2,", 0) == 0);
  CHECK(rows[2].rfind("3,", 0) == 0);
}

TEST_CASE("plot aggregation uses the population deviation over seeds") {
  std::vector<TraceRow> rows;
  // Three seeds at iteration 0, then at iteration 1.
  rows.push_back({"ro", 1, 0, 1.0, 2.0, 0.5});
  rows.push_back({"ro", 2, 0, 2.0, 4.0, 0.5});
  rows.push_back({"ro", 3, 0, 3.0, 6.0, 0.5});
  rows.push_back({"ro", 1, 1, 1.0, 2.0, 0.1});
  rows.push_back({"ro", 2, 1, 1.0, 2.0, 0.1});
  rows.push_back({"ro", 3, 1, 4.0, 8.0, 0.1});
  rows.push_back({"gd", 7, 0, 5.0, 5.0, 1.0});

  const auto plot = emit_plot_data(rows);
  REQUIRE(plot.count("ro") == 1);
  REQUIRE(plot.count("gd") == 1);
  const auto& ro = plot.at("ro");
  REQUIRE(ro.size() == 2);
  CHECK(ro[0].iteration == 0);
  CHECK(ro[0].loss_mean == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ro[0].loss_std == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(ro[0].energy_mean == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(ro[0].energy_std == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-12));
  CHECK(ro[0].regret_std == doctest::Approx(0.0));
  CHECK(ro[1].iteration == 1);
  CHECK(ro[1].loss_mean == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ro[1].loss_std == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  // A single seed has no spread by definition.
  const auto& gd = plot.at("gd");
  REQUIRE(gd.size() == 1);
  CHECK(gd[0].loss_std == 0.0);
  CHECK(gd[0].loss_mean == doctest::Approx(5.0));
}

TEST_CASE("trace parsing rejects malformed tables") {
  const fs::path dir = fresh_dir("traceparse");

  const fs::path good = dir / "good.csv";
  write_file(good,
             "method,seed,iteration,loss,energy,regret\n"
             "ro,1,0,2.5,3.5,0.25\n"
             "gd,2,10,1.5,2.5,0.5\n");
  const auto rows = parse_trace_csv(good.string());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == "ro");
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].iteration == 10);
  CHECK(rows[1].regret == doctest::Approx(0.5));

  const fs::path bad_header = dir / "badheader.csv";
  write_file(bad_header, "method,seed,loss\nro,1,2.5\n");
  CHECK_THROWS_AS((void)parse_trace_csv(bad_header.string()), ConfigError);

  const fs::path bad_cell = dir / "badcell.csv";
  write_file(bad_cell,
             "method,seed,iteration,loss,energy,regret\n"
             "ro,1,0,oops,3.5,0.25\n");
  CHECK_THROWS_AS((void)parse_trace_csv(bad_cell.string()), ConfigError);

  const fs::path ragged = dir / "ragged.csv";
  write_file(ragged,
             "method,seed,iteration,loss,energy,regret\n"
             "ro,1,0,2.5,3.5\n");
  CHECK_THROWS_AS((void)parse_trace_csv(ragged.string()), ConfigError);

  CHECK_THROWS_AS((void)parse_trace_csv((dir / "absent.csv").string()), ConfigError);
}

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <thread>

#include "CLI11.hpp"
#include "commands.hpp"
#include "criteria.hpp"

using tmlab::cli::RunConfig;

namespace {

void common_flags(CLI::App* s, RunConfig& c) {
  s->add_option("--p", c.p, "integrability exponent, 1 < p < N");
  s->add_option("--N", c.N, "dimension");
  s->add_option("--R", c.R, "ball radius, positive or inf");
  s->add_option("--out", c.out, "JSON output path (stdout when omitted)");
  s->add_option("--csv", c.csv, "CSV output path");
  s->add_flag("--timing", c.timing, "record wall time in the JSON document");
  s->add_option("--sweep", c.sweep, "key=a:step:b or key=v1,v2,... (needs --out)");
}

void nl_flags(CLI::App* s, RunConfig& c) {
  s->add_option("--nl", c.nl, "zero, f1, f2, f3, f4 or f5");
  s->add_option("--k", c.nl_k, "coefficient k");
  s->add_option("--beta-exp", c.nl_beta, "power exponent of |t|^{beta-1} t");
  s->add_option("--nl-alpha", c.nl_alpha, "exponential rate alpha (alpha0 of f3, f4, f5)");
  s->add_option("--gamma", c.nl_gamma, "f2 exponent gamma < p'");
  s->add_option("--threshold", c.nl_threshold, "f5 kink T, 0 selects it by scan");
  s->add_option("--delta", c.nl_delta, "f5 delta, 0 selects min{1, 1/|p-2|}");
}

void write_outputs(const RunConfig& cfg, const tmlab::cli::Output& o, double seconds) {
  const std::string doc = tmlab::cli::document(cfg, o, seconds).dump(2) + "\n";
  if (cfg.out.empty())
    std::fwrite(doc.data(), 1, doc.size(), stdout);
  else
    tmlab::cli::write_atomic(cfg.out, doc);
  if (!cfg.csv.empty()) tmlab::cli::write_atomic(cfg.csv, tmlab::cli::to_csv(o.csv));
}

// 0 ok, 2 completed with a flagged result, 1 error.
int run_one(const RunConfig& cfg) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const auto o = tmlab::cli::run_command(cfg);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs(cfg, o, sec);
    if (cfg.command == "report")
      for (const auto& row : o.result["criteria"])
        std::fprintf(stderr, "%s %d %s: %s\n", row["pass"].get<bool>() ? "PASS" : "FAIL", row["id"].get<int>(),
                     row["name"].get<std::string>().c_str(), row["detail"].get<std::string>().c_str());
    return o.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int run_sweep(const RunConfig& base) {
  if (base.out.empty()) {
    std::fprintf(stderr, "error: --sweep needs --out\n");
    return 1;
  }
  tmlab::cli::Sweep sw;
  try {
    sw = tmlab::cli::parse_sweep(base.sweep);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::vector<RunConfig> jobs;
  for (double v : sw.values) {
    RunConfig c = base;
    c.sweep.clear();
    try {
      tmlab::cli::set_field(c, sw.key, v);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
    c.out = tmlab::cli::sweep_path(base.out, sw.key, v);
    if (!base.csv.empty()) c.csv = tmlab::cli::sweep_path(base.csv, sw.key, v);
    jobs.push_back(c);
  }
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TMLAB_THREADS")) threads = std::max(1, std::atoi(env));
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  std::vector<int> codes(jobs.size(), 0);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i)
    pool.emplace_back([&] {
      for (std::size_t j; (j = next++) < jobs.size();) codes[j] = run_one(jobs[j]);
    });
  for (auto& t : pool) t.join();
  int worst = 0;
  for (int c : codes) worst = c == 1 ? 1 : std::max(worst, c);
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial Trudinger-Moser experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file; a [subcommand] section sets its options, flags override it");
  std::map<std::string, RunConfig> configs;  // one per subcommand so config sections stay apart

  auto* constants = app.add_subcommand("constants", "sharp constants, concentration level and L_p");
  RunConfig& constants_cfg = configs["constants"];
  common_flags(constants, constants_cfg);
  constants->add_option("--beta", constants_cfg.beta, "weight singularity in [0, p)");
  constants->add_option("--alpha0", constants_cfg.alpha0, "critical rate for c_bar");

  auto* weight = app.add_subcommand("weight", "weight values and total mass");
  RunConfig& weight_cfg = configs["weight"];
  common_flags(weight, weight_cfg);
  weight->add_option("--beta", weight_cfg.beta, "weight singularity in [0, p)");
  weight->add_option("--weight", weight_cfg.weight, "vp, vpbeta, constant, powerlaw or perturbed");
  weight->add_option("--weight-value", weight_cfg.weight_value, "constant value, power or epsilon");
  weight->add_option("--grid", weight_cfg.grid, "number of CSV radii");

  auto* moser = app.add_subcommand("moser-seq", "Moser sequence functional values");
  RunConfig& moser_cfg = configs["moser-seq"];
  common_flags(moser, moser_cfg);
  moser->add_option("--alpha-ratio", moser_cfg.alpha_ratio, "alpha / alpha_p");
  moser->add_option("--k-max", moser_cfg.k_max, "largest k");

  auto* maximize = app.add_subcommand("maximize", "one-dimensional maximization problem");
  RunConfig& maximize_cfg = configs["maximize"];
  common_flags(maximize, maximize_cfg);
  maximize->add_option("--beta", maximize_cfg.beta, "weight singularity; > 0 solves the beta-problem");
  maximize->add_option("--alpha-ratio", maximize_cfg.alpha_ratio, "alpha / alpha_{p,beta}");
  maximize->add_option("--restarts", maximize_cfg.restarts, "random restarts besides the ramps");
  maximize->add_option("--seed", maximize_cfg.seed, "RNG seed");
  maximize->add_option("--nodes", maximize_cfg.nodes, "grid nodes");
  maximize->add_option("--horizon", maximize_cfg.horizon, "t horizon");
  maximize->add_option("--tol", maximize_cfg.tol, "KKT tolerance");

  auto* transplant = app.add_subcommand("transplant", "harmonic or beta transplantation checks");
  RunConfig& transplant_cfg = configs["transplant"];
  common_flags(transplant, transplant_cfg);
  transplant->add_option("--mode", transplant_cfg.mode, "harmonic or beta");
  transplant->add_option("--m", transplant_cfg.m, "target dimension of the harmonic transplantation");
  transplant->add_option("--beta", transplant_cfg.beta, "beta of the beta-transplantation");
  transplant->add_option("--count", transplant_cfg.count, "random profiles");
  transplant->add_option("--seed", transplant_cfg.seed, "RNG seed");
  transplant->add_option("--fd-step", transplant_cfg.h, "finite-difference step of the p-Laplacian check");
  transplant->add_option("--grid", transplant_cfg.grid, "number of CSV radii");

  auto* elliptic = app.add_subcommand("solve-elliptic", "radial solution by shooting");
  RunConfig& elliptic_cfg = configs["solve-elliptic"];
  common_flags(elliptic, elliptic_cfg);
  nl_flags(elliptic, elliptic_cfg);
  elliptic->add_option("--weight", elliptic_cfg.weight, "vp, vpbeta, constant, powerlaw or perturbed");
  elliptic->add_option("--weight-value", elliptic_cfg.weight_value, "constant value, power or epsilon");
  elliptic->add_option("--beta", elliptic_cfg.beta, "weight singularity in [0, p)");
  elliptic->add_option("--bracket", elliptic_cfg.bracket, "lo,hi for u(0)");
  elliptic->add_option("--tol", elliptic_cfg.tol, "boundary tolerance");
  elliptic->add_option("--grid", elliptic_cfg.grid, "number of CSV radii");
  elliptic->add_flag("--mp-level", elliptic_cfg.mp_level, "bound the mountain-pass level");

  auto* rayleigh = app.add_subcommand("rayleigh", "first eigenvalue of the weighted p-Laplacian");
  RunConfig& rayleigh_cfg = configs["rayleigh"];
  common_flags(rayleigh, rayleigh_cfg);
  rayleigh->add_option("--beta", rayleigh_cfg.beta, "weight singularity in [0, p)");
  rayleigh->add_option("--weight", rayleigh_cfg.weight, "vp, vpbeta, constant, powerlaw or perturbed");
  rayleigh->add_option("--weight-value", rayleigh_cfg.weight_value, "constant value, power or epsilon");
  auto* rayleigh_grid = rayleigh->add_option("--grid", rayleigh_cfg.grid, "t-grid cells (default 400)");
  rayleigh->add_option("--iterations", rayleigh_cfg.iterations, "descent iterations");
  rayleigh->add_option("--seed", rayleigh_cfg.seed, "RNG seed");
  rayleigh->add_option("--horizon", rayleigh_cfg.horizon, "t horizon");

  auto* report = app.add_subcommand("report", "acceptance criteria");
  RunConfig& report_cfg = configs["report"];
  report->add_option("--only", report_cfg.only, "criterion ids");
  report->add_option("--out", report_cfg.out, "JSON output path");
  report->add_option("--csv", report_cfg.csv, "CSV output path");
  report->add_flag("--timing", report_cfg.timing, "record wall time");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  RunConfig& cfg = configs[name];
  cfg.command = name;
  if (cfg.command == "rayleigh" && rayleigh_grid->count() == 0) cfg.grid = 400;
  std::error_code ec;
  cfg.self_path = std::filesystem::read_symlink("/proc/self/exe", ec).string();
  if (ec) cfg.self_path = argv[0];
  return cfg.sweep.empty() ? run_one(cfg) : run_sweep(cfg);
}

// ncpg: verification suites, scans and reports for the finite-dimensional
// non-commutative L^p / Grassmann stochastic calculus models.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "ncpg/suites.hpp"

namespace {

using ncpg::SuiteConfig;

// Flat key-value configuration with dotted section prefixes:
//   seed = 42
//   model.mu = 0.5
//   gbm.n_t = 4
//   tolerance.kms = 1e-9
//   suite = gbm          (repeatable)
std::map<std::string, std::vector<std::string>> parse_config(
    const std::string& path) {
  std::map<std::string, std::vector<std::string>> kv;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      if (!blank)
        throw std::runtime_error("config: malformed line " +
                                 std::to_string(lineno));
      continue;
    }
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    kv[trim(line.substr(0, eq))].push_back(trim(line.substr(eq + 1)));
  }
  return kv;
}

double config_number(const std::map<std::string, std::vector<std::string>>& kv,
                     const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end() || it->second.empty()) return fallback;
  return std::stod(it->second.back());
}

struct CliOptions {
  std::string config_path;
  std::uint64_t seed = 20240817;
  bool seed_set = false;
  std::string out_dir = ".";
  std::vector<std::string> suites;
  bool fast = false;
};

int apply_config(CliOptions& opt, SuiteConfig& cfg) {
  if (!opt.config_path.empty()) {
    auto kv = parse_config(opt.config_path);
    cfg.seed =
        static_cast<std::uint64_t>(config_number(kv, "seed", double(cfg.seed)));
    cfg.mu = config_number(kv, "model.mu", cfg.mu);
    cfg.gbm_n_t = int(config_number(kv, "gbm.n_t", cfg.gbm_n_t));
    cfg.gbm_T = config_number(kv, "gbm.T", cfg.gbm_T);
    cfg.gbm_h_dim = int(config_number(kv, "gbm.h_dim", cfg.gbm_h_dim));
    cfg.gbm_n_reserved =
        int(config_number(kv, "gbm.n_reserved", cfg.gbm_n_reserved));
    for (const auto& [key, vals] : kv) {
      if (key.rfind("tolerance.", 0) == 0)
        for (const auto& v : vals)
          if (std::stod(v) < 0.0) return 2;  // corrupted tolerance
      if (key == "suite")
        for (const auto& v : vals) opt.suites.push_back(v);
    }
    if (!(cfg.mu > 0.0 && cfg.mu < 1.0)) return 2;
    if (cfg.gbm_n_t < 1 || cfg.gbm_h_dim < 2 || cfg.gbm_h_dim % 2 != 0)
      return 2;
  }
  if (opt.seed_set) cfg.seed = opt.seed;
  cfg.fast = opt.fast;
  return 0;
}

int run_verify(CliOptions& opt) {
  SuiteConfig cfg;
  if (int rc = apply_config(opt, cfg); rc != 0) return rc;

  ncpg::Report full;
  for (const auto& [name, fn] : ncpg::all_suites()) {
    if (!opt.suites.empty() &&
        std::find(opt.suites.begin(), opt.suites.end(), name) ==
            opt.suites.end())
      continue;
    ncpg::Report rep = fn(cfg);
    for (const auto& r : rep.results()) full.add(r);
  }
  full.print();
  std::filesystem::create_directories(opt.out_dir);
  ncpg::write_text_file(opt.out_dir + "/verify_report.json", full.to_json());
  std::printf("%s: %d checks, %d failures -> %s/verify_report.json\n",
              full.all_pass() ? "ok" : "FAIL", int(full.results().size()),
              full.failures(), opt.out_dir.c_str());
  return full.all_pass() ? 0 : 1;
}

int run_norms(CliOptions& opt) {
  SuiteConfig cfg;
  if (int rc = apply_config(opt, cfg); rc != 0) return rc;
  std::filesystem::create_directories(opt.out_dir);
  ncpg::norms_table(cfg).write(opt.out_dir + "/norms.csv");
  std::printf("wrote %s/norms.csv\n", opt.out_dir.c_str());
  return 0;
}

int run_ito(CliOptions& opt) {
  SuiteConfig cfg;
  if (int rc = apply_config(opt, cfg); rc != 0) return rc;
  std::filesystem::create_directories(opt.out_dir);
  std::vector<int> grids =
      cfg.fast ? std::vector<int>{2, 3} : std::vector<int>{2, 3, 4, 5};
  ncpg::ito_residual_scan(cfg, grids).write(opt.out_dir +
                                            "/ito_residuals.csv");
  std::printf("wrote %s/ito_residuals.csv\n", opt.out_dir.c_str());
  return 0;
}

int run_girsanov(CliOptions& opt) {
  SuiteConfig cfg;
  if (int rc = apply_config(opt, cfg); rc != 0) return rc;
  std::filesystem::create_directories(opt.out_dir);
  std::vector<int> grids =
      cfg.fast ? std::vector<int>{2, 3} : std::vector<int>{2, 3, 4};
  ncpg::write_text_file(opt.out_dir + "/girsanov_report.json",
                        ncpg::girsanov_report_json(cfg, grids));
  std::printf("wrote %s/girsanov_report.json\n", opt.out_dir.c_str());
  return 0;
}

int run_sde(CliOptions& opt) {
  SuiteConfig cfg;
  if (int rc = apply_config(opt, cfg); rc != 0) return rc;
  std::filesystem::create_directories(opt.out_dir);
  std::vector<int> grids =
      cfg.fast ? std::vector<int>{2, 3} : std::vector<int>{2, 3, 4};
  ncpg::write_text_file(opt.out_dir + "/sde_report.json",
                        ncpg::sde_report_json(cfg, grids));
  std::printf("wrote %s/sde_report.json\n", opt.out_dir.c_str());
  return 0;
}

int run_phi4(CliOptions& opt, double theta, double tau, int mode_box) {
  SuiteConfig cfg;
  if (int rc = apply_config(opt, cfg); rc != 0) return rc;
  std::filesystem::create_directories(opt.out_dir);
  std::vector<double> svals = {8, 12, 16, 24, 32, 48, 64};
  std::vector<double> tvals = {16, 32, 64, 128};
  ncpg::phi4_scan(theta, tau, svals, tvals, mode_box)
      .write(opt.out_dir + "/phi4_scan.csv");
  std::printf("wrote %s/phi4_scan.csv\n", opt.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("NCPG_THREADS")) {
    int n = std::atoi(threads);
    if (n > 0) {
#ifdef _OPENMP
      omp_set_num_threads(n);
#endif
      Eigen::setNbThreads(n);
    }
  }

  CLI::App app{"non-commutative L^p / Grassmann stochastic calculus suites"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--config", opt.config_path,
                 "configuration file (key = value)");
  auto* seed_opt = app.add_option("--seed", opt.seed, "RNG seed");
  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--suite", opt.suites, "suite selection (repeatable)");
  app.add_flag("--fast", opt.fast, "trim ensemble sizes");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  auto* norms = app.add_subcommand("norms", "twisted-norm tables");
  auto* ito = app.add_subcommand("ito", "Ito-formula refinement scan");
  auto* girsanov =
      app.add_subcommand("girsanov", "Girsanov refinement report");
  auto* sde = app.add_subcommand("sde", "SDE solver report");
  auto* phi4 = app.add_subcommand("phi4", "phi4 lattice scans");
  double theta = 0.1, tau = 0.0;
  int mode_box = 140;
  phi4->add_option("--theta", theta, "regularity parameter");
  phi4->add_option("--tau", tau, "twist parameter");
  phi4->add_option("--mode-box", mode_box, "lattice truncation radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  opt.seed_set = seed_opt->count() > 0;
  try {
    if (verify->parsed()) return run_verify(opt);
    if (norms->parsed()) return run_norms(opt);
    if (ito->parsed()) return run_ito(opt);
    if (girsanov->parsed()) return run_girsanov(opt);
    if (sde->parsed()) return run_sde(opt);
    if (phi4->parsed()) return run_phi4(opt, theta, tau, mode_box);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}

#ifndef NCPG_SUITES_HPP
#define NCPG_SUITES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ncpg/report.hpp"

namespace ncpg {

struct SuiteConfig {
  std::uint64_t seed = 20240817;
  double mu = 0.5;
  int gbm_n_t = 4;
  double gbm_T = 1.0;
  int gbm_h_dim = 2;
  int gbm_n_reserved = 1;
  bool fast = false;  // trims ensemble sizes for smoke runs
};

using SuiteFn = std::function<Report(const SuiteConfig&)>;

// The thirteen acceptance criteria in spec order.
Report suite_car_quasifree(const SuiteConfig& cfg);       // 1
Report suite_wick_modular(const SuiteConfig& cfg);        // 2
Report suite_twisted_lp(const SuiteConfig& cfg);          // 3
Report suite_cond_exp(const SuiteConfig& cfg);            // 4
Report suite_gbm(const SuiteConfig& cfg);                 // 5
Report suite_ito_isometry(const SuiteConfig& cfg);        // 6
Report suite_ito_formula(const SuiteConfig& cfg);         // 7
Report suite_girsanov(const SuiteConfig& cfg);            // 8
Report suite_sde(const SuiteConfig& cfg);                 // 9
Report suite_hypercontractivity(const SuiteConfig& cfg);  // 10
Report suite_phi4(const SuiteConfig& cfg);                // 11
Report suite_appendix_b(const SuiteConfig& cfg);          // 12
Report suite_martingale_norms(const SuiteConfig& cfg);    // 13

std::vector<std::pair<std::string, SuiteFn>> all_suites();

// Scan tables for the CLI.
CsvTable phi4_scan(double theta, double tau, const std::vector<double>& s,
                   const std::vector<double>& t, int mode_box);
CsvTable ito_residual_scan(const SuiteConfig& cfg,
                           const std::vector<int>& grids);
std::string girsanov_report_json(const SuiteConfig& cfg,
                                 const std::vector<int>& grids);
std::string sde_report_json(const SuiteConfig& cfg,
                            const std::vector<int>& grids);
CsvTable norms_table(const SuiteConfig& cfg);

}  // namespace ncpg

#endif

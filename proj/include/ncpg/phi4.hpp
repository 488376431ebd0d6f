#ifndef NCPG_PHI4_HPP
#define NCPG_PHI4_HPP

#include <array>
#include <memory>
#include <vector>

#include "ncpg/gbm.hpp"

namespace ncpg {

// Smooth cutoff profile: chi = 1 on [0, 1/2], supp chi = [0, 1], C-infinity
// mollified plateau in between. chi(|k|/t) at t = 0 is defined as 1_{k=0}.
double chi_profile(double r);

struct LatticeSpec {
  double theta = 0.1;   // regularity parameter in [0, 1/2)
  int mode_box = 64;    // Z^2 truncation radius (>= max cutoff)
  double epsilon = 0.05;  // free parameter in the nu trade-off

  double nu() const { return (1.0 - 2.0 * epsilon - 3.0 * theta) / (1.0 + epsilon); }
};

// C_t = sum_{k in Z^2} chi(|k|/t) (1 + |k|^2)^{theta - 1}.
double covariance_sum(const LatticeSpec& spec, double t);

// Growth exponent of C_t ~ c0 + c1 t^{2 theta} over a dyadic t-grid; the
// dyadic-increment estimator kills the additive constant that biases a
// raw log-log fit at desk-scale windows.
double covariance_growth_exponent(const LatticeSpec& spec,
                                  const std::vector<double>& ts);

// S(t) = sum_{k1..k4, sum k_i = 0} prod chi(|k_i|/t)(1+|k_i|^2)^{theta-1},
// evaluated by FFT on a grid padded to >= 4x the cutoff (aliasing guarded)
// or by the brute-force quadruple sum (the oracle, small cutoffs).
double quad_zero_sum_fft(const LatticeSpec& spec, double t);
double quad_zero_sum_brute(const LatticeSpec& spec, double t);

// || T(V_t) ||_2^2 - || T(V_s) ||_2^2 as a lattice sum (telescoping form).
double v_l2_difference(const LatticeSpec& spec, double s, double t);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y);

struct LpGrowthResult {
  double bound = 0.0;
  double s_opt = 0.0;
  double nu_fit = 0.0;         // fitted decay exponent of ||T(V_t - V_s)||_2
  double exponent = 0.0;       // 8 theta / (4 theta + nu_fit)
  bool logarithmic = false;    // theta ~ 0 regime flag
  double c_linf = 0.0;         // prefactor of the s^{4 theta} term
  double c_tail = 0.0;         // prefactor of the p^2 s^{-nu} term
};

LpGrowthResult v_lp_growth(const LatticeSpec& spec, double p);

struct PartitionSeriesResult {
  double sum = 0.0;       // exp(log_sum); may overflow to inf for raw scales
  double log_sum = 0.0;   // log of the series value (log-sum-exp)
  bool converged = false;  // ratio test verdict
  double lambda_star = 0.0;   // coupling scale where the n = 1 term is ~1
  double one_minus_omega = 0.0;  // normalized n >= 1 tail (Cor 5.5 route)
  bool hypothesis_ok = false;    // 7 theta < 1
  double normalization = 1.0;    // L^2 scale of V used for the lambda window
};

// Series bound sum_n |lambda|^n c^n (p n)^{alpha n} / n! with the measured
// lattice constants; evaluated in log space. The tail bound behind
// |1 - omega(Z)| <= c |lambda| uses V normalized to unit L^2 scale so that
// the spec's lambda window sits in the linear regime.
PartitionSeriesResult partition_series(const LatticeSpec& spec, double lambda,
                                       double p);

// Operator-level Wick quartic over a finite momentum set: a one-cell GBM
// whose per-mode weights reproduce the lattice covariance, the field
// V = int [[ (Psibar(x), Psi(x))^2 ]] dx evaluated by exact trigonometric
// quadrature.
struct TinyCutoffV {
  std::unique_ptr<GBMProcess> gbm;
  Mat v;
};

TinyCutoffV tiny_cutoff_v(const std::vector<std::array<int, 2>>& momenta,
                          double theta, double t, double mu);

// Restricted quadruple sum over the same momentum set (scalar analog).
double quad_zero_sum_restricted(
    const std::vector<std::array<int, 2>>& momenta, double theta, double t);

}  // namespace ncpg

#endif

#ifndef NCPG_GIRSANOV_HPP
#define NCPG_GIRSANOV_HPP

#include "ncpg/ito.hpp"

namespace ncpg {

struct StochasticExponential {
  std::vector<Mat> exponent;  // e_{t_m}, m = 0..n_t
  std::vector<Mat> z;         // Z_{t_m} = exp(e_{t_m})
  int series_terms = 0;       // order at which the series settled
  double series_vs_expm = 0.0;
  bool novikov_ok = false;
};

// Z_t = exp( int <H, dX> - 1/2 int Tr_{G*Theta}(H (x) H) ds ), the power
// series truncated at the nilpotency/tolerance cutoff and cross-checked
// against the direct matrix exponential.
StochasticExponential stochastic_exponential(const GridNoise& noise,
                                             const AdaptedSimpleProcess& h,
                                             double tol = 1e-14,
                                             int max_terms = 80);

// Signed expectation E(a) = omega(a Z_inf) with conditional expectations
// E_t(a) = omega_t(a Z_inf) Z_t^{-1}.
class SignedExpectation {
 public:
  SignedExpectation(const GBMProcess& gbm, Mat z_inf,
                    double norm_tol = 1e-9);

  Complex expect(const Mat& a) const;
  Mat cond(const Mat& a, int level) const;
  const Mat& z(int level) const { return z_.at(level); }
  const Mat& z_inv(int level) const { return z_inv_.at(level); }
  double condition_number(int level) const { return cond_.at(level); }
  const Mat& z_inf() const { return z_inf_; }

 private:
  const GBMProcess* gbm_;
  Mat z_inf_;
  std::vector<Mat> z_, z_inv_;
  std::vector<double> cond_;
};

// Signed sum over perfect matchings of <Theta v_i, G v_j>(t_i ^ t_j)
// (Def 4.39); sign = permutation signature of the pairing.
Complex matching_moment(const GBMProcess& gbm,
                        const std::vector<std::pair<double, Vec>>& points);

struct GirsanovShift {
  // B_m(v) = X_m(v) - sum_{j<m} H_j(Gbar v) dt; cached per real direction.
  std::vector<std::vector<Mat>> b;  // [grid index][dir]
  SignedExpectation se;
};

GirsanovShift girsanov_shift(const GridNoise& noise,
                             const AdaptedSimpleProcess& h);

// B evaluated at an arbitrary h-vector (linear in v).
Mat shifted_field(const GridNoise& noise, const GirsanovShift& gs, int m,
                  const Vec& v);

struct LevyCheckReport {
  double max_deviation = 0.0;   // measured vs ODE coefficients
  double zero_set_defect = 0.0; // |A| = 0 sanity
};

// Levy-type characterization probe: the Grassmann-coefficient functions
// S_A(t) = E_0( prod_{j in A} (1 + theta_j int <f_j, dB>) ) are measured
// from the matrices and compared against the unique solution of the
// triangular ODE system driven by the bracket pairings.
LevyCheckReport levy_check(const GridNoise& noise,
                           const std::function<Mat(int, int)>& b_field,
                           const SignedExpectation& se,
                           const std::vector<std::vector<Vec>>& directions);

// Drift for SDEs: per real-basis direction a polynomial of odd total degree
// in the field components (n_anti = h_dim anticommuting variables).
struct DriftSpec {
  std::vector<GrassmannPolynomial> mu;  // one per real basis direction
  Mat a;                                // split-off linear part (may be 0)
};

// mu(v_alpha)(psi) = -psi(A v_alpha) as a polynomial family.
std::vector<GrassmannPolynomial> linear_drift(const GridNoise& noise,
                                              const Mat& a);

struct StrongSolution {
  std::vector<std::vector<Mat>> psi;  // [grid index][dir]
  int iterations = 0;
  double residual = 0.0;
};

// Picard iteration of Psi_t(v) = Psi_0(v) + int mu(v)(Psi_s) ds + B_t(v)
// on the grid (left-endpoint drift, sigma(v,v') = <v,v'>).
StrongSolution sde_strong_solve(const GridNoise& noise,
                                const std::vector<GrassmannPolynomial>& mu,
                                const std::vector<Mat>& psi0,
                                const std::vector<std::vector<Mat>>& b_path,
                                double tol = 1e-10, int max_iter = 30);

// Antilinear solve Gbar x = y on h (throws if Gbar is singular).
Vec gbar_solve(const GBMProcess& gbm, const Vec& y);

}  // namespace ncpg

#endif

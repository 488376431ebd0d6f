#ifndef NCPG_ITO_HPP
#define NCPG_ITO_HPP

#include "ncpg/gbm.hpp"
#include "ncpg/grassmann_poly.hpp"

namespace ncpg {

// Cached real-basis directions and sparse per-cell noise increments.
class GridNoise {
 public:
  explicit GridNoise(const GBMProcess& gbm);

  const GBMProcess& gbm() const { return *gbm_; }
  int dirs() const { return static_cast<int>(basis_.size()); }
  const Vec& dir(int a) const { return basis_.at(a); }
  const std::vector<Vec>& basis() const { return basis_; }

  const SpMat& increment(int cell, int a) const;
  const SpMat& field(int m, int a) const;  // X_{t_m}(v_a)

  // M(a,b) = <Gbar v_a, v_b> with Gbar = G* Theta (the bracket pairing).
  const Mat& gbar_pair() const { return gbar_pair_; }
  // M(a,b) = <A v_a, v_b> for a linear A on h.
  Mat pair_matrix(const Mat& a_op) const;

 private:
  const GBMProcess* gbm_;
  std::vector<Vec> basis_;
  std::vector<std::vector<SpMat>> inc_;    // [cell][dir]
  std::vector<std::vector<SpMat>> field_;  // [grid index][dir]
  Mat gbar_pair_;
};

// Piecewise-constant adapted process on the grid: values[cell][dir], one
// dir for scalar processes. Values on [t_j, t_{j+1}) must lie in M_{t_j}.
class AdaptedSimpleProcess {
 public:
  AdaptedSimpleProcess(const GBMProcess& gbm,
                       std::vector<std::vector<Mat>> values, int parity,
                       bool check_adapted = true, double tol = 1e-10);

  int cells() const { return static_cast<int>(values_.size()); }
  int arity() const {
    return values_.empty() ? 0 : static_cast<int>(values_[0].size());
  }
  const Mat& value(int cell, int dir = 0) const {
    return values_.at(cell).at(dir);
  }
  int parity() const { return parity_; }

 private:
  std::vector<std::vector<Mat>> values_;
  int parity_;
};

// Multidimensional Ito integral sum_a sum_j F_j(v_a) dX_j(v_a) up to grid
// index m (Y is a grid martingale).
Mat ito_integral(const GridNoise& noise, const AdaptedSimpleProcess& f,
                 int m);

// Scalar integrand against a fixed direction v.
Mat ito_integral_scalar(const GridNoise& noise, const std::vector<Mat>& f,
                        const Vec& v, int m);

// Tr_A(F (x) H) = sum_{ab} coef(a,b) F(v_a) H(v_b) for one cell's values.
Mat trace_pairing(const Mat& coef, const std::vector<Mat>& f_vals,
                  const std::vector<Mat>& h_vals);

struct TwistedHardyNorms {
  double Hc = 0.0;
  double Hr = 0.0;
  double combined = 0.0;
};

// || F ||_{h^p_{A,#}} over [0, t_m]: sup_tau of the column/row norms built
// from |T_tau(F_s)|_A^2; A given by its real-basis coefficient matrix.
TwistedHardyNorms hardy_twisted_norm(const GridNoise& noise,
                                     const AdaptedSimpleProcess& f, double p,
                                     int m, const Mat& a_coef);

// Ito process Y_t = Y_0 + int <H, dX> + int K ds with cached grid path.
class ItoProcess {
 public:
  ItoProcess(const GridNoise& noise, Mat y0,
             std::vector<std::vector<Mat>> h_vals,  // [cell][dir], may be {}
             std::vector<Mat> k_vals,               // [cell], may be {}
             int h_parity);

  const Mat& at(int m) const { return path_.at(m); }
  int cells() const { return n_cells_; }
  bool has_h() const { return !h_.empty(); }
  bool has_k() const { return !k_.empty(); }
  const Mat& h(int cell, int dir) const { return h_.at(cell).at(dir); }
  const Mat& k(int cell) const { return k_.at(cell); }
  int h_parity() const { return h_parity_; }

 private:
  const GridNoise* noise_;
  std::vector<std::vector<Mat>> h_;
  std::vector<Mat> k_;
  std::vector<Mat> path_;
  int n_cells_;
  int h_parity_;
};

struct QuadraticVariation {
  std::vector<Mat> path;  // [Y, Y']_{t_m} for m = 0..n_t
  double compensator_defect = 0.0;
};

// Bracket from the integrand decompositions. The per-cell contribution is
// (-1)^{parity(H')} sum_{ab} <Gbar v_a, v_b> H(v_a) H'(v_b) dt, the sign
// being forced by pulling dX(v_a) through H'(v_b); for the odd-process
// (even-integrand) case this is literally Tr_{G*Theta}(H (x) H') dt.
// The defect measures sup_s || omega_s(YY' - [.]) - (YY' - [.])_s ||.
QuadraticVariation quadratic_variation(const GridNoise& noise,
                                       const ItoProcess& y,
                                       const ItoProcess& yp,
                                       bool compute_defect = true);

// Residual of the polynomial Ito formula at the terminal time:
// F indexed over n_anti odd and n_sym even Ito processes; the L2-twisted
// norm of lhs - rhs is returned together with the residual of a linear F.
struct ItoFormulaResult {
  double residual = 0.0;
};
ItoFormulaResult ito_formula_residual(const GridNoise& noise,
                                      const GrassmannPolynomial& f,
                                      const std::vector<ItoProcess>& y_minus,
                                      const std::vector<ItoProcess>& y_plus);

}  // namespace ncpg

#endif

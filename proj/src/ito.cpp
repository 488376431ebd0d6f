#include "ncpg/ito.hpp"

#include <cmath>

namespace ncpg {

GridNoise::GridNoise(const GBMProcess& gbm)
    : gbm_(&gbm), basis_(real_theta_basis(gbm.h_dim())) {
  int nd = dirs();
  field_.resize(gbm.n_t() + 1);
  for (int m = 0; m <= gbm.n_t(); ++m) {
    field_[m].reserve(nd);
    for (int a = 0; a < nd; ++a)
      field_[m].push_back(gbm.field_sparse(m, basis_[a]));
  }
  inc_.resize(gbm.n_t());
  for (int j = 0; j < gbm.n_t(); ++j) {
    inc_[j].reserve(nd);
    for (int a = 0; a < nd; ++a)
      inc_[j].push_back(SpMat(field_[j + 1][a] - field_[j][a]));
  }
  gbar_pair_.resize(nd, nd);
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < nd; ++b)
      gbar_pair_(a, b) = gbm.gbar(basis_[a]).dot(basis_[b]);
}

const SpMat& GridNoise::increment(int cell, int a) const {
  return inc_.at(cell).at(a);
}

const SpMat& GridNoise::field(int m, int a) const {
  return field_.at(m).at(a);
}

Mat GridNoise::pair_matrix(const Mat& a_op) const {
  int nd = dirs();
  Mat m(nd, nd);
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < nd; ++b)
      m(a, b) = Vec(a_op * basis_[a]).dot(basis_[b]);
  return m;
}

AdaptedSimpleProcess::AdaptedSimpleProcess(
    const GBMProcess& gbm, std::vector<std::vector<Mat>> values, int parity,
    bool check_adapted, double tol)
    : values_(std::move(values)), parity_(parity) {
  if (static_cast<int>(values_.size()) != gbm.n_t())
    throw InvalidInput("AdaptedSimpleProcess: one value row per grid cell");
  if (check_adapted) {
    for (int j = 0; j < cells(); ++j)
      for (const Mat& v : values_[j])
        if (!gbm.filtration().is_level_element(v, j, tol))
          throw AdaptednessError(
              "AdaptedSimpleProcess: value escapes its level algebra");
  }
}

Mat ito_integral(const GridNoise& noise, const AdaptedSimpleProcess& f,
                 int m) {
  const GBMProcess& gbm = noise.gbm();
  if (m < 0 || m > gbm.n_t()) throw InvalidInput("ito_integral: off-grid");
  if (f.arity() != noise.dirs())
    throw InvalidInput("ito_integral: direction arity mismatch");
  Eigen::Index n = gbm.model().dim();
  Mat y = Mat::Zero(n, n);
  for (int j = 0; j < m; ++j)
    for (int a = 0; a < noise.dirs(); ++a)
      y += f.value(j, a) * noise.increment(j, a);
  return y;
}

Mat ito_integral_scalar(const GridNoise& noise, const std::vector<Mat>& f,
                        const Vec& v, int m) {
  const GBMProcess& gbm = noise.gbm();
  if (static_cast<int>(f.size()) != gbm.n_t())
    throw InvalidInput("ito_integral_scalar: value per cell required");
  if (m < 0 || m > gbm.n_t())
    throw InvalidInput("ito_integral_scalar: off-grid");
  Eigen::Index n = gbm.model().dim();
  Mat y = Mat::Zero(n, n);
  for (int j = 0; j < m; ++j)
    y += f[j] * gbm.increment(j, j + 1, v);
  return y;
}

Mat trace_pairing(const Mat& coef, const std::vector<Mat>& f_vals,
                  const std::vector<Mat>& h_vals) {
  if (coef.rows() != static_cast<Eigen::Index>(f_vals.size()) ||
      coef.cols() != static_cast<Eigen::Index>(h_vals.size()))
    throw InvalidInput("trace_pairing: coefficient shape mismatch");
  if (f_vals.empty() || h_vals.empty())
    throw InvalidInput("trace_pairing: empty value lists");
  Eigen::Index n = f_vals[0].rows();
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index a = 0; a < coef.rows(); ++a)
    for (Eigen::Index b = 0; b < coef.cols(); ++b) {
      if (coef(a, b) == Complex(0.0)) continue;
      out += coef(a, b) * (f_vals[a] * h_vals[b]);
    }
  return out;
}

TwistedHardyNorms hardy_twisted_norm(const GridNoise& noise,
                                     const AdaptedSimpleProcess& f, double p,
                                     int m, const Mat& a_coef) {
  if (p < 2.0)
    throw UnsupportedExponent("hardy_twisted_norm: p >= 2 required");
  const GBMProcess& gbm = noise.gbm();
  const QuasiFreeModel& model = gbm.model();
  double dt = gbm.dt();
  // A^{1/2} in the real basis (A >= 0 commuting with Theta has a real
  // symmetric PSD coefficient matrix).
  Mat asqrt = psd_sqrt(a_coef);

  double bound = 1.0 - 0.5 / p;
  std::vector<double> taus = {-bound, -bound / 2.0, 0.0, bound / 2.0, bound};
  TwistedHardyNorms out;
  for (double tau : taus) {
    Eigen::Index n = model.dim();
    Mat sc = Mat::Zero(n, n), sr = Mat::Zero(n, n);
    for (int j = 0; j < m; ++j) {
      for (int a = 0; a < noise.dirs(); ++a) {
        Mat fa = Mat::Zero(n, n);
        for (int b = 0; b < noise.dirs(); ++b) {
          if (asqrt(a, b) == Complex(0.0)) continue;
          fa += asqrt(a, b) * f.value(j, b);
        }
        Mat tfa = model.sandwich(fa, 0.5 / p + tau, 0.5 / p - tau);
        sc += dt * (tfa.adjoint() * tfa);
        sr += dt * (tfa * tfa.adjoint());
      }
    }
    out.Hc = std::max(out.Hc, schatten_norm(psd_sqrt(sc), p));
    out.Hr = std::max(out.Hr, schatten_norm(psd_sqrt(sr), p));
  }
  out.combined = std::max(out.Hc, out.Hr);
  return out;
}

ItoProcess::ItoProcess(const GridNoise& noise, Mat y0,
                       std::vector<std::vector<Mat>> h_vals,
                       std::vector<Mat> k_vals, int h_parity)
    : noise_(&noise),
      h_(std::move(h_vals)),
      k_(std::move(k_vals)),
      n_cells_(noise.gbm().n_t()),
      h_parity_(h_parity) {
  const GBMProcess& gbm = noise.gbm();
  if (!h_.empty() && static_cast<int>(h_.size()) != n_cells_)
    throw InvalidInput("ItoProcess: H needs one row per cell");
  if (!k_.empty() && static_cast<int>(k_.size()) != n_cells_)
    throw InvalidInput("ItoProcess: K needs one value per cell");
  Eigen::Index n = gbm.model().dim();
  if (y0.size() == 0) y0 = Mat::Zero(n, n);
  double dt = gbm.dt();
  path_.resize(n_cells_ + 1);
  path_[0] = y0;
  for (int j = 0; j < n_cells_; ++j) {
    Mat step = Mat::Zero(n, n);
    if (!h_.empty())
      for (int a = 0; a < noise.dirs(); ++a)
        step += h_[j][a] * noise.increment(j, a);
    if (!k_.empty()) step += dt * k_[j];
    path_[j + 1] = path_[j] + step;
  }
}

QuadraticVariation quadratic_variation(const GridNoise& noise,
                                       const ItoProcess& y,
                                       const ItoProcess& yp,
                                       bool compute_defect) {
  const GBMProcess& gbm = noise.gbm();
  const QuasiFreeModel& model = gbm.model();
  if (!y.has_h() || !yp.has_h())
    throw InvalidInput("quadratic_variation: integrand decomposition missing");
  Eigen::Index n = model.dim();
  double dt = gbm.dt();
  double sign = (yp.h_parity() == 1) ? -1.0 : 1.0;

  QuadraticVariation qv;
  qv.path.resize(gbm.n_t() + 1);
  qv.path[0] = Mat::Zero(n, n);
  for (int j = 0; j < gbm.n_t(); ++j) {
    std::vector<Mat> hy, hyp;
    for (int a = 0; a < noise.dirs(); ++a) {
      hy.push_back(y.h(j, a));
      hyp.push_back(yp.h(j, a));
    }
    qv.path[j + 1] =
        qv.path[j] + sign * dt * trace_pairing(noise.gbar_pair(), hy, hyp);
  }

  if (compute_defect) {
    // t -> Y_t Y'_t - [Y, Y']_t must be a grid martingale.
    const Filtration& filt = gbm.filtration();
    int nt = gbm.n_t();
    Mat terminal = y.at(nt) * yp.at(nt) - qv.path[nt];
    double defect = 0.0;
    for (int s = 0; s <= nt; ++s) {
      Mat expect = filt.cond_exp(terminal, s);
      Mat actual = y.at(s) * yp.at(s) - qv.path[s];
      defect = std::max(defect, operator_norm(Mat(expect - actual)));
    }
    qv.compensator_defect = defect;
  }
  return qv;
}

namespace {

// Evaluate F at the process values at grid index m.
Mat eval_poly_at(const GrassmannPolynomial& f,
                 const std::vector<ItoProcess>& y_minus,
                 const std::vector<ItoProcess>& y_plus, int m,
                 Eigen::Index dim) {
  std::vector<Mat> zm, zp;
  zm.reserve(y_minus.size());
  zp.reserve(y_plus.size());
  for (const auto& y : y_minus) zm.push_back(y.at(m));
  for (const auto& y : y_plus) zp.push_back(y.at(m));
  return f.eval(zm, zp, dim);
}

}  // namespace

ItoFormulaResult ito_formula_residual(const GridNoise& noise,
                                      const GrassmannPolynomial& f,
                                      const std::vector<ItoProcess>& y_minus,
                                      const std::vector<ItoProcess>& y_plus) {
  const GBMProcess& gbm = noise.gbm();
  const QuasiFreeModel& model = gbm.model();
  Eigen::Index n = model.dim();
  int nt = gbm.n_t();
  double dt = gbm.dt();
  int na = f.n_anti(), ns = f.n_sym();
  if (static_cast<int>(y_minus.size()) != na ||
      static_cast<int>(y_plus.size()) != ns)
    throw InvalidInput("ito_formula_residual: process count mismatch");

  Mat rhs = Mat::Zero(n, n);

  // Precompute derivative polynomials.
  std::vector<GrassmannPolynomial> da, dc;
  for (int a = 0; a < na; ++a) da.push_back(f.d_anti(a));
  for (int c = 0; c < ns; ++c) dc.push_back(f.d_sym(c));

  for (int j = 0; j < nt; ++j) {
    // First-order terms: int dF(Y_s) dY_s with left-endpoint evaluation.
    for (int a = 0; a < na; ++a) {
      Mat d = eval_poly_at(da[a], y_minus, y_plus, j, n);
      const ItoProcess& ya = y_minus[a];
      if (ya.has_h())
        for (int g = 0; g < noise.dirs(); ++g)
          rhs += (d * ya.h(j, g)) * noise.increment(j, g);
      if (ya.has_k()) rhs += dt * (d * ya.k(j));
    }
    for (int c = 0; c < ns; ++c) {
      Mat d = eval_poly_at(dc[c], y_minus, y_plus, j, n);
      const ItoProcess& yc = y_plus[c];
      if (yc.has_h())
        for (int g = 0; g < noise.dirs(); ++g)
          rhs += (d * yc.h(j, g)) * noise.increment(j, g);
      if (yc.has_k()) rhs += dt * (d * yc.k(j));
    }

    // Second-order bracket terms, compensator-true signs per cell.
    auto bracket_cell = [&](const ItoProcess& u, const ItoProcess& v) -> Mat {
      if (!u.has_h() || !v.has_h()) return Mat::Zero(n, n);
      std::vector<Mat> hu, hv;
      for (int g = 0; g < noise.dirs(); ++g) {
        hu.push_back(u.h(j, g));
        hv.push_back(v.h(j, g));
      }
      double sign = (v.h_parity() == 1) ? -1.0 : 1.0;
      return sign * dt * trace_pairing(noise.gbar_pair(), hu, hv);
    };

    for (int a = 0; a < na; ++a)
      for (int b = 0; b < na; ++b) {
        GrassmannPolynomial dd = da[b].d_anti(a);
        if (dd.is_zero()) continue;
        Mat d2 = eval_poly_at(dd, y_minus, y_plus, j, n);
        rhs += 0.5 * (d2 * bracket_cell(y_minus[a], y_minus[b]));
      }
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < ns; ++b) {
        GrassmannPolynomial dd = dc[b].d_sym(a);
        if (dd.is_zero()) continue;
        Mat d2 = eval_poly_at(dd, y_minus, y_plus, j, n);
        rhs += 0.5 * (d2 * bracket_cell(y_plus[a], y_plus[b]));
      }
    for (int a = 0; a < ns; ++a)
      for (int b = 0; b < na; ++b) {
        GrassmannPolynomial dd = da[b].d_sym(a);
        if (dd.is_zero()) continue;
        Mat d2 = eval_poly_at(dd, y_minus, y_plus, j, n);
        rhs += d2 * bracket_cell(y_plus[a], y_minus[b]);
      }
  }

  Mat lhs = eval_poly_at(f, y_minus, y_plus, nt, n) -
            eval_poly_at(f, y_minus, y_plus, 0, n);
  ItoFormulaResult out;
  out.residual = twisted_norm(model, Mat(lhs - rhs), 2.0);
  return out;
}

}  // namespace ncpg

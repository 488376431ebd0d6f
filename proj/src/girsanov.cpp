#include "ncpg/girsanov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace ncpg {

StochasticExponential stochastic_exponential(const GridNoise& noise,
                                             const AdaptedSimpleProcess& h,
                                             double tol, int max_terms) {
  const GBMProcess& gbm = noise.gbm();
  Eigen::Index n = gbm.model().dim();
  double dt = gbm.dt();
  if (h.parity() != 1)
    throw ParityError("stochastic_exponential: H must be odd-valued");

  StochasticExponential out;
  out.exponent.resize(gbm.n_t() + 1);
  out.z.resize(gbm.n_t() + 1);
  out.exponent[0] = Mat::Zero(n, n);
  for (int j = 0; j < gbm.n_t(); ++j) {
    Mat step = Mat::Zero(n, n);
    std::vector<Mat> hj;
    for (int a = 0; a < noise.dirs(); ++a) {
      hj.push_back(h.value(j, a));
      step += h.value(j, a) * noise.increment(j, a);
    }
    // Compensator = one half of the bracket of int <H, dX> with itself.
    // For odd H the compensator-true bracket is -Tr_{G*Theta}(H (x) H)
    // (same graded sign as in quadratic_variation), so the exponent is
    // int <H, dX> + 1/2 int Tr(H (x) H) ds; this reduces to the familiar
    // minus form exactly when Tr(H (x) H) = 0.
    step += 0.5 * dt * trace_pairing(noise.gbar_pair(), hj, hj);
    out.exponent[j + 1] = out.exponent[j] + step;
  }

  int worst_terms = 0;
  double worst_defect = 0.0;
  for (int m = 0; m <= gbm.n_t(); ++m) {
    const Mat& e = out.exponent[m];
    Mat acc = Mat::Identity(n, n);
    Mat term = Mat::Identity(n, n);
    double scale = std::max(1.0, e.norm());
    int k = 0;
    bool settled = false;
    for (k = 1; k <= max_terms; ++k) {
      term = Mat(term * e) / double(k);
      acc += term;
      if (term.norm() <= tol * scale) {
        settled = true;
        break;
      }
    }
    if (!settled)
      throw NovikovError(
          "stochastic_exponential: series did not settle within cutoff");
    worst_terms = std::max(worst_terms, k);
    Mat direct = e.exp();
    worst_defect = std::max(
        worst_defect, (acc - direct).norm() / std::max(1.0, direct.norm()));
    out.z[m] = acc;
  }
  out.series_terms = worst_terms;
  out.series_vs_expm = worst_defect;
  out.novikov_ok = true;
  return out;
}

SignedExpectation::SignedExpectation(const GBMProcess& gbm, Mat z_inf,
                                     double norm_tol)
    : gbm_(&gbm), z_inf_(std::move(z_inf)) {
  const QuasiFreeModel& model = gbm.model();
  Complex normc = model.state(z_inf_);
  if (std::abs(normc - Complex(1.0)) > norm_tol)
    throw InvalidInput("SignedExpectation: omega(Z_inf) != 1");
  const Filtration& filt = gbm.filtration();
  for (int j = 0; j < filt.levels(); ++j) {
    Mat zj = filt.cond_exp(z_inf_, j);
    Eigen::PartialPivLU<Mat> lu(zj);
    Mat inv = lu.inverse();
    double cn = zj.norm() * inv.norm() / zj.rows();
    double defect = (zj * inv - Mat::Identity(zj.rows(), zj.cols())).norm();
    if (!std::isfinite(defect) || defect > 1e-6)
      throw InvertibilityError("SignedExpectation: Z_t not invertible");
    z_.push_back(std::move(zj));
    z_inv_.push_back(std::move(inv));
    cond_.push_back(cn);
  }
}

Complex SignedExpectation::expect(const Mat& a) const {
  return gbm_->model().state_product(a, z_inf_);
}

Mat SignedExpectation::cond(const Mat& a, int level) const {
  return gbm_->filtration().cond_exp(Mat(a * z_inf_), level) *
         z_inv_.at(level);
}

Complex matching_moment(const GBMProcess& gbm,
                        const std::vector<std::pair<double, Vec>>& points) {
  int n = static_cast<int>(points.size());
  return matching_sum(n, [&](int i, int j) {
    return gbm.covariance(points[i].second, points[j].second,
                          std::min(points[i].first, points[j].first));
  });
}

GirsanovShift girsanov_shift(const GridNoise& noise,
                             const AdaptedSimpleProcess& h) {
  const GBMProcess& gbm = noise.gbm();
  Eigen::Index n = gbm.model().dim();
  double dt = gbm.dt();
  std::vector<std::vector<Mat>> b(gbm.n_t() + 1);
  for (int m = 0; m <= gbm.n_t(); ++m) b[m].resize(noise.dirs());
  for (int a = 0; a < noise.dirs(); ++a) {
    // H_s(Gbar v_a) expanded over the real basis: Gbar v_a = sum_b c_b v_b
    // with c_b = <v_b, Gbar v_a>.
    Vec gv = gbm.gbar(noise.dir(a));
    Mat drift = Mat::Zero(n, n);
    b[0][a] = Mat::Zero(n, n);
    for (int m = 1; m <= gbm.n_t(); ++m) {
      Mat hgv = Mat::Zero(n, n);
      for (int bdir = 0; bdir < noise.dirs(); ++bdir) {
        Complex c = noise.dir(bdir).dot(gv);
        if (c != Complex(0.0)) hgv += c * h.value(m - 1, bdir);
      }
      drift += dt * hgv;
      b[m][a] = Mat(noise.field(m, a)) - drift;
    }
  }

  StochasticExponential se = stochastic_exponential(noise, h);
  return GirsanovShift{std::move(b), SignedExpectation(gbm, se.z.back())};
}

Mat shifted_field(const GridNoise& noise, const GirsanovShift& gs, int m,
                  const Vec& v) {
  Eigen::Index n = noise.gbm().model().dim();
  Mat out = Mat::Zero(n, n);
  for (int a = 0; a < noise.dirs(); ++a) {
    Complex c = noise.dir(a).dot(v);
    if (c != Complex(0.0)) out += c * gs.b.at(m).at(a);
  }
  return out;
}

namespace {

using GPoly = GrassmannPolynomial;

struct CellPoly {
  std::vector<GPoly> coeff;  // coeff[k] multiplies (t - t_cell)^k
};

}  // namespace

LevyCheckReport levy_check(const GridNoise& noise,
                           const std::function<Mat(int, int)>& b_field,
                           const SignedExpectation& se,
                           const std::vector<std::vector<Vec>>& directions) {
  const GBMProcess& gbm = noise.gbm();
  const QuasiFreeModel& model = gbm.model();
  int n_res = gbm.spec().n_reserved;
  int nf = static_cast<int>(directions.size());
  if (nf > n_res)
    throw InvalidInput("levy_check: needs one reserved mode per direction");
  int nt = gbm.n_t();
  double dt = gbm.dt();
  Eigen::Index dim = model.dim();

  for (const auto& f : directions)
    if (static_cast<int>(f.size()) != nt)
      throw InvalidInput("levy_check: piecewise direction per cell");

  // Measured side: Y_i(T) = sum_j sum_a <Theta f_i(j), v_a> dB_j(v_a).
  std::vector<Mat> y(nf, Mat::Zero(dim, dim));
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nt; ++j) {
      Vec tf = gbm.theta_h(directions[i][j]);
      for (int a = 0; a < noise.dirs(); ++a) {
        Complex c = tf.dot(noise.dir(a));
        if (c != Complex(0.0)) y[i] += c * (b_field(j + 1, a) - b_field(j, a));
      }
    }

  std::vector<Mat> thetas(nf);
  for (int i = 0; i < nf; ++i) thetas[i] = gbm.reserved_generator(i);

  // Bracket pairing of the scalar integrands F^i(v) = <Theta f_i, v>.
  auto lambda_pair = [&](int i, int j, int cell) -> Complex {
    Complex acc = 0.0;
    Vec tfi = gbm.theta_h(directions[i][cell]);
    Vec tfj = gbm.theta_h(directions[j][cell]);
    for (int a = 0; a < noise.dirs(); ++a)
      for (int b = 0; b < noise.dirs(); ++b)
        acc += noise.gbar_pair()(a, b) * tfi.dot(noise.dir(a)) *
               tfj.dot(noise.dir(b));
    return acc;
  };

  int nsets = 1 << nf;
  std::vector<GPoly> s_node(nsets, GPoly(nf, 0));
  for (int set = 0; set < nsets; ++set)
    s_node[set] = GPoly::constant(nf, 0, 1.0);

  // Exact cellwise integration of the triangular ODE system
  // S_A(t) = S_A(t_j) + sum_{{i,k} in A} Lambda_{ik} theta_k theta_i
  //          int_{t_j}^t S_{A \ {i,k}}(s) ds.
  for (int cell = 0; cell < nt; ++cell) {
    std::vector<CellPoly> sp(nsets);
    std::vector<int> order(nsets);
    for (int i = 0; i < nsets; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [](int a, int b) {
      int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    for (int set : order) {
      CellPoly p;
      p.coeff.push_back(s_node[set]);
      for (int i = 0; i < nf; ++i) {
        if (!(set & (1 << i))) continue;
        for (int k = i + 1; k < nf; ++k) {
          if (!(set & (1 << k))) continue;
          Complex lam = lambda_pair(i, k, cell);
          GPoly tt = GPoly::anti_var(nf, 0, k) * GPoly::anti_var(nf, 0, i);
          int sub = set & ~(1 << i) & ~(1 << k);
          const CellPoly& q = sp[sub];
          for (std::size_t deg = 0; deg < q.coeff.size(); ++deg) {
            while (p.coeff.size() <= deg + 1) p.coeff.push_back(GPoly(nf, 0));
            p.coeff[deg + 1] =
                p.coeff[deg + 1] + tt * q.coeff[deg] * (lam / double(deg + 1));
          }
        }
      }
      sp[set] = p;
    }
    for (int set = 0; set < nsets; ++set) {
      GPoly val(nf, 0);
      double td = 1.0;
      for (std::size_t deg = 0; deg < sp[set].coeff.size(); ++deg) {
        val = val + sp[set].coeff[deg] * Complex(td);
        td *= dt;
      }
      s_node[set] = val;
    }
  }

  // Extract measured theta-basis coefficients on the reserved block.
  Eigen::Index dim_res = Eigen::Index{1} << n_res;
  auto restrict_block = [&](const Mat& x) {
    return Mat(x.block(0, 0, dim_res, dim_res));
  };
  // Basis products in descending index order, matching the evaluation
  // convention of GrassmannPolynomial monomials.
  std::vector<Mat> theta_basis(1 << nf);
  for (int set = 0; set < (1 << nf); ++set) {
    Mat prod = Mat::Identity(dim, dim);
    for (int i = nf - 1; i >= 0; --i)
      if (set & (1 << i)) prod = Mat(prod * thetas[i]);
    theta_basis[set] = restrict_block(prod);
  }
  Eigen::MatrixXcd basis_flat(dim_res * dim_res, 1 << nf);
  for (int set = 0; set < (1 << nf); ++set)
    basis_flat.col(set) = Eigen::Map<const Eigen::VectorXcd>(
        theta_basis[set].data(), dim_res * dim_res);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(basis_flat);

  LevyCheckReport rep;
  for (int set = 0; set < nsets; ++set) {
    Mat prod = Mat::Identity(dim, dim);
    for (int i = 0; i < nf; ++i) {
      if (!(set & (1 << i))) continue;
      prod = Mat(prod * (Mat::Identity(dim, dim) + Mat(thetas[i] * y[i])));
    }
    Mat measured = restrict_block(se.cond(prod, 0));
    Eigen::VectorXcd rhs_flat = Eigen::Map<const Eigen::VectorXcd>(
        measured.data(), dim_res * dim_res);
    Eigen::VectorXcd coeffs = qr.solve(rhs_flat);

    for (int b = 0; b < (1 << nf); ++b) {
      Complex ode = 0.0;
      auto it =
          s_node[set].terms().find({static_cast<std::uint32_t>(b), {}});
      if (it != s_node[set].terms().end()) ode = it->second;
      double dev = std::abs(coeffs(b) - ode);
      if (set == 0 && b == 0) rep.zero_set_defect = std::abs(coeffs(0) - 1.0);
      rep.max_deviation = std::max(rep.max_deviation, dev);
    }
  }
  return rep;
}

std::vector<GrassmannPolynomial> linear_drift(const GridNoise& noise,
                                              const Mat& a) {
  int nd = noise.dirs();
  std::vector<GrassmannPolynomial> mu;
  for (int al = 0; al < nd; ++al) {
    GrassmannPolynomial p(nd, 0);
    Vec av = a * noise.dir(al);
    for (int be = 0; be < nd; ++be) {
      Complex c = noise.dir(be).dot(av);
      if (c != Complex(0.0))
        p = p + GrassmannPolynomial::anti_var(nd, 0, be) * (-c);
    }
    mu.push_back(p);
  }
  return mu;
}

StrongSolution sde_strong_solve(const GridNoise& noise,
                                const std::vector<GrassmannPolynomial>& mu,
                                const std::vector<Mat>& psi0,
                                const std::vector<std::vector<Mat>>& b_path,
                                double tol, int max_iter) {
  const GBMProcess& gbm = noise.gbm();
  Eigen::Index n = gbm.model().dim();
  int nt = gbm.n_t();
  int nd = noise.dirs();
  double dt = gbm.dt();
  if (static_cast<int>(mu.size()) != nd ||
      static_cast<int>(psi0.size()) != nd)
    throw InvalidInput("sde_strong_solve: one entry per real direction");

  StrongSolution sol;
  sol.psi.assign(nt + 1, std::vector<Mat>(nd));
  for (int m = 0; m <= nt; ++m)
    for (int a = 0; a < nd; ++a) sol.psi[m][a] = psi0[a] + b_path[m][a];

  for (int it = 0; it < max_iter; ++it) {
    std::vector<std::vector<Mat>> next(nt + 1, std::vector<Mat>(nd));
    std::vector<std::vector<Mat>> drift(
        nt + 1, std::vector<Mat>(nd, Mat::Zero(n, n)));
    for (int m = 1; m <= nt; ++m)
      for (int a = 0; a < nd; ++a)
        drift[m][a] =
            drift[m - 1][a] + dt * mu[a].eval_odd(sol.psi[m - 1], n);
    double delta = 0.0;
    for (int m = 0; m <= nt; ++m)
      for (int a = 0; a < nd; ++a) {
        next[m][a] = psi0[a] + drift[m][a] + b_path[m][a];
        delta =
            std::max(delta, operator_norm(Mat(next[m][a] - sol.psi[m][a])));
      }
    sol.psi = std::move(next);
    sol.iterations = it + 1;
    sol.residual = delta;
    if (delta < tol) return sol;
  }
  throw DivergenceError("sde_strong_solve: Picard did not converge");
}

Vec gbar_solve(const GBMProcess& gbm, const Vec& y) {
  auto basis = real_theta_basis(gbm.h_dim());
  int nd = static_cast<int>(basis.size());
  // Gbar(sum c_a v_a) = sum conj(c_a) Gbar v_a; expanding Gbar v_a over the
  // real basis gives a linear system for conj(c).
  Mat r(nd, nd);
  for (int a = 0; a < nd; ++a) {
    Vec gv = gbm.gbar(basis[a]);
    for (int b = 0; b < nd; ++b) r(b, a) = basis[b].dot(gv);
  }
  Vec d(nd);
  for (int b = 0; b < nd; ++b) d(b) = basis[b].dot(y);
  Eigen::FullPivLU<Mat> lu(r);
  if (!lu.isInvertible())
    throw InvertibilityError("gbar_solve: Gbar is singular");
  Vec cbar = lu.solve(d);
  Vec x = Vec::Zero(gbm.h_dim());
  for (int a = 0; a < nd; ++a) x += std::conj(cbar(a)) * basis[a];
  return x;
}

}  // namespace ncpg

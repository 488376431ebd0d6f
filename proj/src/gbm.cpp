#include "ncpg/gbm.hpp"

#include <cmath>

namespace ncpg {

namespace {

Conjugation gbm_conjugation(const GBMSpec& spec) {
  int d = spec.n_reserved + spec.n_t * spec.h_dim;
  Conjugation c = Conjugation::identity(d);
  int half = spec.h_dim / 2;
  for (int cell = 0; cell < spec.n_t; ++cell) {
    int base = spec.n_reserved + cell * spec.h_dim;
    for (int i = 0; i < half; ++i) {
      c.perm[base + i] = base + i + half;
      c.perm[base + i + half] = base + i;
    }
  }
  return c;
}

}  // namespace

GBMProcess::GBMProcess(const GBMSpec& spec, int mode_cap) : spec_(spec) {
  if (spec_.h_dim % 2 != 0) throw InvalidInput("GBMSpec: h_dim must be even");
  if (!(spec_.mu > 0.0 && spec_.mu < 1.0))
    throw InvalidInput("GBMSpec: mu must lie in (0,1)");
  if (spec_.n_t < 1 || spec_.T <= 0.0)
    throw InvalidInput("GBMSpec: bad time grid");
  if (spec_.C.size() == 0)
    spec_.C = Mat::Identity(spec_.h_dim, spec_.h_dim);
  if (spec_.C.rows() != spec_.h_dim || spec_.C.cols() != spec_.h_dim)
    throw InvalidInput("GBMSpec: C shape mismatch");

  double mu2 = spec_.mu * spec_.mu;
  kappa_ = 1.0 / (1.0 / mu2 - mu2);

  int d = spec_.n_reserved + spec_.n_t * spec_.h_dim;
  RVec rho = RVec::Constant(d, spec_.mu);
  model_ = std::make_unique<QuasiFreeModel>(rho, gbm_conjugation(spec_),
                                            mode_cap);

  std::vector<double> times;
  std::vector<int> kept;
  for (int j = 0; j <= spec_.n_t; ++j) {
    times.push_back(j * spec_.dt());
    kept.push_back(spec_.n_reserved + j * spec_.h_dim);
  }
  filt_ = std::make_unique<Filtration>(*model_, times, kept);
}

Vec GBMProcess::theta_h(const Vec& f) const {
  if (f.size() != spec_.h_dim) throw InvalidInput("theta_h: length mismatch");
  int half = spec_.h_dim / 2;
  Vec out(f.size());
  for (int i = 0; i < half; ++i) {
    out(i) = std::conj(f(i + half));
    out(i + half) = std::conj(f(i));
  }
  return out;
}

Mat GBMProcess::u_matrix() const {
  Mat u = Mat::Identity(spec_.h_dim, spec_.h_dim);
  for (int i = spec_.h_dim / 2; i < spec_.h_dim; ++i) u(i, i) = -1.0;
  return u;
}

Mat GBMProcess::c_matrix() const { return spec_.C; }
Mat GBMProcess::g_matrix() const { return spec_.C * spec_.C * u_matrix(); }
Mat GBMProcess::abs_g_matrix() const { return spec_.C * spec_.C; }

Vec GBMProcess::gbar(const Vec& f) const {
  return Mat(g_matrix().adjoint()) * theta_h(f);
}

Complex GBMProcess::covariance(const Vec& f, const Vec& g, double st) const {
  return st * theta_h(f).dot(g_matrix() * g);
}

Vec GBMProcess::embed(int m, const Vec& f) const {
  if (m < 0 || m > spec_.n_t) throw InvalidInput("embed: off-grid index");
  if (f.size() != spec_.h_dim) throw InvalidInput("embed: length mismatch");
  Vec cellv = spec_.C * (u_matrix() * f);
  Vec out = Vec::Zero(model_->d());
  double wcell = std::sqrt(kappa_ * spec_.dt());
  for (int cell = 0; cell < m; ++cell)
    out.segment(spec_.n_reserved + cell * spec_.h_dim, spec_.h_dim) =
        wcell * cellv;
  return out;
}

Vec GBMProcess::embed_tilde(int m, const Vec& f) const {
  if (m < 0 || m > spec_.n_t) throw InvalidInput("embed_tilde: off-grid");
  if (f.size() != spec_.h_dim)
    throw InvalidInput("embed_tilde: length mismatch");
  Vec cellv = spec_.C * theta_h(f);
  Vec out = Vec::Zero(model_->d());
  double wcell = std::sqrt(kappa_ * spec_.dt());
  for (int cell = 0; cell < m; ++cell)
    out.segment(spec_.n_reserved + cell * spec_.h_dim, spec_.h_dim) =
        wcell * cellv;
  return out;
}

SpMat GBMProcess::field_sparse(int m, const Vec& f) const {
  return SpMat(model_->gamma_dag(embed(m, f)) -
               model_->gamma(embed_tilde(m, f)));
}

SpMat GBMProcess::increment_sparse(int m_lo, int m_hi, const Vec& f) const {
  return SpMat(field_sparse(m_hi, f) - field_sparse(m_lo, f));
}

Vec GBMProcess::field_k_argument(int m, const Vec& f) const {
  int d = model_->d();
  Vec fk = Vec::Zero(2 * d);
  fk.head(d) = spec_.mu * embed(m, f);
  fk.tail(d) = -(1.0 / spec_.mu) * model_->theta().apply(embed_tilde(m, f));
  return fk;
}

Mat GBMProcess::reserved_generator(int j) const {
  if (j < 0 || j >= spec_.n_reserved)
    throw InvalidInput("reserved_generator: index out of range");
  // beta(e_j (+) 0) = mu^{-1} gamma_dag(e_j): a genuine Grassmann generator
  // (theta^2 = 0, unit omega-norm by Eq. (3.5)), anticommuting with every
  // field by the CAR on orthogonal modes.
  Vec e = Vec::Zero(model_->d());
  e(j) = 1.0 / spec_.mu;
  return Mat(model_->gamma_dag(e));
}

int GBMProcess::grid_index(double t) const {
  double x = t / spec_.dt();
  int m = static_cast<int>(std::lround(x));
  if (m < 0 || m > spec_.n_t || std::abs(x - m) > 1e-9)
    throw InvalidInput("grid_index: time not on the grid");
  return m;
}

std::vector<Vec> real_theta_basis(int h_dim) {
  if (h_dim % 2 != 0) throw InvalidInput("real_theta_basis: h_dim even");
  int half = h_dim / 2;
  std::vector<Vec> basis;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < half; ++j) {
    Vec vp = Vec::Zero(h_dim);
    vp(j) = inv_sqrt2;
    vp(j + half) = inv_sqrt2;
    basis.push_back(vp);
    Vec vm = Vec::Zero(h_dim);
    vm(j) = Complex(0.0, inv_sqrt2);
    vm(j + half) = Complex(0.0, -inv_sqrt2);
    basis.push_back(vm);
  }
  return basis;
}

std::vector<CovarianceReportRow> gbm_covariance_report(
    const GBMProcess& gbm, const std::vector<double>& r_grid) {
  const QuasiFreeModel& model = gbm.model();
  int hd = gbm.h_dim();
  // <Theta f, G g> vanishes exactly where <f, C^2 g> does not, so the two
  // constants are probed on separate direction pairs.
  Vec f = Vec::Zero(hd), g_cov = Vec::Zero(hd);
  f(0) = 1.0;
  g_cov(hd / 2) = 1.0;
  int m = gbm.n_t();
  double t = gbm.filtration().time(m);
  Mat xf = gbm.field(m, f);
  Mat xg_cov = gbm.field(m, g_cov);
  Complex cov_fg = gbm.covariance(f, g_cov, t);
  Complex quad_ff = t * f.dot(gbm.abs_g_matrix() * f);

  std::vector<CovarianceReportRow> rows;
  for (double r : r_grid) {
    for (double rp : r_grid) {
      Mat a = model.twist(xf, r);
      Mat b_cov = model.twist(xg_cov, rp);
      Mat b_quad = model.twist(xf, rp);
      Mat astar = model.twist(Mat(xf.adjoint()), r);
      Complex c = model.state_product(a, b_cov) / cov_fg;
      Complex cp = model.state_product(astar, b_quad) / quad_ff;
      rows.push_back({r, rp, c, cp});
    }
  }
  return rows;
}

}  // namespace ncpg

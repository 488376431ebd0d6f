#include "ncpg/araki_wyss.hpp"

#include <bit>
#include <cmath>
#include <functional>

namespace ncpg {

Conjugation Conjugation::identity(int d) {
  Conjugation c;
  c.perm.resize(d);
  for (int i = 0; i < d; ++i) c.perm[i] = i;
  return c;
}

Conjugation Conjugation::swap_pairs(int d) {
  if (d % 2 != 0) throw InvalidInput("swap_pairs: dimension must be even");
  Conjugation c;
  c.perm.resize(d);
  int half = d / 2;
  for (int i = 0; i < half; ++i) {
    c.perm[i] = i + half;
    c.perm[i + half] = i;
  }
  return c;
}

Vec Conjugation::apply(const Vec& f) const {
  if (f.size() != dim()) throw InvalidInput("Conjugation: length mismatch");
  Vec out(f.size());
  for (int i = 0; i < dim(); ++i) out(perm[i]) = std::conj(f(i));
  return out;
}

QuasiFreeModel::QuasiFreeModel(const RVec& rho_spectrum,
                               const Conjugation& theta, int mode_cap)
    : d_(static_cast<int>(rho_spectrum.size())),
      rho_(rho_spectrum),
      theta_(theta),
      basis_(d_, mode_cap) {
  for (int i = 0; i < d_; ++i) {
    if (!(rho_(i) > 0.0 && rho_(i) < 1.0))
      throw InvalidInput("QuasiFreeModel: rho spectrum must lie in (0,1)");
  }
  if (theta_.dim() != d_)
    throw InvalidInput("QuasiFreeModel: conjugation dimension mismatch");
  for (int i = 0; i < d_; ++i) {
    if (theta_.perm[theta_.perm[i]] != i)
      throw InvalidInput("QuasiFreeModel: conjugation is not an involution");
    if (std::abs(rho_(theta_.perm[i]) - rho_(i)) > 1e-14)
      throw InvalidInput("QuasiFreeModel: theta rho theta != rho");
  }

  RVec nu(d_), scale(d_);
  for (int i = 0; i < d_; ++i) {
    double r = rho_(i);
    nu(i) = 1.0 / (1.0 + std::pow(r, 4.0));
    scale(i) = std::sqrt(r * r + 1.0 / (r * r));
  }
  scale_ = scale;

  w_.resize(dim());
  logw_.resize(dim());
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim()); ++s) {
    double lw = 0.0;
    for (int i = 0; i < d_; ++i)
      lw += std::log((s >> i) & 1 ? nu(i) : 1.0 - nu(i));
    logw_(static_cast<Eigen::Index>(s)) = lw;
    w_(static_cast<Eigen::Index>(s)) = std::exp(lw);
  }
}

Mat QuasiFreeModel::w_power(double z) const {
  Mat out = Mat::Zero(dim(), dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    out(i, i) = std::exp(z * logw_(i));
  return out;
}

SpMat QuasiFreeModel::gamma(const Vec& f) const {
  if (f.size() != d_) throw InvalidInput("gamma: length mismatch");
  return basis_.annihilator(scale_.cast<Complex>().asDiagonal() * f);
}

SpMat QuasiFreeModel::gamma_dag(const Vec& f) const {
  if (f.size() != d_) throw InvalidInput("gamma_dag: length mismatch");
  return basis_.creator(scale_.cast<Complex>().asDiagonal() * f);
}

SpMat QuasiFreeModel::beta(const Vec& fk) const {
  if (fk.size() != 2 * d_) throw InvalidInput("beta: length must be 2d");
  Vec f = fk.head(d_), fp = fk.tail(d_);
  Vec rinv_f(d_), theta_rho_fp(d_);
  for (int i = 0; i < d_; ++i) rinv_f(i) = f(i) / rho_(i);
  Vec rho_fp(d_);
  for (int i = 0; i < d_; ++i) rho_fp(i) = rho_(i) * fp(i);
  theta_rho_fp = theta_.apply(rho_fp);
  return SpMat(gamma_dag(rinv_f) + gamma(theta_rho_fp));
}

Complex QuasiFreeModel::state(const Mat& x) const {
  if (x.rows() != dim() || x.cols() != dim())
    throw InvalidInput("state: shape mismatch");
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < dim(); ++i) acc += w_(i) * x(i, i);
  return acc;
}

Mat QuasiFreeModel::modular_flow(const Mat& x, Complex tau) const {
  if (x.rows() != dim() || x.cols() != dim())
    throw InvalidInput("modular_flow: shape mismatch");
  Mat out(dim(), dim());
  Complex itau = Complex(0.0, 1.0) * tau;
  for (Eigen::Index r = 0; r < dim(); ++r)
    for (Eigen::Index c = 0; c < dim(); ++c)
      out(r, c) = std::exp(itau * (logw_(r) - logw_(c))) * x(r, c);
  return out;
}

Mat QuasiFreeModel::twist(const Mat& x, double t) const {
  return modular_flow(x, Complex(0.0, -t));
}

Mat QuasiFreeModel::sandwich(const Mat& x, double a, double b) const {
  if (x.rows() != dim() || x.cols() != dim())
    throw InvalidInput("sandwich: shape mismatch");
  Mat out(dim(), dim());
  for (Eigen::Index r = 0; r < dim(); ++r)
    for (Eigen::Index c = 0; c < dim(); ++c)
      out(r, c) = std::exp(a * logw_(r) + b * logw_(c)) * x(r, c);
  return out;
}

Complex QuasiFreeModel::state_product(const Mat& a, const Mat& b) const {
  if (a.rows() != dim() || b.rows() != dim())
    throw InvalidInput("state_product: shape mismatch");
  Complex acc = 0.0;
  for (Eigen::Index r = 0; r < dim(); ++r)
    acc += w_(r) * a.row(r).transpose().cwiseProduct(b.col(r)).sum();
  return acc;
}

Mat QuasiFreeModel::wick(const std::vector<Vec>& fks) const {
  int n = static_cast<int>(fks.size());
  if (n > 2 * d_) throw InvalidInput("wick: degree exceeds 2d");
  if (n > 20) throw ResourceError("wick: degree too large to memoize");
  std::vector<Mat> betas(n);
  Mat pair2(n, n);
  for (int i = 0; i < n; ++i) betas[i] = beta_dense(fks[i]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pair2(i, j) = (i < j) ? state_product(betas[i], betas[j]) : Complex(0.0);

  std::map<std::uint32_t, Mat> memo;
  std::function<const Mat&(std::uint32_t)> rec =
      [&](std::uint32_t mask) -> const Mat& {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    Mat result;
    if (mask == 0) {
      result = Mat::Identity(dim(), dim());
    } else {
      int first = std::countr_zero(mask);
      std::uint32_t rest = mask & (mask - 1);
      result = betas[first] * rec(rest);
      // sum over later legs with alternating sign: (-1)^position
      int pos = 0;
      for (std::uint32_t m = rest; m != 0; m &= (m - 1)) {
        int j = std::countr_zero(m);
        ++pos;
        double sign = (pos % 2 == 1) ? -1.0 : 1.0;
        result += sign * pair2(first, j) * rec(mask & ~(1u << j) & ~(1u << first));
      }
    }
    return memo.emplace(mask, std::move(result)).first->second;
  };
  return rec((1u << n) - 1u);
}

Vec QuasiFreeModel::k_basis_vector(int k) const {
  if (k < 0 || k >= 2 * d_) throw InvalidInput("k_basis_vector: bad index");
  Vec v = Vec::Zero(2 * d_);
  v(k) = 1.0;
  return v;
}

const Mat& QuasiFreeModel::wick_monomial(const std::vector<int>& legs) const {
  std::uint32_t key = 0;
  int prev = -1;
  for (int l : legs) {
    if (l <= prev) throw InvalidInput("wick_monomial: legs must increase");
    if (l >= 2 * d_) throw InvalidInput("wick_monomial: leg out of range");
    key |= (1u << l);
    prev = l;
  }
  auto it = monomial_cache_.find(key);
  if (it != monomial_cache_.end()) return it->second;
  std::vector<Vec> fks;
  for (int l : legs) fks.push_back(k_basis_vector(l));
  Mat m = wick(fks);
  return monomial_cache_.emplace(key, std::move(m)).first->second;
}

std::map<std::uint32_t, Complex> QuasiFreeModel::wick_basis_decompose(
    const Mat& x) const {
  if (d_ > 5)
    throw ResourceError("wick_basis_decompose: 4^d coefficients, d cap is 5");
  std::map<std::uint32_t, Complex> coeff;
  std::uint32_t full = (1u << (2 * d_)) - 1u;
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    std::vector<int> legs;
    for (int l = 0; l < 2 * d_; ++l)
      if (mask & (1u << l)) legs.push_back(l);
    const Mat& mono = wick_monomial(legs);
    coeff[mask] = state_product(Mat(mono.adjoint()), x);
  }
  return coeff;
}

Mat QuasiFreeModel::wick_recompose(
    const std::map<std::uint32_t, Complex>& coeff) const {
  Mat x = Mat::Zero(dim(), dim());
  for (const auto& [mask, c] : coeff) {
    std::vector<int> legs;
    for (int l = 0; l < 2 * d_; ++l)
      if (mask & (1u << l)) legs.push_back(l);
    x += c * wick_monomial(legs);
  }
  return x;
}

Mat QuasiFreeModel::ou_semigroup(const Mat& x, double t) const {
  if (t < 0.0) throw InvalidInput("ou_semigroup: negative time");
  auto coeff = wick_basis_decompose(x);
  for (auto& [mask, c] : coeff) c *= std::exp(-t * std::popcount(mask));
  return wick_recompose(coeff);
}

Complex matching_sum(int n,
                     const std::function<Complex(int, int)>& two_point) {
  if (n % 2 != 0) return 0.0;
  std::function<Complex(std::uint32_t)> rec =
      [&](std::uint32_t mask) -> Complex {
    if (mask == 0) return 1.0;
    int first = std::countr_zero(mask);
    std::uint32_t rest = mask & (mask - 1);
    Complex acc = 0.0;
    int pos = 0;
    for (std::uint32_t m = rest; m != 0; m &= (m - 1)) {
      int j = std::countr_zero(m);
      double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      acc += sign * two_point(first, j) * rec(rest & ~(1u << j));
      ++pos;
    }
    return acc;
  };
  return rec(n >= 32 ? ~0u : ((1u << n) - 1u));
}

DoubledOracle::DoubledOracle(const QuasiFreeModel& model, int mode_cap)
    : model_(model), basis_(2 * model.d(), mode_cap) {}

Mat DoubledOracle::gamma(const Vec& f) const {
  int d = model_.d();
  if (f.size() != d) throw InvalidInput("DoubledOracle::gamma: length");
  Vec lhs = Vec::Zero(2 * d), rhs = Vec::Zero(2 * d);
  for (int i = 0; i < d; ++i) lhs(i) = model_.rho()(i) * f(i);
  Vec tf = model_.theta().apply(f);
  for (int i = 0; i < d; ++i) rhs(d + i) = tf(i) / model_.rho()(i);
  return Mat(basis_.annihilator(lhs)) + Mat(basis_.creator(rhs));
}

Mat DoubledOracle::gamma_dag(const Vec& f) const {
  return Mat(gamma(f).adjoint());
}

Complex DoubledOracle::vacuum_state(const Mat& x) const { return x(0, 0); }

Vec DoubledOracle::astar_omega(const std::vector<Vec>& fs) const {
  return basis_.wedge_vector(fs);
}

Mat DoubledOracle::beta(const Vec& fk) const {
  int d = model_.d();
  if (fk.size() != 2 * d) throw InvalidInput("DoubledOracle::beta: length");
  Vec f = fk.head(d), fp = fk.tail(d);
  Vec rinv_f(d), rho_fp(d);
  for (int i = 0; i < d; ++i) rinv_f(i) = f(i) / model_.rho()(i);
  for (int i = 0; i < d; ++i) rho_fp(i) = model_.rho()(i) * fp(i);
  return gamma_dag(rinv_f) + gamma(model_.theta().apply(rho_fp));
}

HyperNormEstimate hyper_norm_estimate(const QuasiFreeModel& model, double t,
                                      double p, double q, int probes,
                                      std::uint64_t seed) {
  if (!(p > 1.0) || !(q > 1.0) || std::isinf(p) || std::isinf(q))
    throw InvalidInput("hyper_norm_estimate: p, q must lie in (1, inf)");
  if (probes < 1) throw InvalidInput("hyper_norm_estimate: probes >= 1");
  Rng rng = Rng(seed).split("hyper_norm_estimate");
  Eigen::Index n = model.dim();

  auto ratio = [&](const Mat& x) -> double {
    Mat num = model.ou_semigroup(x, t) * model.w_power(1.0 / q);
    Mat den = x * model.w_power(1.0 / p);
    double dn = schatten_norm(den, p);
    if (dn == 0.0) return 0.0;
    return schatten_norm(num, q) / dn;
  };

  double best = 0.0;
  Mat best_x;
  for (int k = 0; k < probes; ++k) {
    Mat x = rng.cgaussian_matrix(n);
    double r = ratio(x);
    if (r > best) {
      best = r;
      best_x = x;
    }
  }
  // Local ascent around the best probe.
  double step = 0.5;
  for (int iter = 0; iter < 60; ++iter) {
    Mat cand = best_x + step * rng.cgaussian_matrix(n);
    double r = ratio(cand);
    if (r > best) {
      best = r;
      best_x = cand;
    } else {
      step *= 0.8;
    }
  }
  return {best, best_x};
}

}  // namespace ncpg

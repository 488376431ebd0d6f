#include "ncpg/filtration.hpp"

#include <bit>
#include <cmath>

namespace ncpg {

Filtration::Filtration(const QuasiFreeModel& model, std::vector<double> times,
                       std::vector<int> kept_modes)
    : model_(&model), times_(std::move(times)), kept_modes_(std::move(kept_modes)) {
  if (times_.empty() || times_.size() != kept_modes_.size())
    throw InvalidInput("Filtration: times/kept_modes mismatch");
  if (times_.front() != 0.0) throw InvalidInput("Filtration: t_0 must be 0");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (!(times_[i] > times_[i - 1]))
      throw InvalidInput("Filtration: times must increase");
    if (kept_modes_[i] < kept_modes_[i - 1])
      throw InvalidInput("Filtration: kept modes must be nested");
  }
  if (kept_modes_.back() > model.d())
    throw InvalidInput("Filtration: kept modes exceed model dimension");
}

Mat Filtration::cond_exp(const Mat& x, int level) const {
  if (level < 0 || level >= levels())
    throw InvalidInput("cond_exp: bad level");
  if (x.rows() != model_->dim() || x.cols() != model_->dim())
    throw InvalidInput("cond_exp: shape mismatch");
  int mA = kept_modes_[level];
  int d = model_->d();
  Eigen::Index dimA = Eigen::Index{1} << mA;
  Eigen::Index dimB = Eigen::Index{1} << (d - mA);

  // w(s) factorizes over modes, so w(b * dimA + a) = wA(a) * wBfull(b);
  // normalizing the b-section at a = 0 recovers the complement weights.
  RVec wB = RVec::Zero(dimB);
  double norm = 0.0;
  for (Eigen::Index b = 0; b < dimB; ++b) norm += model_->weights()(b * dimA);
  for (Eigen::Index b = 0; b < dimB; ++b)
    wB(b) = model_->weights()(b * dimA) / norm;

  Mat reduced = Mat::Zero(dimA, dimA);
  for (Eigen::Index b = 0; b < dimB; ++b)
    reduced += wB(b) * x.block(b * dimA, b * dimA, dimA, dimA);

  Mat out = Mat::Zero(model_->dim(), model_->dim());
  for (Eigen::Index b = 0; b < dimB; ++b)
    out.block(b * dimA, b * dimA, dimA, dimA) = reduced;
  return out;
}

Mat Filtration::cond_exp_wick(const Mat& x, int level) const {
  int mA = kept_modes_[level];
  int d = model_->d();
  auto coeff = model_->wick_basis_decompose(x);
  for (auto& [mask, c] : coeff) {
    for (int l = 0; l < 2 * d; ++l) {
      if (!(mask & (1u << l))) continue;
      int mode = (l < d) ? l : l - d;
      if (mode >= mA) {
        c = 0.0;
        break;
      }
    }
  }
  return model_->wick_recompose(coeff);
}

Mat Filtration::cond_exp_lp(const Mat& a, int level, double p,
                            double tau) const {
  if (p < 1.0) throw UnsupportedExponent("cond_exp_lp: p >= 1");
  double half = std::isinf(p) ? 0.0 : 0.5 / p;
  Mat x = model_->sandwich(a, -(half + tau), -(half - tau));
  Mat ex = cond_exp(x, level);
  return model_->sandwich(ex, half + tau, half - tau);
}

bool Filtration::is_level_element(const Mat& x, int level, double tol) const {
  double scale = std::max(1.0, x.norm());
  return (cond_exp(x, level) - x).norm() <= tol * scale;
}

HardyNorms hardy_norms(const Filtration& filt, const std::vector<Mat>& diffs,
                       double p, bool conditioned) {
  if (p < 1.0) throw UnsupportedExponent("hardy_norms: p >= 1");
  if (conditioned && p < 2.0)
    throw UnsupportedExponent(
        "hardy_norms: conditioned brackets need p >= 2");
  Eigen::Index n = filt.model().dim();
  Mat sc = Mat::Zero(n, n), sr = Mat::Zero(n, n);
  Mat scc = Mat::Zero(n, n), scr = Mat::Zero(n, n);
  HardyNorms out;
  double hd = 0.0;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    const Mat& a = diffs[k];
    Mat a2c = a.adjoint() * a;
    Mat a2r = a * a.adjoint();
    sc += a2c;
    sr += a2r;
    if (conditioned) {
      int lvl = (k == 0) ? 0 : static_cast<int>(k) - 1;
      scc += filt.cond_exp_lp(a2c, lvl, p / 2.0, 0.0);
      scr += filt.cond_exp_lp(a2r, lvl, p / 2.0, 0.0);
    }
    if (!std::isinf(p)) hd += std::pow(schatten_norm(a, p), p);
  }
  out.Hc = schatten_norm(psd_sqrt(sc), p);
  out.Hr = schatten_norm(psd_sqrt(sr), p);
  if (conditioned) {
    out.hc = schatten_norm(psd_sqrt(scc), p);
    out.hr = schatten_norm(psd_sqrt(scr), p);
  }
  out.hd = std::isinf(p) ? 0.0 : std::pow(hd, 1.0 / p);
  return out;
}

std::vector<Mat> q_sigma(const Filtration& filt,
                         const std::vector<Mat>& values,
                         const std::vector<int>& sigma) {
  int n_cells = static_cast<int>(values.size());
  if (n_cells + 1 != filt.levels())
    throw InvalidInput("q_sigma: values must cover the fine grid cells");
  if (sigma.empty() || sigma.front() != 0 ||
      sigma.back() != n_cells)
    throw InvalidInput("q_sigma: subdivision must span [0, N]");
  for (std::size_t i = 1; i < sigma.size(); ++i)
    if (sigma[i] <= sigma[i - 1])
      throw InvalidInput("q_sigma: subdivision must increase");

  std::vector<Mat> out(n_cells);
  for (std::size_t k = 0; k + 1 < sigma.size(); ++k) {
    int lo = sigma[k], hi = sigma[k + 1];
    double width = filt.time(hi) - filt.time(lo);
    Mat acc = Mat::Zero(filt.model().dim(), filt.model().dim());
    for (int j = lo; j < hi; ++j) {
      double dt = filt.time(j + 1) - filt.time(j);
      acc += dt * filt.cond_exp(values[j], sigma[k]);
    }
    acc /= width;
    for (int j = lo; j < hi; ++j) out[j] = acc;
  }
  return out;
}

MartingaleSequence martingale_from_terminal(const Filtration& filt,
                                            const Mat& x_terminal, double p) {
  if (!(p > 1.0) || std::isinf(p))
    throw UnsupportedExponent("martingale_from_terminal: p in (1, inf)");
  MartingaleSequence seq;
  seq.p = p;
  seq.values.reserve(filt.levels());
  for (int j = 0; j < filt.levels(); ++j)
    seq.values.push_back(filt.cond_exp(x_terminal, j));
  return seq;
}

}  // namespace ncpg

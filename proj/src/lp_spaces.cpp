#include "ncpg/lp_spaces.hpp"

#include <algorithm>
#include <cmath>

namespace ncpg {

double tau_range(double p) {
  if (std::isinf(p)) return 1.0;
  return 1.0 - 0.5 / p;
}

Mat twisted_embed(const QuasiFreeModel& model, const Mat& x, double p,
                  double tau) {
  if (p < 1.0) throw UnsupportedExponent("twisted_embed: p >= 1 required");
  double bound = tau_range(p);
  if (std::abs(tau) > bound + 1e-12)
    throw InvalidInput("twisted_embed: tau outside |tau| <= 1 - 1/2p");
  double half = std::isinf(p) ? 0.0 : 0.5 / p;
  return model.sandwich(x, half + tau, half - tau);
}

TwistedNormResult twisted_norm_detail(const QuasiFreeModel& model,
                                      const Mat& x, double p,
                                      double guard_tol) {
  TwistedNormResult res;
  double bound = tau_range(p);
  double end = std::max(schatten_norm(twisted_embed(model, x, p, bound), p),
                        schatten_norm(twisted_embed(model, x, p, -bound), p));
  double interior = 0.0;
  for (int k = 1; k <= 9; ++k) {
    double tau = -bound + 2.0 * bound * k / 10.0;
    interior = std::max(
        interior, schatten_norm(twisted_embed(model, x, p, tau), p));
  }
  res.value = std::max(end, interior);
  res.interior_max = interior;
  res.endpoint_guard_ok = interior <= end + guard_tol * std::max(1.0, end);
  return res;
}

double twisted_norm(const QuasiFreeModel& model, const Mat& x, double p) {
  return twisted_norm_detail(model, x, p).value;
}

double haagerup_norm(const Mat& a, double p) { return schatten_norm(a, p); }

TwistedElement::TwistedElement(const QuasiFreeModel& model, Mat x, double p)
    : model_(&model), x_(std::move(x)), p_(p) {
  if (p_ < 1.0) throw UnsupportedExponent("TwistedElement: p >= 1");
  if (x_.rows() != model.dim() || x_.cols() != model.dim())
    throw InvalidInput("TwistedElement: shape mismatch");
}

double TwistedElement::norm() const {
  if (!norm_cache_) norm_cache_ = twisted_norm(*model_, x_, p_);
  return *norm_cache_;
}

TwistedElement TwistedElement::product(const TwistedElement& other) const {
  if (model_ != other.model_)
    throw InvalidInput("TwistedElement::product: different models");
  double ip = std::isinf(p_) ? 0.0 : 1.0 / p_;
  double iq = std::isinf(other.p_) ? 0.0 : 1.0 / other.p_;
  if (ip + iq > 1.0 + 1e-12)
    throw UnsupportedExponent("TwistedElement::product: 1/p + 1/q > 1");
  double r = (ip + iq == 0.0) ? kPInf : 1.0 / (ip + iq);
  return TwistedElement(*model_, x_ * other.x_, r);
}

Complex expectation_extend(const TwistedElement& x) {
  return x.model().state(x.matrix());
}

double SpectralLaw::moment(double power) const {
  double acc = 0.0;
  for (const auto& [v, w] : atoms) acc += w * std::pow(v, power);
  return acc;
}

double SpectralLaw::abs_moment(double power) const {
  double acc = 0.0;
  for (const auto& [v, w] : atoms) acc += w * std::pow(std::abs(v), power);
  return acc;
}

double SpectralLaw::total_weight() const {
  double acc = 0.0;
  for (const auto& [v, w] : atoms) acc += w;
  return acc;
}

SpectralLaw spectral_law(const QuasiFreeModel& model, const Mat& x,
                         double cluster_tol) {
  Mat h = hermitize(x);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RVec& ev = es.eigenvalues();
  const Mat& vecs = es.eigenvectors();
  double scale = std::max(1.0, std::abs(ev(0)));
  scale = std::max(scale, std::abs(ev(ev.size() - 1)));

  SpectralLaw law;
  Eigen::Index i = 0;
  while (i < ev.size()) {
    double v = ev(i);
    double weight = 0.0;
    Eigen::Index j = i;
    while (j < ev.size() && std::abs(ev(j) - v) <= cluster_tol * scale) {
      Vec col = vecs.col(j);
      Complex w = 0.0;
      for (Eigen::Index r = 0; r < col.size(); ++r)
        w += std::conj(col(r)) * model.weights()(r) * col(r);
      weight += w.real();
      ++j;
    }
    law.atoms.emplace_back(v, weight);
    i = j;
  }
  return law;
}

}  // namespace ncpg

#include "ncpg/operator_kernel.hpp"

#include <cmath>

namespace ncpg {

bool is_finite(const Mat& a) { return a.allFinite(); }

double schatten_norm(const Mat& a, double p) {
  if (!is_finite(a)) throw InvalidInput("schatten_norm: non-finite entries");
  if (p < 1.0) throw InvalidInput("schatten_norm: p must be >= 1");
  if (a.rows() == 0) return 0.0;
  if (p == 2.0) return a.norm();  // Frobenius, no spectral solve needed
  Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a,
                                        Eigen::EigenvaluesOnly);
  RVec s2 = es.eigenvalues().cwiseMax(0.0);
  if (std::isinf(p)) return std::sqrt(s2.maxCoeff());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s2.size(); ++i)
    acc += std::pow(std::sqrt(s2(i)), p);
  return std::pow(acc, 1.0 / p);
}

double operator_norm(const Mat& a) { return schatten_norm(a, kPInf); }
double frobenius_norm(const Mat& a) { return a.norm(); }

double hermitian_defect(const Mat& a) {
  double scale = a.norm();
  if (scale == 0.0) return 0.0;
  return (a - Mat(a.adjoint())).norm() / scale;
}

Mat hermitize(const Mat& a, double tol) {
  if (!is_finite(a)) throw InvalidInput("hermitize: non-finite entries");
  if (hermitian_defect(a) > tol)
    throw InvalidInput("hermitize: Hermiticity defect above tolerance");
  return 0.5 * (a + Mat(a.adjoint()));
}

PositiveOperator::PositiveOperator(const Mat& base, double tol)
    : base_(hermitize(base, tol)) {
  Eigen::SelfAdjointEigenSolver<Mat> es(base_);
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
  if (eigenvalues_.minCoeff() <= 0.0)
    throw InvalidInput("PositiveOperator: spectrum not strictly positive");
}

Mat PositiveOperator::power(double z) const {
  double lmax = eigenvalues_.maxCoeff();
  if (eigenvalues_.minCoeff() < 1e-14 * lmax)
    throw SingularityError("PositiveOperator::power: near-singular base");
  if (z == 0.0) return Mat::Identity(dim(), dim());
  RVec pw(eigenvalues_.size());
  for (Eigen::Index i = 0; i < pw.size(); ++i)
    pw(i) = std::pow(eigenvalues_(i), z);
  return eigenvectors_ * pw.asDiagonal() * eigenvectors_.adjoint();
}

Mat matrix_function(const Mat& a, const std::function<Complex(double)>& f,
                    double tol) {
  Mat h = hermitize(a, tol);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec fd(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fd.size(); ++i) fd(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * fd.asDiagonal() * es.eigenvectors().adjoint();
}

Mat psd_sqrt(const Mat& a) {
  Mat h = hermitize(a, 1e-9);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  RVec sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace ncpg

#ifndef NCPG_OPERATOR_KERNEL_HPP
#define NCPG_OPERATOR_KERNEL_HPP

#include <functional>

#include "ncpg/common.hpp"

namespace ncpg {

// Default relative comparison tolerance, scaled by operator norm at use sites.
inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

bool is_finite(const Mat& a);

// Schatten p-norm (tr |a|^p)^{1/p}; p = infinity gives the operator norm.
// Singular values are obtained from the Hermitian spectrum of a* a.
double schatten_norm(const Mat& a, double p);

double operator_norm(const Mat& a);
double frobenius_norm(const Mat& a);

// Hermiticity defect ||a - a*|| relative to ||a||.
double hermitian_defect(const Mat& a);

// Symmetrizes (a + a*)/2 when the defect is below tol, rejects otherwise.
Mat hermitize(const Mat& a, double tol = kHermitianTol);

// Positive operator with its spectral data cached at construction.
class PositiveOperator {
 public:
  explicit PositiveOperator(const Mat& base, double tol = kHermitianTol);

  Eigen::Index dim() const { return base_.rows(); }
  const Mat& matrix() const { return base_; }
  const RVec& eigenvalues() const { return eigenvalues_; }
  const Mat& eigenvectors() const { return eigenvectors_; }

  // W^z by spectral calculus; rejects if the spectrum reaches the
  // singularity threshold 1e-14 * lambda_max.
  Mat power(double z) const;

  double trace() const { return eigenvalues_.sum(); }

 private:
  Mat base_;
  RVec eigenvalues_;
  Mat eigenvectors_;
};

// f applied to the spectrum of a Hermitian matrix.
Mat matrix_function(const Mat& a, const std::function<Complex(double)>& f,
                    double tol = kHermitianTol);

// PSD square root of a Hermitian PSD matrix (small negative eigenvalues from
// roundoff are clamped to zero).
Mat psd_sqrt(const Mat& a);

}  // namespace ncpg

#endif

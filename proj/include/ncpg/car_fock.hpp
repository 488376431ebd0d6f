#ifndef NCPG_CAR_FOCK_HPP
#define NCPG_CAR_FOCK_HPP

#include <vector>

#include <Eigen/SparseCore>

#include "ncpg/operator_kernel.hpp"

#include "ncpg/common.hpp"

namespace ncpg {

using SpMat = Eigen::SparseMatrix<Complex>;

// Antisymmetric Fock space over m one-particle modes. Basis states are
// indexed by the integer value of the occupation bitmask (mode 0 = lowest
// bit); operators carry the Jordan-Wigner sign (-1)^{# occupied below}.
class FockBasis {
 public:
  static constexpr int kDefaultModeCap = 12;  // dim 4096

  explicit FockBasis(int modes, int mode_cap = kDefaultModeCap);

  int modes() const { return m_; }
  Eigen::Index dim() const { return dim_; }

  // a_i as a sparse matrix; a(f) = sum_i conj(f_i) a_i (antilinear in f).
  SpMat mode_annihilator(int i) const;

  SpMat annihilator(const Vec& f) const;
  SpMat creator(const Vec& f) const;  // adjoint of annihilator, linear in f

  Mat annihilator_dense(const Vec& f) const;
  Mat creator_dense(const Vec& f) const;

  // a*(f_1)...a*(f_n) Omega.
  Vec wedge_vector(const std::vector<Vec>& fs) const;

  // Gamma(B): wedge(f_1..f_n) -> wedge(Bf_1..Bf_n).
  Mat second_quantization(const Mat& b) const;

  Mat number_operator() const;

  // +1 on even-particle states, -1 on odd.
  Mat parity_operator() const;

  // Grade of a dense operator: 0 even, 1 odd, -1 mixed (to tolerance).
  int parity_grade(const Mat& x, double tol = 1e-12) const;

 private:
  int m_;
  Eigen::Index dim_;
};

}  // namespace ncpg

#endif

#ifndef NCPG_ARAKI_WYSS_HPP
#define NCPG_ARAKI_WYSS_HPP

#include <map>
#include <memory>
#include <vector>

#include "ncpg/car_fock.hpp"
#include "ncpg/operator_kernel.hpp"

namespace ncpg {

// Antilinear conjugation f -> P conj(f) with P an involutive permutation.
struct Conjugation {
  std::vector<int> perm;  // theta(e_i) = e_{perm[i]}

  static Conjugation identity(int d);
  // Swap conjugation on h~ (+) h~: pairs (i, i + half).
  static Conjugation swap_pairs(int d);

  Vec apply(const Vec& f) const;
  int dim() const { return static_cast<int>(perm.size()); }
};

// Quasi-free model (M, omega): M = full matrix algebra on the Fock space
// over C^d, omega(x) = trace(W x) with the thermal product density
// W = (x)_i diag(1 - nu_i, nu_i), nu_i = 1/(1 + rho_i^4). Field operators
// gamma(f) = c((rho^2 + rho^{-2})^{1/2} f) reproduce the quasi-free moments
// of the doubled construction at half the dimension; the literal doubled
// construction is kept as an oracle (DoubledOracle below).
class QuasiFreeModel {
 public:
  QuasiFreeModel(const RVec& rho_spectrum, const Conjugation& theta,
                 int mode_cap = FockBasis::kDefaultModeCap);

  int d() const { return d_; }
  Eigen::Index dim() const { return basis_.dim(); }
  const FockBasis& basis() const { return basis_; }
  const RVec& rho() const { return rho_; }
  const Conjugation& theta() const { return theta_; }

  // Diagonal of W in the occupation basis and its logarithm.
  const RVec& weights() const { return w_; }
  Mat w_matrix() const { return Mat(w_.cast<Complex>().asDiagonal()); }
  Mat w_power(double z) const;  // W^z, diagonal

  // Field operators. gamma is antilinear in f, gamma_dag linear.
  SpMat gamma(const Vec& f) const;
  SpMat gamma_dag(const Vec& f) const;
  Mat gamma_dense(const Vec& f) const { return Mat(gamma(f)); }
  Mat gamma_dag_dense(const Vec& f) const { return Mat(gamma_dag(f)); }

  // beta(f (+) f') = gamma_dag(rho^{-1} f) + gamma(theta rho f'), linear
  // in the K = H (+) H argument (length 2d).
  SpMat beta(const Vec& fk) const;
  Mat beta_dense(const Vec& fk) const { return Mat(beta(fk)); }

  Complex state(const Mat& x) const;

  // omega(a b) evaluated from the diagonal of the product, O(dim^2).
  Complex state_product(const Mat& a, const Mat& b) const;

  // sigma_tau(x) = W^{i tau} x W^{-i tau} for complex tau; entrywise scaling.
  Mat modular_flow(const Mat& x, Complex tau) const;
  // [x]_t = sigma_{-it}(x) = W^t x W^{-t}, real t.
  Mat twist(const Mat& x, double t) const;

  // Sandwich W^a x W^b (diagonal scaling).
  Mat sandwich(const Mat& x, double a, double b) const;

  // Wick polynomial of beta's (recursive, memoized on the leg subset).
  Mat wick(const std::vector<Vec>& fks) const;

  // Standard K-basis vector: k < d -> e_k (+) 0, else 0 (+) e_{k-d}.
  Vec k_basis_vector(int k) const;

  // Wick monomial over strictly increasing standard K-basis legs.
  const Mat& wick_monomial(const std::vector<int>& legs) const;

  // x = sum_F c_F wick_monomial(F) over all subsets F of {0..2d-1}.
  // Coefficients keyed by the leg bitmask. Requires d <= decompose cap.
  std::map<std::uint32_t, Complex> wick_basis_decompose(const Mat& x) const;
  Mat wick_recompose(const std::map<std::uint32_t, Complex>& coeff) const;

  // Ornstein-Uhlenbeck semigroup: Wick coefficients scaled by e^{-t deg}.
  Mat ou_semigroup(const Mat& x, double t) const;

 private:
  int d_;
  RVec rho_;
  Conjugation theta_;
  FockBasis basis_;
  RVec w_;
  RVec logw_;
  RVec scale_;  // (rho^2 + rho^{-2})^{1/2}
  mutable std::map<std::uint32_t, Mat> monomial_cache_;
};

// Signed perfect-matching sum: sum over pairings of {0..n-1} of
// sgn(pairing) * prod two_point(i, j), the fermionic Wick sum. Odd n -> 0.
Complex matching_sum(int n,
                     const std::function<Complex(int, int)>& two_point);

// Literal Def-3.1 construction on the doubled Fock space with the vacuum
// state; cross-checks the density-matrix model moment by moment.
class DoubledOracle {
 public:
  explicit DoubledOracle(const QuasiFreeModel& model, int mode_cap = 12);

  Mat gamma(const Vec& f) const;      // a(rho f (+) 0) + a*(0 (+) rho^{-1} theta f)
  Mat gamma_dag(const Vec& f) const;
  Complex vacuum_state(const Mat& x) const;

  // a*(F) Omega for F a wedge of K-basis legs, and the Wick-polynomial
  // vector [[beta(F)]] Omega for the same legs (Eq. 3.6 check).
  Vec astar_omega(const std::vector<Vec>& fs) const;
  Mat beta(const Vec& fk) const;

  const FockBasis& basis() const { return basis_; }

 private:
  const QuasiFreeModel& model_;
  FockBasis basis_;  // 2d modes
};

// Stochastic lower estimate of || P_t^{(p,q)} || with random probes plus
// local ascent; deterministic for a fixed seed.
struct HyperNormEstimate {
  double estimate = 0.0;
  Mat argmax;
};
HyperNormEstimate hyper_norm_estimate(const QuasiFreeModel& model, double t,
                                      double p, double q, int probes,
                                      std::uint64_t seed);

}  // namespace ncpg

#endif

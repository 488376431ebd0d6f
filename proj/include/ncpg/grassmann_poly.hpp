#ifndef NCPG_GRASSMANN_POLY_HPP
#define NCPG_GRASSMANN_POLY_HPP

#include <map>
#include <vector>

#include "ncpg/common.hpp"

namespace ncpg {

// Polynomial in n_anti anticommuting and n_sym commuting indexed variables:
// sum of coeff * (w_{a_1} ^ ... ^ w_{a_k}) (x) (w_{s_1} (.) ... (.) w_{s_l})
// with a strictly increasing anti index list (stored as a bitmask) and a
// sorted symmetric multiset.
//
// Conventions: the canonical monomial with mask {a_1 < ... < a_k} evaluates
// as Z(w_{a_k}) ... Z(w_{a_1}) (descending), the product carries the
// matching reordering sign so (F * G)(Z) = F(Z) G(Z), and d_anti is the
// interior product with sign (-1)^{# smaller indices present}. This is the
// unique combination under which the left-derivative recursion
// d_w((v ^ .) F) = <w,v> F - (v ^ .) d_w F, the polynomial Taylor formula
// and the Ito formula all hold with the derivative factors standing to the
// left of the increments.
class GrassmannPolynomial {
 public:
  struct Key {
    std::uint32_t anti = 0;
    std::vector<int> sym;  // sorted
    bool operator<(const Key& o) const {
      if (anti != o.anti) return anti < o.anti;
      return sym < o.sym;
    }
  };

  GrassmannPolynomial(int n_anti, int n_sym)
      : n_anti_(n_anti), n_sym_(n_sym) {}

  static GrassmannPolynomial constant(int n_anti, int n_sym, Complex c);
  static GrassmannPolynomial anti_var(int n_anti, int n_sym, int index);
  static GrassmannPolynomial sym_var(int n_anti, int n_sym, int index);
  static GrassmannPolynomial anti_monomial(int n_anti, int n_sym,
                                           std::uint32_t mask);

  // Wedge-prepend (v ^ .) with the ascending-insertion sign; this is the
  // "(v (x) 1) . F" of the derivative recursion, not operator*.
  GrassmannPolynomial wedge_prepend(int index) const;

  int n_anti() const { return n_anti_; }
  int n_sym() const { return n_sym_; }
  const std::map<Key, Complex>& terms() const { return terms_; }

  void add_term(std::uint32_t anti_mask, std::vector<int> sym, Complex c);

  GrassmannPolynomial operator+(const GrassmannPolynomial& o) const;
  GrassmannPolynomial operator-(const GrassmannPolynomial& o) const;
  GrassmannPolynomial operator*(const GrassmannPolynomial& o) const;
  GrassmannPolynomial operator*(Complex c) const;

  // Anticommutative (interior-product) and commutative derivatives.
  GrassmannPolynomial d_anti(int index) const;
  GrassmannPolynomial d_sym(int index) const;

  int degree() const;
  bool is_zero(double tol = 0.0) const;

  // Evaluation at operator values: z_minus[i] pairwise anticommuting odd
  // operators, z_plus[i] even operators. Anti factors multiply in
  // ascending-index order.
  Mat eval(const std::vector<Mat>& z_minus, const std::vector<Mat>& z_plus,
           Eigen::Index dim) const;

  // Purely anticommutative evaluation (n_sym terms must be absent).
  Mat eval_odd(const std::vector<Mat>& z_minus, Eigen::Index dim) const;

 private:
  int n_anti_;
  int n_sym_;
  std::map<Key, Complex> terms_;
};

// Sign of sorting the concatenation of two disjoint ascending masks.
int merge_sign(std::uint32_t a, std::uint32_t b);

}  // namespace ncpg

#endif

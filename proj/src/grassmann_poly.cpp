#include "ncpg/grassmann_poly.hpp"

#include <algorithm>
#include <bit>

namespace ncpg {

int merge_sign(std::uint32_t a, std::uint32_t b) {
  // Monomials evaluate in descending index order, so concatenating the
  // factors of a before those of b costs (-1)^{#{(x,y) in a x b : x < y}}.
  int inv = 0;
  for (std::uint32_t mb = b; mb != 0; mb &= (mb - 1)) {
    int y = std::countr_zero(mb);
    std::uint32_t lower = a & ((1u << y) - 1u);
    inv += std::popcount(lower);
  }
  return (inv & 1) ? -1 : 1;
}

GrassmannPolynomial GrassmannPolynomial::constant(int n_anti, int n_sym,
                                                  Complex c) {
  GrassmannPolynomial p(n_anti, n_sym);
  if (c != Complex(0.0)) p.terms_[{0u, {}}] = c;
  return p;
}

GrassmannPolynomial GrassmannPolynomial::anti_var(int n_anti, int n_sym,
                                                  int index) {
  if (index < 0 || index >= n_anti)
    throw InvalidInput("anti_var: index out of range");
  GrassmannPolynomial p(n_anti, n_sym);
  p.terms_[{1u << index, {}}] = 1.0;
  return p;
}

GrassmannPolynomial GrassmannPolynomial::sym_var(int n_anti, int n_sym,
                                                 int index) {
  if (index < 0 || index >= n_sym)
    throw InvalidInput("sym_var: index out of range");
  GrassmannPolynomial p(n_anti, n_sym);
  p.terms_[{0u, {index}}] = 1.0;
  return p;
}

GrassmannPolynomial GrassmannPolynomial::anti_monomial(int n_anti, int n_sym,
                                                       std::uint32_t mask) {
  GrassmannPolynomial p(n_anti, n_sym);
  p.terms_[{mask, {}}] = 1.0;
  return p;
}

GrassmannPolynomial GrassmannPolynomial::wedge_prepend(int index) const {
  if (index < 0 || index >= n_anti_)
    throw InvalidInput("wedge_prepend: index out of range");
  GrassmannPolynomial out(n_anti_, n_sym_);
  std::uint32_t bit = 1u << index;
  for (const auto& [k, c] : terms_) {
    if (k.anti & bit) continue;
    std::uint32_t below = k.anti & (bit - 1);
    double sign = (std::popcount(below) & 1) ? -1.0 : 1.0;
    out.add_term(k.anti | bit, k.sym, sign * c);
  }
  return out;
}

void GrassmannPolynomial::add_term(std::uint32_t anti_mask,
                                   std::vector<int> sym, Complex c) {
  std::sort(sym.begin(), sym.end());
  Key k{anti_mask, std::move(sym)};
  terms_[k] += c;
  if (terms_[k] == Complex(0.0)) terms_.erase(k);
}

GrassmannPolynomial GrassmannPolynomial::operator+(
    const GrassmannPolynomial& o) const {
  GrassmannPolynomial out = *this;
  for (const auto& [k, c] : o.terms_) {
    out.terms_[k] += c;
    if (out.terms_[k] == Complex(0.0)) out.terms_.erase(k);
  }
  return out;
}

GrassmannPolynomial GrassmannPolynomial::operator-(
    const GrassmannPolynomial& o) const {
  return *this + o * Complex(-1.0);
}

GrassmannPolynomial GrassmannPolynomial::operator*(Complex c) const {
  GrassmannPolynomial out(n_anti_, n_sym_);
  if (c == Complex(0.0)) return out;
  for (const auto& [k, v] : terms_) out.terms_[k] = v * c;
  return out;
}

GrassmannPolynomial GrassmannPolynomial::operator*(
    const GrassmannPolynomial& o) const {
  GrassmannPolynomial out(n_anti_, n_sym_);
  for (const auto& [k1, c1] : terms_) {
    for (const auto& [k2, c2] : o.terms_) {
      if (k1.anti & k2.anti) continue;  // repeated Grassmann factor
      double sign = merge_sign(k1.anti, k2.anti);
      std::vector<int> sym = k1.sym;
      sym.insert(sym.end(), k2.sym.begin(), k2.sym.end());
      out.add_term(k1.anti | k2.anti, std::move(sym), sign * c1 * c2);
    }
  }
  return out;
}

GrassmannPolynomial GrassmannPolynomial::d_anti(int index) const {
  if (index < 0 || index >= n_anti_) throw InvalidInput("d_anti: bad index");
  GrassmannPolynomial out(n_anti_, n_sym_);
  std::uint32_t bit = 1u << index;
  for (const auto& [k, c] : terms_) {
    if (!(k.anti & bit)) continue;
    std::uint32_t below = k.anti & (bit - 1);
    double sign = (std::popcount(below) & 1) ? -1.0 : 1.0;
    out.add_term(k.anti & ~bit, k.sym, sign * c);
  }
  return out;
}

GrassmannPolynomial GrassmannPolynomial::d_sym(int index) const {
  if (index < 0 || index >= n_sym_) throw InvalidInput("d_sym: bad index");
  GrassmannPolynomial out(n_anti_, n_sym_);
  for (const auto& [k, c] : terms_) {
    auto mult = std::count(k.sym.begin(), k.sym.end(), index);
    if (mult == 0) continue;
    std::vector<int> sym = k.sym;
    sym.erase(std::find(sym.begin(), sym.end(), index));
    out.add_term(k.anti, std::move(sym), double(mult) * c);
  }
  return out;
}

int GrassmannPolynomial::degree() const {
  int deg = 0;
  for (const auto& [k, c] : terms_)
    deg = std::max(deg, std::popcount(k.anti) + static_cast<int>(k.sym.size()));
  return deg;
}

bool GrassmannPolynomial::is_zero(double tol) const {
  for (const auto& [k, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

Mat GrassmannPolynomial::eval(const std::vector<Mat>& z_minus,
                              const std::vector<Mat>& z_plus,
                              Eigen::Index dim) const {
  if (static_cast<int>(z_minus.size()) < n_anti_ && !terms_.empty()) {
    for (const auto& [k, c] : terms_)
      if (k.anti != 0) throw InvalidInput("eval: missing odd values");
  }
  Mat out = Mat::Zero(dim, dim);
  for (const auto& [k, c] : terms_) {
    Mat term = Mat::Identity(dim, dim);
    bool first = true;
    for (int i = n_anti_ - 1; i >= 0; --i) {  // descending order
      if (!(k.anti & (1u << i))) continue;
      term = first ? z_minus[i] : Mat(term * z_minus[i]);
      first = false;
    }
    for (int s : k.sym) {
      term = first ? z_plus[s] : Mat(term * z_plus[s]);
      first = false;
    }
    if (first)
      out += c * Mat::Identity(dim, dim);
    else
      out += c * term;
  }
  return out;
}

Mat GrassmannPolynomial::eval_odd(const std::vector<Mat>& z_minus,
                                  Eigen::Index dim) const {
  for (const auto& [k, c] : terms_)
    if (!k.sym.empty())
      throw ParityError("eval_odd: symmetric factors present");
  return eval(z_minus, {}, dim);
}

}  // namespace ncpg

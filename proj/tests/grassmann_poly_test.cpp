#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpg/araki_wyss.hpp"
#include "ncpg/grassmann_poly.hpp"

using namespace ncpg;

namespace {

using GP = GrassmannPolynomial;

// Grassmann generators realized as CAR annihilators: pairwise
// anticommuting, including each with itself (z_i^2 = 0).
std::vector<Mat> odd_generators(const FockBasis& basis) {
  std::vector<Mat> gens;
  for (int i = 0; i < basis.modes(); ++i) {
    Vec e = Vec::Zero(basis.modes());
    e(i) = 1.0;
    gens.push_back(Mat(basis.annihilator(e)));
  }
  return gens;
}

}  // namespace

TEST_CASE("derivative examples") {
  // d_w(w ^ u) = u and d_u(w ^ u) = -w, with w ^ u built by prepending
  int w = 0, u = 1;
  GP wu = GP::anti_monomial(3, 0, 1u << u).wedge_prepend(w);
  GP dw = wu.d_anti(w);
  GP du = wu.d_anti(u);
  REQUIRE(dw.terms().size() == 1);
  CHECK(dw.terms().begin()->second == Complex(1.0));
  CHECK(dw.terms().begin()->first.anti == (1u << u));
  REQUIRE(du.terms().size() == 1);
  CHECK(du.terms().begin()->second == Complex(-1.0));
  CHECK(du.terms().begin()->first.anti == (1u << w));

  // derivative of a purely symmetric monomial vanishes
  GP sym(2, 2);
  sym.add_term(0u, {0, 1}, 1.0);
  CHECK(sym.d_anti(0).is_zero());
  CHECK(sym.d_sym(0).terms().begin()->first.sym == std::vector<int>{1});

  // anti derivatives anticommute, sym derivatives commute
  GP f(3, 2);
  f.add_term(0x7u, {0, 0, 1}, Complex(2.0, 1.0));
  f.add_term(0x5u, {1}, Complex(-0.5, 0.25));
  GP ab = f.d_anti(0).d_anti(2) + f.d_anti(2).d_anti(0);
  CHECK(ab.is_zero());
  GP cd = f.d_sym(0).d_sym(1) - f.d_sym(1).d_sym(0);
  CHECK(cd.is_zero());
}

TEST_CASE("derivative recursion (Def 4.31 expansion oracle)") {
  Rng rng(81);
  // random polynomial of degree <= 4; check d_w((v ^) F) = <w,v> F - (v ^) d_w F
  for (int rep = 0; rep < 20; ++rep) {
    GP f(4, 0);
    for (int t = 0; t < 5; ++t)
      f.add_term(rng.integer(16), {}, rng.cgaussian());
    int v = int(rng.integer(4)), w = int(rng.integer(4));
    GP lhs = f.wedge_prepend(v).d_anti(w);
    GP rhs = (w == v ? f : GP(4, 0)) - f.d_anti(w).wedge_prepend(v);
    CHECK((lhs - rhs).is_zero(1e-14));
  }
}

TEST_CASE("evaluation is representation independent and multiplicative") {
  FockBasis basis(4);
  auto gens = odd_generators(basis);
  Eigen::Index dim = basis.dim();
  Rng rng(82);

  // (F G)(Z) = F(Z) G(Z)
  for (int rep = 0; rep < 10; ++rep) {
    GP f(4, 0), g(4, 0);
    for (int t = 0; t < 3; ++t) {
      f.add_term(rng.integer(16), {}, rng.cgaussian());
      g.add_term(rng.integer(16), {}, rng.cgaussian());
    }
    Mat lhs = (f * g).eval_odd(gens, dim);
    Mat rhs = f.eval_odd(gens, dim) * g.eval_odd(gens, dim);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
  }

  // constants and single variables
  GP c = GP::constant(4, 0, Complex(2.5, -1.0));
  CHECK((c.eval_odd(gens, dim) -
         Complex(2.5, -1.0) * Mat::Identity(dim, dim))
            .norm() < 1e-14);
  GP w1 = GP::anti_var(4, 0, 1);
  CHECK((w1.eval_odd(gens, dim) - gens[1]).norm() == 0.0);

  // parity error when symmetric values are required but absent
  GP mixed(2, 1);
  mixed.add_term(1u, {0}, 1.0);
  CHECK_THROWS_AS(mixed.eval_odd(gens, dim), ParityError);
}

TEST_CASE("mixed evaluation with even values") {
  FockBasis basis(4);
  auto gens = odd_generators(basis);
  Eigen::Index dim = basis.dim();
  std::vector<Mat> evens = {Mat(gens[2] * gens[3])};

  GP f(2, 1);
  f.add_term(0x3u, {0}, 1.0);  // (w0 ^ w1) (x) s0
  Mat val = f.eval({gens[0], gens[1]}, evens, dim);
  Mat expect = gens[1] * gens[0] * evens[0];  // descending anti order
  CHECK((val - expect).norm() <= 1e-13 * expect.norm());
}

TEST_CASE("Taylor formula (Lemma 4.32) for polynomials of degree <= 3") {
  FockBasis basis(6);
  auto gens = odd_generators(basis);
  Eigen::Index dim = basis.dim();
  Rng rng(83);

  int na = 3;
  std::vector<Mat> z(gens.begin(), gens.begin() + 3);
  std::vector<Mat> r;
  for (int i = 0; i < na; ++i)
    r.push_back(0.5 * gens[3 + i] + 0.25 * gens[i]);

  for (int rep = 0; rep < 6; ++rep) {
    GP f(na, 0);
    for (int t = 0; t < 4; ++t) f.add_term(rng.integer(8), {}, rng.cgaussian());

    Mat lhs = f.eval_odd(z, dim) - f.eval_odd(r, dim);

    // sum over derivative strings with 1/k! and increments in string order
    Mat rhs = Mat::Zero(dim, dim);
    std::vector<Mat> delta;
    for (int i = 0; i < na; ++i) delta.push_back(z[i] - r[i]);
    double factorial = 1.0;
    std::vector<GP> level = {f};
    std::vector<std::vector<int>> strings = {{}};
    for (int k = 1; k <= 3; ++k) {
      factorial *= k;
      std::vector<GP> next_level;
      std::vector<std::vector<int>> next_strings;
      for (std::size_t s = 0; s < level.size(); ++s)
        for (int j = 0; j < na; ++j) {
          next_level.push_back(level[s].d_anti(j));
          auto str = strings[s];
          str.insert(str.begin(), j);  // d_j applied last acts leftmost
          next_strings.push_back(str);
        }
      for (std::size_t s = 0; s < next_level.size(); ++s) {
        if (next_level[s].is_zero()) continue;
        Mat inc = Mat::Identity(dim, dim);
        for (int j : next_strings[s]) inc = inc * delta[j];
        rhs += (1.0 / factorial) * next_level[s].eval_odd(r, dim) * inc;
      }
      level = std::move(next_level);
      strings = std::move(next_strings);
    }
    CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + lhs.norm()));
  }
}

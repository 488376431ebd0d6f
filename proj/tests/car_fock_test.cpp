#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpg/car_fock.hpp"

using namespace ncpg;

namespace {
Mat anticomm(const Mat& a, const Mat& b) { return a * b + b * a; }
}  // namespace

TEST_CASE("CAR relations") {
  FockBasis basis(4);
  Rng rng(5);
  for (int rep = 0; rep < 25; ++rep) {
    Vec f = rng.cgaussian_vector(4), g = rng.cgaussian_vector(4);
    Mat af = basis.annihilator_dense(f);
    Mat ag = basis.annihilator_dense(g);
    Mat cg = basis.creator_dense(g);
    // {a(f), a*(g)} = <f, g> 1, inner product linear in the second slot
    Complex ip = f.dot(g);
    Mat defect = anticomm(af, cg) - ip * Mat::Identity(basis.dim(), basis.dim());
    CHECK(operator_norm(defect) <=
          1e-12 * (1.0 + f.norm() * g.norm()));
    CHECK(anticomm(af, ag).norm() == 0.0);  // exactly
  }
}

TEST_CASE("vacuum and single-mode actions") {
  FockBasis basis(3);
  Vec e0 = Vec::Zero(3);
  e0(0) = 1.0;
  Vec vac = Vec::Zero(basis.dim());
  vac(0) = 1.0;
  CHECK((basis.annihilator_dense(e0) * vac).norm() == 0.0);
  Vec one = basis.creator_dense(e0) * vac;
  CHECK(std::abs(one(1) - Complex(1.0)) < 1e-15);  // occupation mask {0}

  // nilpotency and antisymmetry of creators
  Rng rng(6);
  Vec f = rng.cgaussian_vector(3), g = rng.cgaussian_vector(3);
  Mat cf = basis.creator_dense(f), cg = basis.creator_dense(g);
  CHECK(Mat(cf * cf).norm() == 0.0);
  CHECK((cf * cg + cg * cf).norm() <= 1e-14);
}

TEST_CASE("wedge vectors against the Gram determinant oracle") {
  FockBasis basis(4);
  CHECK(basis.wedge_vector({})(0) == Complex(1.0));

  Vec e0 = Vec::Zero(4), e1 = Vec::Zero(4);
  e0(0) = 1.0;
  e1(1) = 1.0;
  Vec w = basis.wedge_vector({e0, e1});
  CHECK(std::abs(w(3) - Complex(1.0)) < 1e-15);  // state {0,1}, plus sign

  Rng rng(8);
  for (int rep = 0; rep < 10; ++rep) {
    int n = 3;
    std::vector<Vec> fs, gs;
    for (int i = 0; i < n; ++i) {
      fs.push_back(rng.cgaussian_vector(4));
      gs.push_back(rng.cgaussian_vector(4));
    }
    Mat gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gram(i, j) = fs[i].dot(gs[j]);
    Complex det = gram.determinant();
    Complex ip = basis.wedge_vector(fs).dot(basis.wedge_vector(gs));
    CHECK(std::abs(ip - det) <= 1e-10 * (1.0 + std::abs(det)));
  }

  // swapping adjacent arguments flips the sign exactly
  Vec f = rng.cgaussian_vector(4), g = rng.cgaussian_vector(4);
  CHECK((basis.wedge_vector({f, g}) + basis.wedge_vector({g, f})).norm() ==
        0.0);
}

TEST_CASE("second quantization functoriality") {
  FockBasis basis(3);
  CHECK((basis.second_quantization(Mat::Identity(3, 3)) -
         Mat::Identity(basis.dim(), basis.dim()))
            .norm() < 1e-14);

  // Gamma(lambda 1) acts as lambda^n on the n-particle sector
  Mat lam = 2.0 * Mat::Identity(3, 3);
  Mat g = basis.second_quantization(lam);
  Vec e0 = Vec::Zero(3), e1 = Vec::Zero(3);
  e0(0) = 1.0;
  e1(1) = 1.0;
  Vec two = basis.wedge_vector({e0, e1});
  CHECK((g * two - 4.0 * two).norm() < 1e-13);

  Rng rng(9);
  Mat b1 = rng.cgaussian_matrix(3), b2 = rng.cgaussian_matrix(3);
  Mat lhs = basis.second_quantization(b1) * basis.second_quantization(b2);
  Mat rhs = basis.second_quantization(b1 * b2);
  CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));

  // adjoints
  Mat ga = basis.second_quantization(b1).adjoint();
  Mat gb = basis.second_quantization(Mat(b1.adjoint()));
  CHECK((ga - gb).norm() <= 1e-12 * (1.0 + gb.norm()));
}

TEST_CASE("number operator") {
  FockBasis basis(4);
  Mat n = basis.number_operator();
  CHECK(std::abs(n(0, 0)) == 0.0);
  CHECK(std::abs(n(basis.dim() - 1, basis.dim() - 1) - 4.0) < 1e-15);

  Rng rng(10);
  Vec f = rng.cgaussian_vector(4);
  Mat cf = basis.creator_dense(f);
  Mat comm = n * cf - cf * n;
  CHECK((comm - cf).norm() <= 1e-12 * cf.norm());
}

TEST_CASE("parity grading") {
  FockBasis basis(3);
  Rng rng(12);
  Vec f = rng.cgaussian_vector(3);
  CHECK(basis.parity_grade(basis.creator_dense(f)) == 1);
  CHECK(basis.parity_grade(Mat(basis.creator_dense(f) *
                               basis.annihilator_dense(f))) == 0);
  CHECK(basis.parity_grade(Mat::Identity(basis.dim(), basis.dim()) +
                           basis.creator_dense(f)) == -1);
}

TEST_CASE("mode cap") {
  CHECK_THROWS_AS(FockBasis(13), ResourceError);
  FockBasis ok(13, 14);
  CHECK(ok.dim() == 8192);
}

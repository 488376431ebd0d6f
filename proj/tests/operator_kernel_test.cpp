#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpg/operator_kernel.hpp"

using namespace ncpg;

namespace {
Mat random_unitary(Rng& rng, int n) {
  Mat a = rng.cgaussian_matrix(n);
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ();
}
}  // namespace

TEST_CASE("schatten norm basics") {
  Mat id2 = Mat::Identity(2, 2);
  CHECK(schatten_norm(id2, 2.0) == doctest::Approx(std::sqrt(2.0)));

  Mat d(2, 2);
  d << 3.0, 0.0, 0.0, 4.0;
  CHECK(schatten_norm(d, kPInf) == doctest::Approx(4.0));
  CHECK(schatten_norm(d, 1.0) == doctest::Approx(7.0));

  // direct trace oracle for p = 2
  Rng rng(41);
  Mat a = rng.cgaussian_matrix(6);
  double oracle = std::sqrt(std::abs(Complex(
      (a.adjoint() * a).trace())));
  CHECK(schatten_norm(a, 2.0) ==
        doctest::Approx(oracle).epsilon(1e-12));

  Mat bad = Mat::Constant(2, 2, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(schatten_norm(bad, 2.0), InvalidInput);
  CHECK_THROWS_AS(schatten_norm(id2, 0.5), InvalidInput);
}

TEST_CASE("schatten properties: Hoelder, unitary invariance, duality") {
  Rng rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    Mat a = rng.cgaussian_matrix(5), b = rng.cgaussian_matrix(5);
    for (auto [p, q, r] : {std::array<double, 3>{2, 2, 1},
                           std::array<double, 3>{4, 4, 2},
                           std::array<double, 3>{3, 6, 2},
                           std::array<double, 3>{kPInf, 4, 4}}) {
      double lhs = schatten_norm(a * b, r);
      double rhs = schatten_norm(a, p) * schatten_norm(b, q);
      CHECK(lhs <= rhs * (1.0 + 1e-10));
    }
    Mat u = random_unitary(rng, 5), v = random_unitary(rng, 5);
    for (double p : {1.0, 2.0, 3.5, kPInf}) {
      double n1 = schatten_norm(a, p);
      double n2 = schatten_norm(u * a * v.adjoint(), p);
      CHECK(std::abs(n1 - n2) <= 1e-10 * std::max(1.0, n1));
    }
    double tr = std::abs(Complex((a * b).trace()));
    CHECK(tr <= schatten_norm(a, 2.0) * schatten_norm(b, 2.0) * (1 + 1e-12));
    CHECK(tr <=
          schatten_norm(a, 3.0) * schatten_norm(b, 1.5) * (1 + 1e-12));
  }
}

TEST_CASE("uniform convexity smoke check") {
  Rng rng(7);
  for (double p : {2.0, 4.0}) {
    for (int rep = 0; rep < 100; ++rep) {
      Mat x = rng.cgaussian_matrix(4), y = rng.cgaussian_matrix(4);
      x /= schatten_norm(x, p);
      y /= schatten_norm(y, p);
      if (schatten_norm(x - y, p) < 0.5) continue;
      CHECK(schatten_norm(0.5 * (x + y), p) < 1.0);
    }
  }
}

TEST_CASE("fractional powers") {
  Mat w(2, 2);
  w << 1.0 / 17.0, 0.0, 0.0, 16.0 / 17.0;
  PositiveOperator pw(w);
  Mat h = pw.power(0.5);
  CHECK(std::abs(h(0, 0) - 1.0 / std::sqrt(17.0)) < 1e-14);
  CHECK(std::abs(h(1, 1) - 4.0 / std::sqrt(17.0)) < 1e-14);
  CHECK((pw.power(0.0) - Mat::Identity(2, 2)).norm() < 1e-14);

  // group law oracle on a random positive operator
  Rng rng(3);
  Mat a = rng.cgaussian_matrix(5);
  PositiveOperator pos(Mat(a.adjoint() * a + 5.0 * Mat::Identity(5, 5)));
  Mat lhs = pos.power(1.0 / 3.0) * pos.power(2.0 / 3.0);
  CHECK((lhs - pos.matrix()).norm() <= 1e-10 * pos.matrix().norm());

  Mat sing(2, 2);
  sing << 1.0, 0.0, 0.0, 1e-16;
  CHECK_THROWS_AS(PositiveOperator(sing).power(0.5), SingularityError);
  Mat nonpos(2, 2);
  nonpos << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(PositiveOperator{nonpos}, InvalidInput);
}

TEST_CASE("matrix function calculus") {
  Rng rng(11);
  Mat a = rng.cgaussian_matrix(5);
  Mat h = 0.5 * (a + Mat(a.adjoint()));
  Mat ident = matrix_function(h, [](double x) { return Complex(x); });
  CHECK((ident - h).norm() < 1e-12 * h.norm());
  Mat one = matrix_function(h, [](double) { return Complex(1.0); });
  CHECK((one - Mat::Identity(5, 5)).norm() < 1e-12);
  Mat sq = matrix_function(h, [](double x) { return Complex(x * x); });
  CHECK((sq - Mat(h * h)).norm() < 1e-12 * (h * h).norm());

  CHECK_THROWS_AS(matrix_function(a, [](double x) { return Complex(x); }),
                  InvalidInput);
}

TEST_CASE("hermitize symmetrizes small defects and rejects large ones") {
  Rng rng(13);
  Mat a = rng.cgaussian_matrix(4);
  Mat h = 0.5 * (a + Mat(a.adjoint()));
  Mat bumped = h + 1e-14 * rng.cgaussian_matrix(4);
  Mat fixed = hermitize(bumped);
  CHECK(hermitian_defect(fixed) < 1e-15);
  CHECK_THROWS_AS(hermitize(a), InvalidInput);
}

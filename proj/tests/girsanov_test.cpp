#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncpg/girsanov.hpp"

using namespace ncpg;

namespace {

GBMSpec small_spec(int n_t = 3, int n_reserved = 1) {
  GBMSpec s;
  s.mu = 0.5;
  s.n_t = n_t;
  s.T = 1.0;
  s.h_dim = 2;
  s.n_reserved = n_reserved;
  return s;
}

AdaptedSimpleProcess theta_linear_h(const GBMProcess& gbm,
                                    const GridNoise& noise, double lambda,
                                    const Vec& w) {
  Mat theta0 = gbm.reserved_generator(0);
  std::vector<std::vector<Mat>> h(gbm.n_t(),
                                  std::vector<Mat>(noise.dirs()));
  for (int j = 0; j < gbm.n_t(); ++j)
    for (int a = 0; a < noise.dirs(); ++a)
      h[j][a] = lambda * Complex(w.dot(noise.dir(a))) * theta0;
  return AdaptedSimpleProcess(gbm, h, 1);
}

}  // namespace

TEST_CASE("stochastic exponential") {
  GBMProcess gbm(small_spec());
  GridNoise noise(gbm);
  Eigen::Index dim = gbm.model().dim();

  // H = 0 -> Z = 1
  std::vector<std::vector<Mat>> zero(3, std::vector<Mat>(
                                           2, Mat::Zero(dim, dim)));
  auto se0 = stochastic_exponential(noise, AdaptedSimpleProcess(gbm, zero, 1));
  CHECK((se0.z.back() - Mat::Identity(dim, dim)).norm() == 0.0);

  // even H rejected
  std::vector<std::vector<Mat>> ev(3, std::vector<Mat>(
                                          2, Mat::Identity(dim, dim)));
  CHECK_THROWS_AS(
      stochastic_exponential(noise, AdaptedSimpleProcess(gbm, ev, 0)),
      ParityError);

  auto h = theta_linear_h(gbm, noise, 0.3, noise.dir(0));
  auto se = stochastic_exponential(noise, h);
  CHECK(se.novikov_ok);
  CHECK(se.series_vs_expm <= 1e-10);

  // nilpotent truncation: exponent has no scalar part, theta-linear H makes
  // the Grassmann exponent square to zero, so the series ends at order 2
  CHECK(se.series_terms <= 2);

  // Z is a grid martingale
  for (int s = 0; s <= 3; ++s)
    CHECK((gbm.filtration().cond_exp(se.z[3], s) - se.z[s]).norm() <= 1e-12);

  // Eq. (4.33) holds exactly for this H
  Eigen::Index n = dim;
  Mat resid = se.z[3] - Mat::Identity(n, n);
  for (int j = 0; j < 3; ++j)
    for (int a = 0; a < noise.dirs(); ++a)
      resid -= Mat(se.z[j] * h.value(j, a)) * noise.increment(j, a);
  CHECK(resid.norm() <= 1e-12);

  // inverse from the negated exponent equals the matrix inverse
  Mat zinv_series = (-se.exponent[3]).exp();
  CHECK((Mat(se.z[3] * zinv_series) - Mat::Identity(n, n)).norm() <= 1e-9);
}

TEST_CASE("Eq. (4.33) residual decays for a non-constant H") {
  // Dyadic grids; the desk-scale rate per delta-halving pilots at ~0.88
  // (the asymptotic sqrt-delta rate 0.71 is not reached by n_t <= 4, see
  // ledger), so the frozen threshold is 0.92.
  std::vector<double> resids;
  for (int nt : {2, 4}) {
    GBMSpec spec = small_spec(nt);
    spec.T = 0.5;
    GBMProcess gbm(spec);
    GridNoise noise(gbm);
    Eigen::Index dim = gbm.model().dim();
    Mat theta0 = gbm.reserved_generator(0);
    std::vector<std::vector<Mat>> h(nt, std::vector<Mat>(2));
    for (int j = 0; j < nt; ++j)
      for (int a = 0; a < 2; ++a)
        h[j][a] = 0.3 * Complex(noise.dir(0).dot(noise.dir(a))) * theta0 +
                  0.1 * Complex(noise.dir(1).dot(noise.dir(a))) *
                      Mat(noise.field(j, 0));
    AdaptedSimpleProcess hp(gbm, h, 1);
    auto se = stochastic_exponential(noise, hp);
    Mat resid = se.z[nt] - Mat::Identity(dim, dim);
    for (int j = 0; j < nt; ++j)
      for (int a = 0; a < 2; ++a)
        resid -= Mat(se.z[j] * hp.value(j, a)) * noise.increment(j, a);
    resids.push_back(twisted_norm(gbm.model(), resid, 2.0));
  }
  CHECK(resids[1] <= 0.92 * resids[0]);
}

TEST_CASE("signed conditional expectation axioms") {
  GBMProcess gbm(small_spec());
  GridNoise noise(gbm);
  const QuasiFreeModel& m = gbm.model();
  Eigen::Index dim = m.dim();
  Rng rng(101);

  auto h = theta_linear_h(gbm, noise, 0.3, noise.dir(0));
  auto se = stochastic_exponential(noise, h);
  SignedExpectation E(gbm, se.z.back());

  // normalization and Z = 1 reduction
  CHECK(std::abs(E.expect(Mat::Identity(dim, dim)) - Complex(1.0)) <= 1e-9);
  SignedExpectation E1(gbm, Mat::Identity(dim, dim));
  Mat x = rng.cgaussian_matrix(dim);
  CHECK((E1.cond(x, 1) - gbm.filtration().cond_exp(x, 1)).norm() <=
        1e-12 * x.norm());

  // tower property E_s(E_t(a)) = E_s(a), s <= t
  for (int rep = 0; rep < 10; ++rep) {
    Mat a = rng.cgaussian_matrix(dim);
    Mat lhs = E.cond(E.cond(a, 2), 1);
    Mat rhs = E.cond(a, 1);
    CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + a.norm()));
    CHECK(std::abs(E.expect(E.cond(a, 2)) - E.expect(a)) <=
          1e-9 * (1.0 + a.norm()));
  }

  // bimodule property over even elements of the Grassmann algebra G_{X,t}
  // (Z_inf commutes with those, not with arbitrary even level elements)
  Mat x1 = Mat(noise.field(1, 0)), x1b = Mat(noise.field(1, 1));
  Mat theta0 = gbm.reserved_generator(0);
  Mat b = Mat::Identity(dim, dim) + 0.7 * Mat(x1 * x1b);
  Mat c = 2.0 * Mat::Identity(dim, dim) - 0.3 * Mat(theta0 * x1);
  Mat a = rng.cgaussian_matrix(dim);
  Mat lhs = E.cond(Mat(b * a * c), 1);
  Mat rhs = b * E.cond(a, 1) * c;
  CHECK((lhs - rhs).norm() <=
        1e-9 * (1.0 + a.norm() * b.norm() * c.norm()));

  // condition numbers are reported
  CHECK(E.condition_number(1) >= 1.0 - 1e-12);
}

TEST_CASE("matching moments") {
  GBMProcess gbm(small_spec(3, 0));
  const QuasiFreeModel& m = gbm.model();
  Rng rng(102);

  // 2 points
  Vec v1 = rng.cgaussian_vector(2), v2 = rng.cgaussian_vector(2);
  Complex two = matching_moment(gbm, {{1.0, v1}, {2.0 / 3.0, v2}});
  CHECK(std::abs(two - gbm.covariance(v1, v2, 2.0 / 3.0)) <= 1e-12);

  // 3 points -> 0
  CHECK(matching_moment(gbm, {{1.0, v1}, {1.0, v2}, {1.0, v1}}) ==
        Complex(0.0));

  // 4 points against the direct state moment
  std::vector<std::pair<double, Vec>> pts;
  std::vector<Mat> ops;
  for (int i = 0; i < 4; ++i) {
    int mt = 1 + int(rng.integer(3));
    Vec v = rng.cgaussian_vector(2);
    pts.push_back({gbm.filtration().time(mt), v});
    ops.push_back(gbm.field(mt, v));
  }
  Complex direct = m.state(Mat(ops[0] * ops[1] * ops[2] * ops[3]));
  Complex matched = matching_moment(gbm, pts);
  CHECK(std::abs(direct - matched) <= 1e-9 * (1.0 + std::abs(direct)));
}

TEST_CASE("girsanov shift") {
  GBMProcess gbm(small_spec());
  GridNoise noise(gbm);
  Eigen::Index dim = gbm.model().dim();

  // H = 0: B = X and E = omega
  std::vector<std::vector<Mat>> zero(3, std::vector<Mat>(
                                           2, Mat::Zero(dim, dim)));
  auto gs0 = girsanov_shift(noise, AdaptedSimpleProcess(gbm, zero, 1));
  for (int m = 0; m <= 3; ++m)
    CHECK((gs0.b[m][0] - Mat(noise.field(m, 0))).norm() == 0.0);

  auto h = theta_linear_h(gbm, noise, 0.3, noise.dir(0));
  auto gs = girsanov_shift(noise, h);

  // B has the same eq. (4.17) bracket as X (drift does not enter)
  // and B - X is the explicit drift
  Vec gv = gbm.gbar(noise.dir(1));
  Mat expected_drift = Mat::Zero(dim, dim);
  for (int b = 0; b < 2; ++b)
    expected_drift += Complex(noise.dir(b).dot(gv)) * h.value(0, b);
  Mat diff = gs.b[3][1] - Mat(noise.field(3, 1));
  CHECK((diff + 1.0 * expected_drift).norm() <= 1e-12 * (1 + diff.norm()));

  // E^Z martingale property of B at grid level for this exact H
  for (int s = 0; s <= 3; ++s) {
    Mat bt = shifted_field(noise, gs, 3, noise.dir(0));
    Mat bs = shifted_field(noise, gs, s, noise.dir(0));
    CHECK((gs.se.cond(bt, s) - bs).norm() <= 1e-10 * (1.0 + bt.norm()));
  }
}

TEST_CASE("levy characterization probe") {
  GBMProcess gbm(small_spec(4, 2));
  GridNoise noise(gbm);

  // B = X: deviation <= 1e-8
  auto b_is_x = [&](int m, int a) { return Mat(noise.field(m, a)); };
  SignedExpectation E(gbm, Mat::Identity(gbm.model().dim(),
                                         gbm.model().dim()));
  Vec f1 = Vec::Zero(2), f2 = Vec::Zero(2);
  f1(0) = 1.0;
  f2(1) = 1.0;
  std::vector<std::vector<Vec>> dirs = {std::vector<Vec>(4, f1),
                                        std::vector<Vec>(4, f2)};
  auto repx = levy_check(noise, b_is_x, E, dirs);
  CHECK(repx.max_deviation <= 1e-8);
  CHECK(repx.zero_set_defect <= 1e-10);

  // negative control: un-compensated drift shifts the coefficients
  Mat theta0 = gbm.reserved_generator(0);
  auto b_drift = [&](int m, int a) {
    double t = gbm.filtration().time(m);
    (void)a;
    return Mat(Mat(noise.field(m, a)) + t * 0.4 * theta0);
  };
  auto repd = levy_check(noise, b_drift, E, dirs);
  CHECK(repd.max_deviation > 1e-4);
}

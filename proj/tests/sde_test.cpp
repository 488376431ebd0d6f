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

std::vector<std::vector<Mat>> x_path(const GBMProcess& gbm,
                                     const GridNoise& noise) {
  std::vector<std::vector<Mat>> p(gbm.n_t() + 1,
                                  std::vector<Mat>(noise.dirs()));
  for (int m = 0; m <= gbm.n_t(); ++m)
    for (int a = 0; a < noise.dirs(); ++a) p[m][a] = Mat(noise.field(m, a));
  return p;
}

}  // namespace

TEST_CASE("zero drift") {
  GBMProcess gbm(small_spec());
  GridNoise noise(gbm);
  Mat theta0 = gbm.reserved_generator(0);
  auto xp = x_path(gbm, noise);
  std::vector<Mat> psi0(noise.dirs(), Mat(0.5 * theta0));
  std::vector<GrassmannPolynomial> mu(noise.dirs(),
                                      GrassmannPolynomial(noise.dirs(), 0));
  auto sol = sde_strong_solve(noise, mu, psi0, xp, 1e-12, 3);
  for (int m = 0; m <= 3; ++m)
    for (int a = 0; a < noise.dirs(); ++a)
      CHECK((sol.psi[m][a] - psi0[a] - xp[m][a]).norm() <= 1e-13);
}

TEST_CASE("linear drift matches the exact discrete recursion") {
  GBMProcess gbm(small_spec());
  GridNoise noise(gbm);
  Eigen::Index dim = gbm.model().dim();
  double dt = gbm.dt();
  Mat theta0 = gbm.reserved_generator(0);
  auto xp = x_path(gbm, noise);
  std::vector<Mat> psi0 = {Mat(0.5 * theta0), Mat(-0.2 * theta0)};

  Mat amat(2, 2);
  amat << 0.4, 0.1, 0.1, 0.3;
  auto mu = linear_drift(noise, amat);
  auto sol = sde_strong_solve(noise, mu, psi0, xp, 1e-12, 8);

  std::vector<std::vector<Mat>> exact(4, std::vector<Mat>(2));
  std::vector<Mat> drift(2, Mat::Zero(dim, dim));
  for (int m = 0; m <= 3; ++m) {
    for (int a = 0; a < 2; ++a) exact[m][a] = psi0[a] + drift[a] + xp[m][a];
    if (m < 3)
      for (int a = 0; a < 2; ++a)
        drift[a] += dt * mu[a].eval_odd(exact[m], dim);
  }
  for (int m = 0; m <= 3; ++m)
    for (int a = 0; a < 2; ++a)
      CHECK((sol.psi[m][a] - exact[m][a]).norm() <= 1e-10);
  CHECK(sol.iterations <= 8);
}

TEST_CASE("continuum OU form is approached under refinement") {
  // The discrete solution converges to X~0(e^{-At} v) + int <e^{-A(t-s)} v, dX>
  Mat amat = 0.5 * Mat::Identity(2, 2);
  std::vector<double> errs;
  for (int nt : {2, 4}) {
    GBMSpec spec = small_spec(nt, 1);
    GBMProcess gbm(spec);
    GridNoise noise(gbm);
    Eigen::Index dim = gbm.model().dim();
    auto xp = x_path(gbm, noise);
    Mat theta0 = gbm.reserved_generator(0);
    std::vector<Mat> psi0 = {Mat(0.5 * theta0), Mat(0.25 * theta0)};
    auto sol =
        sde_strong_solve(noise, linear_drift(noise, amat), psi0, xp, 1e-12,
                         nt + 3);
    // Duhamel with left-endpoint increments
    double t = 1.0;
    Mat duh = Mat::Zero(dim, dim);
    Vec v = noise.dir(0);
    for (int j = 0; j < nt; ++j) {
      double tj = gbm.filtration().time(j);
      Mat eA = (-(amat * (t - tj))).exp();
      Vec ev = eA * v;
      for (int a = 0; a < 2; ++a) {
        Complex c = noise.dir(a).dot(ev);
        if (c != Complex(0.0))
          duh += c * Mat(gbm.increment(j, j + 1, noise.dir(a)));
      }
    }
    // initial term psi0 evaluated at e^{-At} v (psi0 linear in theta0)
    Mat init = Mat::Zero(dim, dim);
    Vec ev = Vec((-amat).exp() * v);
    for (int a = 0; a < 2; ++a) init += Complex(noise.dir(a).dot(ev)) * psi0[a];
    errs.push_back(operator_norm(Mat(sol.psi[nt][0] - init - duh)));
  }
  CHECK(errs[1] <= 0.7 * errs[0]);
}

TEST_CASE("gbar solve") {
  GBMProcess gbm(small_spec());
  Rng rng(111);
  for (int rep = 0; rep < 10; ++rep) {
    Vec y = rng.cgaussian_vector(2);
    Vec x = gbar_solve(gbm, y);
    CHECK((gbm.gbar(x) - y).norm() <= 1e-12 * (1.0 + y.norm()));
  }
}

TEST_CASE("divergence guard") {
  GBMProcess gbm(small_spec(2));
  GridNoise noise(gbm);
  auto xp = x_path(gbm, noise);
  Mat theta0 = gbm.reserved_generator(0);
  std::vector<Mat> psi0(2, Mat(0.5 * theta0));
  Mat amat = 0.5 * Mat::Identity(2, 2);
  auto mu = linear_drift(noise, amat);
  CHECK_THROWS_AS(sde_strong_solve(noise, mu, psi0, xp, 1e-15, 1),
                  DivergenceError);
}

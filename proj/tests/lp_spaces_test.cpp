#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ncpg/lp_spaces.hpp"

using namespace ncpg;

namespace {
QuasiFreeModel scalar_model(int d, double mu) {
  return QuasiFreeModel(RVec::Constant(d, mu), Conjugation::identity(d));
}
}  // namespace

TEST_CASE("twisted embeddings") {
  QuasiFreeModel m = scalar_model(2, 0.5);
  Rng rng(51);

  // x = 1 -> W^{1/p}
  for (double p : {1.0, 2.0, 4.0})
    CHECK((twisted_embed(m, Mat::Identity(m.dim(), m.dim()), p, 0.3) -
           m.w_power(1.0 / p))
              .norm() < 1e-14);

  // adjoint relation T_tau(x*) = (T_{-tau}(x))*
  Mat x = rng.cgaussian_matrix(m.dim());
  CHECK((twisted_embed(m, Mat(x.adjoint()), 3.0, 0.4) -
         Mat(twisted_embed(m, x, 3.0, -0.4).adjoint()))
            .norm() < 1e-13 * x.norm());

  // product splitting Eq. (2.4): T_t^{(r)}(xy) = T_{t+1/2q}^{(p)}(x) T_{t-1/2p}^{(q)}(y)
  Mat y = rng.cgaussian_matrix(m.dim());
  double p = 3.0, q = 6.0, r = 2.0, t = 0.2;
  Mat lhs = twisted_embed(m, Mat(x * y), r, t);
  Mat rhs = twisted_embed(m, x, p, t + 0.5 / q) *
            twisted_embed(m, y, q, t - 0.5 / p);
  CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));

  CHECK_THROWS_AS(twisted_embed(m, x, 2.0, 0.9), InvalidInput);
  CHECK_NOTHROW(twisted_embed(m, x, kPInf, 0.99));
}

TEST_CASE("twisted norms") {
  QuasiFreeModel m = scalar_model(1, 0.5);
  // number projector commutes with W: ||n||_{L^p} = (16/17)^{1/p}
  Mat n = Mat::Zero(2, 2);
  n(1, 1) = 1.0;
  for (double p : {1.0, 2.0, 3.0, 7.5})
    CHECK(twisted_norm(m, n, p) ==
          doctest::Approx(std::pow(16.0 / 17.0, 1.0 / p)).epsilon(1e-12));
  CHECK(std::abs(twisted_norm(m, Mat::Identity(2, 2), 4.0) - 1.0) < 1e-13);

  // star invariance and L^2 <= L^4 monotonicity on random elements
  QuasiFreeModel m3 = scalar_model(3, 0.5);
  Rng rng(52);
  for (int i = 0; i < 30; ++i) {
    Mat x = rng.cgaussian_matrix(m3.dim());
    CHECK(twisted_norm(m3, x, 3.0) ==
          doctest::Approx(twisted_norm(m3, Mat(x.adjoint()), 3.0))
              .epsilon(1e-10));
    CHECK(twisted_norm(m3, x, 2.0) <=
          twisted_norm(m3, x, 4.0) * (1.0 + 1e-10));
    auto det = twisted_norm_detail(m3, x, 2.5);
    CHECK(det.endpoint_guard_ok);
  }
}

TEST_CASE("haagerup trace identities") {
  QuasiFreeModel m = scalar_model(3, 0.5);
  Rng rng(53);
  CHECK(std::abs(haagerup_norm(m.w_power(1.0 / 3.0), 3.0) - 1.0) < 1e-12);
  for (int i = 0; i < 50; ++i) {
    Mat x = rng.cgaussian_matrix(m.dim()), y = rng.cgaussian_matrix(m.dim());
    // trace property and omega identification
    CHECK(std::abs(Complex((x * y).trace()) - Complex((y * x).trace())) <=
          1e-10 * x.norm() * y.norm());
    CHECK(std::abs(m.state(x) - Complex((m.w_matrix() * x).trace())) <=
          1e-12 * x.norm());
    // trace duality
    double tr = std::abs(Complex((x * y).trace()));
    CHECK(tr <= schatten_norm(x, 3.0) * schatten_norm(y, 1.5) * (1 + 1e-10));
  }
}

TEST_CASE("twisted element products and Hoelder") {
  QuasiFreeModel m = scalar_model(3, 0.5);
  Rng rng(54);
  Mat x = rng.cgaussian_matrix(m.dim());
  TwistedElement ex(m, x, 4.0);
  TwistedElement eid(m, Mat::Identity(m.dim(), m.dim()), kPInf);
  TwistedElement prod = ex.product(eid);
  CHECK((prod.matrix() - x).norm() == 0.0);
  CHECK(prod.exponent() == doctest::Approx(4.0));

  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    Mat a = rng.cgaussian_matrix(m.dim()), b = rng.cgaussian_matrix(m.dim());
    TwistedElement ea(m, a, 4.0), eb(m, b, 4.0);
    TwistedElement ab = ea.product(eb);
    if (ab.norm() > ea.norm() * eb.norm() * (1.0 + 1e-10)) ++violations;
  }
  CHECK(violations == 0);

  // associativity with exponent bookkeeping
  Mat c = rng.cgaussian_matrix(m.dim());
  TwistedElement ec(m, c, 8.0);
  TwistedElement lhs = ex.product(TwistedElement(m, x, 8.0)).product(ec);
  TwistedElement rhs = ex.product(TwistedElement(m, x, 8.0).product(ec));
  CHECK((lhs.matrix() - rhs.matrix()).norm() <= 1e-12 * lhs.matrix().norm());
  CHECK(lhs.exponent() == doctest::Approx(rhs.exponent()));

  // exponent mismatch
  TwistedElement e2(m, x, 2.0);
  CHECK_THROWS_AS(e2.product(e2).product(e2), UnsupportedExponent);
}

TEST_CASE("expectation extension") {
  QuasiFreeModel m = scalar_model(2, 0.5);
  Rng rng(55);
  TwistedElement one(m, Mat::Identity(m.dim(), m.dim()), 1.0);
  CHECK(std::abs(expectation_extend(one) - Complex(1.0)) < 1e-13);
  for (int i = 0; i < 40; ++i) {
    Mat x = rng.cgaussian_matrix(m.dim());
    TwistedElement ex(m, x, 1.0);
    CHECK(std::abs(expectation_extend(ex)) <= ex.norm() * (1.0 + 1e-10));
    CHECK(std::abs(expectation_extend(ex) - m.state(x)) <= 1e-12 * x.norm());
  }
}

TEST_CASE("spectral laws") {
  QuasiFreeModel m = scalar_model(2, 0.5);
  Rng rng(56);

  // projector -> Bernoulli
  Mat proj = Mat::Zero(m.dim(), m.dim());
  proj(0, 0) = 1.0;
  proj(3, 3) = 1.0;
  double qv = m.state(proj).real();
  SpectralLaw law = spectral_law(m, proj);
  REQUIRE(law.atoms.size() == 2);
  CHECK(law.atoms[0].first == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(law.atoms[0].second == doctest::Approx(1.0 - qv));
  CHECK(law.atoms[1].first == doctest::Approx(1.0));
  CHECK(law.atoms[1].second == doctest::Approx(qv));

  for (int i = 0; i < 30; ++i) {
    Mat a = rng.cgaussian_matrix(m.dim());
    Mat x = 0.5 * (a + Mat(a.adjoint()));
    SpectralLaw lx = spectral_law(m, x);
    CHECK(std::abs(lx.total_weight() - 1.0) < 1e-10);
    CHECK(lx.moment(2.0) ==
          doctest::Approx(m.state_product(x, x).real()).epsilon(1e-10));
    // reflection: law of -x mirrors law of x
    SpectralLaw lneg = spectral_law(m, Mat(-x));
    REQUIRE(lx.atoms.size() == lneg.atoms.size());
    std::size_t n = lx.atoms.size();
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(lx.atoms[k].first ==
            doctest::Approx(-lneg.atoms[n - 1 - k].first).epsilon(1e-10));
      CHECK(lx.atoms[k].second ==
            doctest::Approx(lneg.atoms[n - 1 - k].second).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(spectral_law(m, rng.cgaussian_matrix(m.dim())),
                  InvalidInput);
}

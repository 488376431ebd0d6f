#include "ncpg/suites.hpp"

#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "ncpg/girsanov.hpp"
#include "ncpg/phi4.hpp"

namespace ncpg {

namespace {

QuasiFreeModel scalar_model(int d, double mu) {
  return QuasiFreeModel(RVec::Constant(d, mu), Conjugation::identity(d));
}

Mat adapted_random(const Filtration& filt, Rng& rng, int level) {
  return filt.cond_exp(rng.cgaussian_matrix(filt.model().dim()), level);
}

// Independent Wick recursion used by the oracle-side checks.
Mat wick_reference(const std::vector<Vec>& fks,
                   const std::function<Mat(const Vec&)>& beta,
                   const std::function<Complex(const Mat&)>& state,
                   Eigen::Index dim) {
  if (fks.empty()) return Mat::Identity(dim, dim);
  if (fks.size() == 1) return beta(fks[0]);
  std::vector<Vec> rest(fks.begin() + 1, fks.end());
  Mat out = beta(fks[0]) * wick_reference(rest, beta, state, dim);
  for (std::size_t j = 0; j < rest.size(); ++j) {
    std::vector<Vec> omit;
    for (std::size_t k = 0; k < rest.size(); ++k)
      if (k != j) omit.push_back(rest[k]);
    double sign = (j % 2 == 0) ? -1.0 : 1.0;
    out += sign * state(beta(fks[0]) * beta(rest[j])) *
           wick_reference(omit, beta, state, dim);
  }
  return out;
}

double honest_isometry_constant(double mu, double tau) {
  double s = 0.5 + 2.0 * tau;
  double kappa = 1.0 / (1.0 / (mu * mu) - mu * mu);
  return (std::pow(mu, 2.0 - 4.0 * s) + std::pow(mu, 4.0 * s - 2.0)) * kappa;
}

double spec_display_constant(double mu, double tau) {
  double s = 0.5 + 2.0 * tau;
  double kappa = 1.0 / (1.0 / (mu * mu) - mu * mu);
  return std::pow(mu, -4.0 * s) * (mu * mu + 1.0 / (mu * mu)) * kappa;
}

GBMSpec make_gbm_spec(const SuiteConfig& cfg, int n_t, int n_reserved) {
  GBMSpec spec;
  spec.mu = cfg.mu;
  spec.n_t = n_t;
  spec.T = cfg.gbm_T;
  spec.h_dim = cfg.gbm_h_dim;
  spec.n_reserved = n_reserved;
  return spec;
}

double worst_successive_ratio(const std::vector<double>& vals) {
  double worst = 0.0;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i - 1] <= 1e-14) continue;
    worst = std::max(worst, vals[i] / vals[i - 1]);
  }
  return worst;
}

}  // namespace

Report suite_car_quasifree(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("car_quasifree");
  int vectors = cfg.fast ? 20 : 100;
  for (double mu : {0.25, 0.5, 0.75}) {
    QuasiFreeModel m = scalar_model(4, mu);
    double r2 = mu * mu + 1.0 / (mu * mu);
    double worst_car = 0.0, worst_two = 0.0;
    for (int rep_i = 0; rep_i < vectors / 2; ++rep_i) {
      Vec f = rng.cgaussian_vector(4), g = rng.cgaussian_vector(4);
      Mat gf = m.gamma_dense(f), gg = m.gamma_dense(g);
      Mat gfd = m.gamma_dag_dense(f);
      double scale = 1.0 + f.norm() * g.norm();
      worst_car = std::max(worst_car,
                           operator_norm(Mat(gf * gg + gg * gf)) / scale);
      worst_car = std::max(
          worst_car,
          operator_norm(Mat(gfd * gg + gg * gfd -
                            Complex(g.dot(r2 * f)) *
                                Mat::Identity(m.dim(), m.dim()))) /
              scale);
      worst_two = std::max(
          worst_two, std::abs(m.state_product(gfd, gg) -
                              g.dot(f) / (mu * mu)) / scale);
      worst_two = std::max(
          worst_two, std::abs(m.state_product(gg, gfd) -
                              g.dot(f) * (mu * mu)) / scale);
      Vec fk = rng.cgaussian_vector(8), gk = rng.cgaussian_vector(8);
      Mat bf = m.beta_dense(fk), bg = m.beta_dense(gk);
      worst_two = std::max(
          worst_two,
          std::abs(m.state_product(Mat(bf.adjoint()), bg) - fk.dot(gk)) /
              (1.0 + fk.norm() * gk.norm()));
    }
    rep.check("car_quasifree",
              "eq3.2 anticommutators mu=" + std::to_string(mu), worst_car,
              1e-12);
    rep.check("car_quasifree", "eq3.3/3.5 two-point mu=" + std::to_string(mu),
              worst_two, 1e-12);

    double worst_match = 0.0;
    for (int n : {4, 6}) {
      for (int rep_i = 0; rep_i < (cfg.fast ? 2 : 5); ++rep_i) {
        std::vector<Mat> betas;
        for (int i = 0; i < n; ++i)
          betas.push_back(m.beta_dense(rng.cgaussian_vector(8)));
        Mat prod = betas[0];
        for (int i = 1; i < n; ++i) prod = prod * betas[i];
        Complex direct = m.state(prod);
        Complex matched = matching_sum(n, [&](int i, int j) {
          return m.state_product(betas[i], betas[j]);
        });
        worst_match =
            std::max(worst_match,
                     std::abs(direct - matched) / (1.0 + std::abs(direct)));
      }
    }
    rep.check("car_quasifree",
              "4/6-point matching sums mu=" + std::to_string(mu), worst_match,
              1e-9);
  }
  return rep;
}

Report suite_wick_modular(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("wick_modular");

  {  // Eq. (3.6) in the doubled representation, degrees <= 4
    QuasiFreeModel m = scalar_model(2, cfg.mu);
    DoubledOracle oracle(m);
    Eigen::Index dim = oracle.basis().dim();
    Vec vac = Vec::Zero(dim);
    vac(0) = 1.0;
    double worst = 0.0;
    for (int deg = 1; deg <= 4; ++deg) {
      std::vector<Vec> fks;
      for (int i = 0; i < deg; ++i) fks.push_back(rng.cgaussian_vector(4));
      Mat w = wick_reference(
          fks, [&](const Vec& v) { return oracle.beta(v); },
          [&](const Mat& x) { return oracle.vacuum_state(x); }, dim);
      Vec rhs = oracle.astar_omega(fks);
      worst = std::max(worst, double((Vec(w * vac) - rhs).norm() /
                                     (1.0 + rhs.norm())));
    }
    rep.check("wick_modular", "eq3.6 wick vector identity", worst, 1e-10);
  }

  {  // Eq. (3.7) Gram orthonormality, degree <= 4, d = 4
    QuasiFreeModel m = scalar_model(4, cfg.mu);
    std::vector<std::vector<int>> monos;
    for (std::uint32_t mask = 0; mask < (1u << 8); ++mask) {
      if (__builtin_popcount(mask) > 4) continue;
      std::vector<int> legs;
      for (int l = 0; l < 8; ++l)
        if (mask & (1u << l)) legs.push_back(l);
      monos.push_back(legs);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < monos.size(); ++i) {
      Mat mi = m.wick_monomial(monos[i]).adjoint();
      for (std::size_t j = i; j < monos.size(); ++j) {
        Complex gram = m.state_product(mi, m.wick_monomial(monos[j]));
        worst =
            std::max(worst, std::abs(gram - Complex(i == j ? 1.0 : 0.0)));
      }
    }
    rep.check("wick_modular", "eq3.7 gram orthonormality", worst, 1e-10);
  }

  {  // KMS over 100 random pairs
    QuasiFreeModel m = scalar_model(3, cfg.mu);
    double worst = 0.0;
    int pairs = cfg.fast ? 20 : 100;
    for (int i = 0; i < pairs; ++i) {
      Mat x = rng.cgaussian_matrix(m.dim());
      Mat y = rng.cgaussian_matrix(m.dim());
      worst = std::max(worst, std::abs(m.state_product(x, m.twist(y, 1.0)) -
                                       m.state_product(y, x)) /
                                  (x.norm() * y.norm()));
    }
    rep.check("wick_modular", "KMS defect", worst, 1e-9);
  }

  {  // doubled oracle: all moments of degree <= 4, d <= 2
    double worst = 0.0;
    for (int d : {1, 2}) {
      QuasiFreeModel m = scalar_model(d, cfg.mu);
      DoubledOracle oracle(m);
      std::vector<Mat> model_ops, oracle_ops;
      for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e(i) = 1.0;
        model_ops.push_back(m.gamma_dense(e));
        model_ops.push_back(m.gamma_dag_dense(e));
        oracle_ops.push_back(oracle.gamma(e));
        oracle_ops.push_back(oracle.gamma_dag(e));
      }
      int nops = static_cast<int>(model_ops.size());
      std::function<void(std::vector<int>&)> walk =
          [&](std::vector<int>& word) {
            if (!word.empty()) {
              Mat pm = model_ops[word[0]], po = oracle_ops[word[0]];
              for (std::size_t i = 1; i < word.size(); ++i) {
                pm = pm * model_ops[word[i]];
                po = po * oracle_ops[word[i]];
              }
              worst = std::max(
                  worst, std::abs(m.state(pm) - oracle.vacuum_state(po)));
            }
            if (static_cast<int>(word.size()) == 4) return;
            for (int k = 0; k < nops; ++k) {
              word.push_back(k);
              walk(word);
              word.pop_back();
            }
          };
      std::vector<int> word;
      walk(word);
    }
    rep.check("wick_modular", "doubled-GNS moments degree<=4", worst, 1e-10);
  }
  return rep;
}

Report suite_twisted_lp(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("twisted_lp");
  QuasiFreeModel m = scalar_model(3, cfg.mu);

  rep.check("twisted_lp", "norm of identity",
            std::abs(twisted_norm(m, Mat::Identity(m.dim(), m.dim()), 3.0) -
                     1.0),
            1e-12);

  int triples = cfg.fast ? 40 : 200;
  double hoelder_violation = 0.0, guard_violation = 0.0, mono_violation = 0.0;
  struct Tuple {
    double p, q, r;
  };
  std::vector<Tuple> tuples = {{2, 2, 1}, {4, 4, 2}, {3, 6, 2}, {kPInf, 4, 4}};
  for (int i = 0; i < triples; ++i) {
    Mat x = rng.cgaussian_matrix(m.dim());
    Mat y = rng.cgaussian_matrix(m.dim());
    const Tuple& tp = tuples[i % tuples.size()];
    auto nx = twisted_norm_detail(m, x, tp.p);
    auto ny = twisted_norm_detail(m, y, tp.q);
    auto nxy = twisted_norm_detail(m, Mat(x * y), tp.r);
    hoelder_violation = std::max(
        hoelder_violation, nxy.value / (nx.value * ny.value) - 1.0);
    for (const auto& d : {nx, ny, nxy})
      guard_violation =
          std::max(guard_violation,
                   d.interior_max - d.value);
    // monotonicity chain 1 <= 2 <= 4 <= inf
    double n1 = twisted_norm(m, x, 1.0), n2 = twisted_norm(m, x, 2.0);
    double n4 = twisted_norm(m, x, 4.0), ni = twisted_norm(m, x, kPInf);
    mono_violation = std::max({mono_violation, n1 - n2, n2 - n4, n4 - ni});
  }
  rep.check("twisted_lp", "Hoelder eq2.6 relative violation",
            std::max(0.0, hoelder_violation), 1e-10);
  rep.check("twisted_lp", "monotonicity L^q <= L^p",
            std::max(0.0, mono_violation), 1e-10);
  rep.check("twisted_lp", "endpoint-max tau guard",
            std::max(0.0, guard_violation), 1e-9);
  return rep;
}

Report suite_cond_exp(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("cond_exp");
  QuasiFreeModel m = scalar_model(4, cfg.mu);
  std::vector<double> times = {0, 1, 2, 3, 4};
  std::vector<int> kept = {0, 1, 2, 3, 4};
  Filtration filt(m, times, kept);
  int per_level = cfg.fast ? 10 : 100;

  double unital = 0.0, module = 0.0, schwarz = 0.0, state_pres = 0.0,
         modular = 0.0, duality = 0.0, compat = 0.0, tau_indep = 0.0;
  for (int j = 0; j < filt.levels(); ++j) {
    unital = std::max(unital,
                      double((filt.cond_exp(Mat::Identity(m.dim(), m.dim()), j) -
                              Mat::Identity(m.dim(), m.dim()))
                                 .norm()));
    for (int i = 0; i < per_level; ++i) {
      Mat x = rng.cgaussian_matrix(m.dim());
      Mat ex = filt.cond_exp(x, j);
      double sc = std::max(1.0, x.norm());

      Mat a = adapted_random(filt, rng, j), b = adapted_random(filt, rng, j);
      module = std::max(module,
                        double((filt.cond_exp(Mat(a * x * b), j) -
                                Mat(a * ex * b))
                                   .norm() /
                               (sc * a.norm() * b.norm())));

      Mat sch = filt.cond_exp(Mat(x.adjoint() * x), j) -
                Mat(ex.adjoint() * ex);
      Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(sch, 1e-8));
      schwarz = std::max(schwarz, std::max(0.0, -es.eigenvalues().minCoeff()) /
                                      (sc * sc));

      state_pres = std::max(state_pres,
                            std::abs(m.state(ex) - m.state(x)) / sc);
      Mat lhs = m.modular_flow(ex, Complex(0.37, 0.0));
      Mat rhs = filt.cond_exp(m.modular_flow(x, Complex(0.37, 0.0)), j);
      modular = std::max(modular, double((lhs - rhs).norm() / sc));

      // Eq. (2.10): tr(y w^{(p)}(x)) = tr(w^{(q)}(y) x), p = 4, q = 4/3
      Mat y = rng.cgaussian_matrix(m.dim());
      Complex l = (y * filt.cond_exp_lp(x, j, 4.0, 0.1)).trace();
      Complex r = (filt.cond_exp_lp(y, j, 4.0 / 3.0, -0.1) * x).trace();
      duality =
          std::max(duality, std::abs(l - r) / (sc * std::max(1.0, y.norm())));

      // Remark 2.23: T_tau(w_j(x)) = w_j^{(p)}(T_tau(x))
      double p = 3.0, tau = 0.4;
      Mat c1 = twisted_embed(m, ex, p, tau);
      Mat c2 = filt.cond_exp_lp(twisted_embed(m, x, p, tau), j, p, tau);
      compat = std::max(compat, double((c1 - c2).norm() / sc));

      // tau-independence of the L^p extension: the map on representatives
      // does not depend on which tau was used to unsandwich.
      Mat t1 = filt.cond_exp_lp(x, j, 2.0, 0.3);
      Mat t2 = filt.cond_exp_lp(x, j, 2.0, -0.2);
      tau_indep = std::max(tau_indep, double((t1 - t2).norm() / sc));
    }
  }
  rep.check("cond_exp", "unital", unital, 1e-10);
  rep.check("cond_exp", "module property", module, 1e-10);
  rep.check("cond_exp", "Schwarz PSD defect", schwarz, 1e-10);
  rep.check("cond_exp", "state preservation eq2.7", state_pres, 1e-10);
  rep.check("cond_exp", "modular commutation eq2.7", modular, 1e-10);
  rep.check("cond_exp", "duality eq2.10", duality, 1e-10);
  rep.check("cond_exp", "Remark 2.23 compatibility", compat, 1e-10);
  rep.check("cond_exp", "tau independence eq2.9", tau_indep, 1e-10);
  return rep;
}

Report suite_gbm(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("gbm");
  GBMProcess gbm(make_gbm_spec(cfg, cfg.gbm_n_t, 0));
  const QuasiFreeModel& m = gbm.model();
  int hd = gbm.h_dim();

  {  // Eq. (3.11) at all grid-time pairs
    double worst = 0.0;
    std::vector<Vec> dirs = real_theta_basis(hd);
    for (int extra = 0; extra < 5; ++extra)
      dirs.push_back(rng.cgaussian_vector(hd));
    for (int mt = 0; mt <= gbm.n_t(); ++mt)
      for (int ms = 0; ms <= gbm.n_t(); ++ms)
        for (std::size_t a = 0; a < dirs.size(); ++a)
          for (std::size_t b = 0; b < dirs.size(); ++b) {
            Complex lhs = m.state_product(gbm.field(mt, dirs[a]),
                                          gbm.field(ms, dirs[b]));
            Complex rhs = gbm.covariance(
                dirs[a], dirs[b],
                gbm.filtration().time(std::min(mt, ms)));
            worst = std::max(worst, std::abs(lhs - rhs) /
                                        (1.0 + dirs[a].norm() * dirs[b].norm()));
          }
    rep.check("gbm", "eq3.11 covariance", worst, 1e-10);
  }

  {  // Lemma 3.18 eigen-relation, paper-literal, plus the honest
     // componentwise law. The literal form contradicts Eq. (3.3)+(3.8)+KMS
     // (see decisions ledger); it is asserted as stated and expected red.
    Vec f = rng.cgaussian_vector(hd);
    double mu = cfg.mu;
    double tau = 0.25;
    Mat x = gbm.field(gbm.n_t(), f);
    Mat tw = m.twist(x, tau);
    double literal = (tw - std::pow(mu, -4.0 * tau) * x).norm() / x.norm();
    Mat comp =
        std::pow(mu, -4.0 * tau) * Mat(m.gamma_dag(gbm.embed(gbm.n_t(), f))) -
        std::pow(mu, 4.0 * tau) *
            Mat(m.gamma(gbm.embed_tilde(gbm.n_t(), f)));
    double honest = (tw - comp).norm() / x.norm();
    rep.check("gbm", "lemma3.18 [X]_tau = mu^-4tau X (paper literal)",
              literal, 1e-10,
              "paper-inconsistent claim, see ledger; honest componentwise "
              "law verified below");
    rep.check("gbm", "modular continuation componentwise (honest)", honest,
              1e-10);
  }

  {  // omega(X_1^*(f) X_1(f)) = 17/15 ||Cf||^2 at mu = 1/2
    Vec f = Vec::Zero(hd);
    f(0) = 1.0;
    Mat x = gbm.field(gbm.n_t(), f);
    Complex v = m.state_product(Mat(x.adjoint()), x);
    double expect = (cfg.mu * cfg.mu + 1.0 / (cfg.mu * cfg.mu)) /
                    (1.0 / (cfg.mu * cfg.mu) - cfg.mu * cfg.mu) * cfg.gbm_T;
    rep.check("gbm", "omega(X*X) = 17/15 instantiation",
              std::abs(v - Complex(expect)), 1e-10);
  }

  {  // increment-norm slope over dyadic spacings (single-cell models)
    std::vector<double> deltas, n2, n4;
    for (int k = 0; k <= 4; ++k) {
      double delta = std::pow(0.5, k);
      GBMSpec s1 = make_gbm_spec(cfg, 1, 0);
      s1.T = delta;
      GBMProcess g1(s1);
      Vec f = Vec::Zero(hd);
      f(0) = 1.0;
      Mat x = g1.field(1, f);
      deltas.push_back(delta);
      n2.push_back(twisted_norm(g1.model(), x, 2.0));
      n4.push_back(twisted_norm(g1.model(), x, 4.0));
    }
    double s2 = loglog_slope(deltas, n2);
    double s4 = loglog_slope(deltas, n4);
    rep.check("gbm", "increment norm slope p=2 (|0.5 - fit|)",
              std::abs(s2 - 0.5), 0.05);
    rep.check("gbm", "increment norm slope p=4 (|0.5 - fit|)",
              std::abs(s4 - 0.5), 0.05);
  }
  return rep;
}

Report suite_ito_isometry(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("ito_isometry");
  GBMProcess gbm(make_gbm_spec(cfg, 4, 0));
  const QuasiFreeModel& m = gbm.model();
  GridNoise noise(gbm);
  double dt = gbm.dt();
  Vec v = Vec::Zero(gbm.h_dim());
  v(0) = 1.0;  // ||C v|| = 1

  std::vector<double> taus = {0.0, 0.25, -0.25, 0.75, -0.75};

  // matrix oracle for the constant: omega(dX*(v) [dX(v)]_s) / dt
  double oracle_vs_closed = 0.0, spec_vs_oracle = 0.0;
  std::vector<double> oracle_c(taus.size());
  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    double s = 0.5 + 2.0 * taus[ti];
    Mat dx = gbm.increment(0, 1, v);
    Complex c =
        m.state_product(Mat(dx.adjoint()), m.twist(dx, s)) / dt;
    oracle_c[ti] = c.real();
    oracle_vs_closed =
        std::max(oracle_vs_closed,
                 std::abs(c - Complex(honest_isometry_constant(
                                  cfg.mu, taus[ti]))) /
                     std::abs(c));
    spec_vs_oracle = std::max(
        spec_vs_oracle,
        std::abs(c - Complex(spec_display_constant(cfg.mu, taus[ti]))) /
            std::abs(c));
  }
  rep.check("ito_isometry", "matrix oracle vs closed-form c_tau",
            oracle_vs_closed, 1e-12,
            "c_tau = (mu^{2-4s} + mu^{4s-2})/(mu^{-2} - mu^2), s = 1/2+2tau");
  rep.record("ito_isometry", "spec display formula deviation from oracle",
             spec_vs_oracle,
             "spec's mu^{-4s}(mu^2+mu^{-2}) form matches only at tau=-1/4; "
             "ledger entry");

  int processes = cfg.fast ? 5 : 20;
  double worst = 0.0;
  for (int pi = 0; pi < processes; ++pi) {
    std::vector<Mat> fvals;
    for (int j = 0; j < gbm.n_t(); ++j)
      fvals.push_back(adapted_random(gbm.filtration(), rng, j));
    Mat y = ito_integral_scalar(noise, fvals, v, gbm.n_t());
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
      double tau = taus[ti];
      double lhs = m.sandwich(y, 0.25 + tau, 0.25 - tau).squaredNorm();
      double rhs = 0.0;
      for (int j = 0; j < gbm.n_t(); ++j)
        rhs += m.sandwich(fvals[j], 0.25 + tau, 0.25 - tau).squaredNorm() * dt;
      rhs *= oracle_c[ti];
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-30, rhs));
    }
  }
  rep.check("ito_isometry", "eq4.4 isometry equality (rel)", worst, 1e-9);
  return rep;
}

namespace {

// Refinement ratio in the spec's CSV sense, residual(delta/2)/residual(delta),
// estimated as 2^{-p} from the least-squares rate fit over the grid family.
double dyadic_ratio(const std::vector<int>& grids,
                    const std::vector<double>& res) {
  std::vector<double> deltas, vals;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    if (res[i] <= 0.0) continue;
    deltas.push_back(1.0 / grids[i]);
    vals.push_back(res[i]);
  }
  if (vals.size() < 2) return 0.0;
  double p = loglog_slope(deltas, vals);  // res ~ delta^p
  return std::pow(2.0, -p);
}

bool decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + 1e-14) return false;
  return true;
}

}  // namespace

Report suite_ito_formula(const SuiteConfig& cfg) {
  Report rep;
  std::vector<int> grids = cfg.fast ? std::vector<int>{2, 4}
                                    : std::vector<int>{2, 3, 4, 5};

  double linear_worst = 0.0;
  std::vector<double> quad_res, cubic_res, mixed_res;
  for (int nt : grids) {
    GBMProcess gbm(make_gbm_spec(cfg, nt, 0));
    GridNoise noise(gbm);
    const QuasiFreeModel& m = gbm.model();
    Eigen::Index dim = m.dim();
    int nd = noise.dirs();

    // W directions: Y^0 = X(v0), Y^1 = X(v1), Y^2 = X((v0+v1)/sqrt2)
    std::vector<Vec> wdirs = {
        noise.dir(0), noise.dir(1),
        Vec((noise.dir(0) + noise.dir(1)) / std::sqrt(2.0))};
    auto make_driftless = [&](const Vec& u) {
      std::vector<std::vector<Mat>> h(nt, std::vector<Mat>(nd));
      for (int j = 0; j < nt; ++j)
        for (int a = 0; a < nd; ++a)
          h[j][a] = Complex(noise.dir(a).dot(u)) * Mat::Identity(dim, dim);
      return ItoProcess(noise, Mat::Zero(dim, dim), h, {}, 0);
    };
    std::vector<ItoProcess> ys;
    for (const Vec& u : wdirs) ys.push_back(make_driftless(u));

    {  // linear F, with a cubic (odd) drift on one process. Any cubic in
       // the two fixed-time field components vanishes, so the third factor
       // is taken at an earlier grid time.
      std::vector<Mat> k(nt);
      for (int j = 0; j < nt; ++j) {
        Mat x0 = Mat(noise.field(j, 0)), x1 = Mat(noise.field(j, 1));
        Mat xe = Mat(noise.field(j / 2, 0));
        k[j] = 0.3 * (x0 * x1 * xe);
      }
      std::vector<std::vector<Mat>> h(nt, std::vector<Mat>(nd));
      for (int j = 0; j < nt; ++j)
        for (int a = 0; a < nd; ++a)
          h[j][a] = Complex(noise.dir(a).dot(wdirs[0])) *
                    Mat::Identity(dim, dim);
      ItoProcess ylin(noise, Mat::Zero(dim, dim), h, k, 0);
      GrassmannPolynomial f = GrassmannPolynomial::anti_monomial(1, 0, 1u);
      auto res = ito_formula_residual(noise, f, {ylin}, {});
      linear_worst = std::max(linear_worst, res.residual);
    }

    {  // quadratic F over two odd driftless processes
      GrassmannPolynomial f = GrassmannPolynomial::anti_monomial(2, 0, 3u);
      auto res = ito_formula_residual(noise, f, {ys[0], ys[1]}, {});
      quad_res.push_back(res.residual);
    }

    {  // cubic F over three odd processes
      GrassmannPolynomial f = GrassmannPolynomial::anti_monomial(3, 0, 7u);
      auto res = ito_formula_residual(noise, f, {ys[0], ys[1], ys[2]}, {});
      cubic_res.push_back(res.residual);
    }
  }

  // mixed even/odd case of Eq. (4.23): F = w0_anti (x) s0_sym with an even
  // process driven by a reserved-generator integrand (clean sqrt-delta rate)
  for (int nt : grids) {
    GBMProcess gbm(make_gbm_spec(cfg, nt, 1));
    GridNoise noise(gbm);
    Eigen::Index dim = gbm.model().dim();
    int nd = noise.dirs();
    Mat theta0 = gbm.reserved_generator(0);
    std::vector<std::vector<Mat>> hm(nt, std::vector<Mat>(nd));
    std::vector<std::vector<Mat>> hp(nt, std::vector<Mat>(nd));
    for (int j = 0; j < nt; ++j)
      for (int a = 0; a < nd; ++a) {
        hm[j][a] = Complex(noise.dir(a).dot(noise.dir(0))) *
                   Mat::Identity(dim, dim);
        hp[j][a] = Complex(noise.dir(a).dot(noise.dir(1))) * theta0;
      }
    ItoProcess yminus(noise, Mat::Zero(dim, dim), hm, {}, 0);
    ItoProcess yplus(noise, Mat::Zero(dim, dim), hp, {}, 1);
    GrassmannPolynomial f(1, 1);
    f.add_term(1u, {0}, 1.0);
    auto res = ito_formula_residual(noise, f, {yminus}, {yplus});
    mixed_res.push_back(res.residual);
  }

  rep.check("ito_formula", "linear F residual", linear_worst, 1e-10);
  rep.expect("ito_formula", "residuals decrease with refinement",
             decreasing(quad_res) && decreasing(cubic_res) &&
                 decreasing(mixed_res),
             quad_res.back());
  rep.check("ito_formula", "quadratic residual(delta/2)/residual(delta)",
            dyadic_ratio(grids, quad_res), 0.75);
  rep.check("ito_formula", "cubic residual(delta/2)/residual(delta)",
            dyadic_ratio(grids, cubic_res), 0.8);
  rep.check("ito_formula", "mixed even/odd residual(delta/2)/residual(delta)",
            dyadic_ratio(grids, mixed_res), 0.8);
  return rep;
}

Report suite_girsanov(const SuiteConfig& cfg) {
  Report rep;
  std::vector<int> grids = cfg.fast ? std::vector<int>{2, 3}
                                    : std::vector<int>{2, 3, 4};
  double lambda = 0.3;

  double z_mart = 0.0, series_defect = 0.0, bracket_defect = 0.0,
         normalization = 0.0;
  std::vector<double> moment_res;
  for (int nt : grids) {
    GBMProcess gbm(make_gbm_spec(cfg, nt, 1));
    GridNoise noise(gbm);
    const QuasiFreeModel& m = gbm.model();
    Eigen::Index dim = m.dim();
    int nd = noise.dirs();
    Mat theta0 = gbm.reserved_generator(0);
    Vec w = noise.dir(0);

    std::vector<std::vector<Mat>> hvals(nt, std::vector<Mat>(nd));
    for (int j = 0; j < nt; ++j)
      for (int a = 0; a < nd; ++a)
        hvals[j][a] = lambda * Complex(w.dot(noise.dir(a))) * theta0;
    AdaptedSimpleProcess h(gbm, hvals, 1);

    StochasticExponential se = stochastic_exponential(noise, h);
    series_defect = std::max(series_defect, se.series_vs_expm);

    GirsanovShift gs = girsanov_shift(noise, h);
    normalization = std::max(
        normalization, std::abs(gs.se.expect(Mat::Identity(dim, dim)) -
                                Complex(1.0)));

    for (int s = 0; s <= nt; ++s)
      z_mart = std::max(
          z_mart,
          double((gbm.filtration().cond_exp(se.z[nt], s) - se.z[s]).norm()));

    // bracket preservation: B and X have identical integrand H = identity,
    // so the eq. (4.17) brackets coincide; verified via the qv paths.
    {
      std::vector<std::vector<Mat>> hid(nt, std::vector<Mat>(nd));
      for (int j = 0; j < nt; ++j)
        for (int a = 0; a < nd; ++a)
          hid[j][a] = Complex(noise.dir(a).dot(noise.dir(0))) *
                      Mat::Identity(dim, dim);
      ItoProcess x0(noise, Mat::Zero(dim, dim), hid, {}, 0);
      std::vector<Mat> bdrift(nt);
      for (int j = 0; j < nt; ++j)
        bdrift[j] = (gs.b[j + 1][0] - gs.b[j][0]) / gbm.dt() -
                    Mat(noise.increment(j, 0)) / gbm.dt();
      ItoProcess b0(noise, Mat::Zero(dim, dim), hid, bdrift, 0);
      auto qx = quadratic_variation(noise, x0, x0, false);
      auto qb = quadratic_variation(noise, b0, b0, false);
      for (int s = 0; s <= nt; ++s)
        bracket_defect = std::max(
            bracket_defect, double((qx.path[s] - qb.path[s]).norm()));
    }

    // E^Z moments of B against the matching oracle
    double worst = 0.0;
    for (int mt = 1; mt <= nt; ++mt)
      for (int ms = 1; ms <= nt; ++ms) {
        Mat bt = shifted_field(noise, gs, mt, noise.dir(0));
        Mat bs = shifted_field(noise, gs, ms, noise.dir(1));
        Complex lhs = gs.se.expect(Mat(bt * bs));
        Complex rhs = matching_moment(
            gbm, {{gbm.filtration().time(mt), noise.dir(0)},
                  {gbm.filtration().time(ms), noise.dir(1)}});
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    // one 4-point moment
    {
      Mat b1 = shifted_field(noise, gs, nt, noise.dir(0));
      Mat b2 = shifted_field(noise, gs, nt, noise.dir(1));
      Mat b3 = shifted_field(noise, gs, std::max(1, nt / 2), noise.dir(0));
      Mat b4 = shifted_field(noise, gs, std::max(1, nt / 2), noise.dir(1));
      Complex lhs = gs.se.expect(Mat(b1 * b2 * b3 * b4));
      double tmid = gbm.filtration().time(std::max(1, nt / 2));
      Complex rhs = matching_moment(gbm, {{cfg.gbm_T, noise.dir(0)},
                                          {cfg.gbm_T, noise.dir(1)},
                                          {tmid, noise.dir(0)},
                                          {tmid, noise.dir(1)}});
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    moment_res.push_back(worst);
  }
  rep.check("girsanov", "Z martingale defect", z_mart, 1e-9);
  rep.check("girsanov", "series vs matrix exponential", series_defect, 1e-10);
  rep.check("girsanov", "bracket preservation", bracket_defect, 1e-10);
  rep.check("girsanov", "signed expectation normalization", normalization,
            1e-9);
  rep.check("girsanov", "E^Z moments vs matching oracle, refinement ratio",
            worst_successive_ratio(moment_res), 0.8);
  return rep;
}

Report suite_sde(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("sde");
  (void)rng;
  std::vector<int> grids = cfg.fast ? std::vector<int>{2, 3}
                                    : std::vector<int>{2, 3, 4};

  double mu0_defect = 0.0, linear_defect = 0.0;
  int cubic_iters = 0;
  double cubic_residual = 0.0;
  std::vector<double> weak_res;
  for (int nt : grids) {
    GBMProcess gbm(make_gbm_spec(cfg, nt, 2));
    GridNoise noise(gbm);
    const QuasiFreeModel& m = gbm.model();
    Eigen::Index dim = m.dim();
    int nd = noise.dirs();
    double dt = gbm.dt();
    Mat theta0 = gbm.reserved_generator(0);
    Mat theta1 = gbm.reserved_generator(1);

    std::vector<std::vector<Mat>> xpath(nt + 1, std::vector<Mat>(nd));
    for (int mm = 0; mm <= nt; ++mm)
      for (int a = 0; a < nd; ++a) xpath[mm][a] = Mat(noise.field(mm, a));

    std::vector<Mat> psi0(nd);
    for (int a = 0; a < nd; ++a)
      psi0[a] = (a == 0) ? Mat(0.5 * theta0) : Mat(0.25 * theta0);

    // mu = 0
    {
      std::vector<GrassmannPolynomial> mu(nd, GrassmannPolynomial(nd, 0));
      auto sol = sde_strong_solve(noise, mu, psi0, xpath, 1e-12, 5);
      for (int mm = 0; mm <= nt; ++mm)
        for (int a = 0; a < nd; ++a)
          mu0_defect = std::max(
              mu0_defect,
              double((sol.psi[mm][a] - psi0[a] - xpath[mm][a]).norm()));
    }

    // pure linear drift: Picard fixed point vs exact forward recursion
    Mat amat(gbm.h_dim(), gbm.h_dim());
    amat = 0.4 * Mat::Identity(gbm.h_dim(), gbm.h_dim());
    amat(0, 1) = 0.1;
    amat(1, 0) = 0.1;
    {
      auto mu = linear_drift(noise, amat);
      auto sol = sde_strong_solve(noise, mu, psi0, xpath, 1e-12, nt + 3);
      // exact discrete solution by forward substitution
      std::vector<std::vector<Mat>> exact(nt + 1, std::vector<Mat>(nd));
      for (int a = 0; a < nd; ++a) exact[0][a] = psi0[a] + xpath[0][a];
      std::vector<Mat> drift(nd, Mat::Zero(dim, dim));
      for (int mm = 1; mm <= nt; ++mm) {
        for (int a = 0; a < nd; ++a) {
          drift[a] += dt * mu[a].eval_odd(exact[mm - 1], dim);
          exact[mm][a] = psi0[a] + drift[a] + xpath[mm][a];
        }
      }
      for (int mm = 0; mm <= nt; ++mm)
        for (int a = 0; a < nd; ++a)
          linear_defect = std::max(
              linear_defect, double((sol.psi[mm][a] - exact[mm][a]).norm()));
    }

    // cubic drift, small coupling: mu(v_a) = -psi(A v_a) + lam_a th1 psi0 psi1
    double lam = 0.2;
    std::vector<GrassmannPolynomial> mu_cubic;
    {
      auto lin = linear_drift(noise, amat);
      for (int a = 0; a < nd; ++a) {
        // variables: 0..nd-1 = psi components, nd = theta1
        GrassmannPolynomial p(nd + 1, 0);
        for (const auto& [k, c] : lin[a].terms())
          p.add_term(k.anti, k.sym, c);
        if (a == 0) {
          GrassmannPolynomial cubic =
              GrassmannPolynomial::anti_var(nd + 1, 0, nd) *
              GrassmannPolynomial::anti_var(nd + 1, 0, 0) *
              GrassmannPolynomial::anti_var(nd + 1, 0, 1);
          p = p + cubic * lam;
        }
        mu_cubic.push_back(p);
      }
    }
    auto eval_mu_cubic = [&](const std::vector<Mat>& psi, int a) {
      std::vector<Mat> z = psi;
      z.push_back(theta1);
      return mu_cubic[a].eval_odd(z, dim);
    };
    // Picard with the theta-extended variable set
    StrongSolution cubic_sol;
    {
      cubic_sol.psi.assign(nt + 1, std::vector<Mat>(nd));
      for (int mm = 0; mm <= nt; ++mm)
        for (int a = 0; a < nd; ++a)
          cubic_sol.psi[mm][a] = psi0[a] + xpath[mm][a];
      double delta = 1e300;
      int it = 0;
      while (delta > 1e-9 && it < 30) {
        std::vector<std::vector<Mat>> next(nt + 1, std::vector<Mat>(nd));
        std::vector<Mat> acc(nd, Mat::Zero(dim, dim));
        for (int mm = 0; mm <= nt; ++mm) {
          for (int a = 0; a < nd; ++a)
            next[mm][a] = psi0[a] + acc[a] + xpath[mm][a];
          if (mm < nt)
            for (int a = 0; a < nd; ++a)
              acc[a] += dt * eval_mu_cubic(cubic_sol.psi[mm], a);
        }
        delta = 0.0;
        for (int mm = 0; mm <= nt; ++mm)
          for (int a = 0; a < nd; ++a)
            delta = std::max(delta, operator_norm(Mat(
                                        next[mm][a] - cubic_sol.psi[mm][a])));
        cubic_sol.psi = std::move(next);
        ++it;
        cubic_sol.iterations = it;
        cubic_sol.residual = delta;
      }
      if (nt == grids.back()) {
        cubic_iters = cubic_sol.iterations;
        cubic_residual = cubic_sol.residual;
      }
    }

    // weak representation (Thm 4.52): mu = linear + cubic, h0 = 0,
    // initial X~0(v) = theta0 <w0, v>.
    {
      auto lin = linear_drift(noise, amat);
      // strong solution with the full drift
      // X^A: strong solution with the linear part only
      auto xa = sde_strong_solve(noise, lin, psi0, xpath, 1e-12, nt + 3);
      // H_j(v_g) = mu^A(Gbar^{-1} v_g)(X^A_j)
      std::vector<std::vector<Mat>> hvals(nt, std::vector<Mat>(nd));
      for (int j = 0; j < nt; ++j)
        for (int g = 0; g < nd; ++g) {
          Vec u = gbar_solve(gbm, noise.dir(g));
          Mat acc = Mat::Zero(dim, dim);
          for (int b = 0; b < nd; ++b) {
            Complex cb = noise.dir(b).dot(u);
            if (cb == Complex(0.0)) continue;
            // cubic part only (mu^A = mu - A-part)
            if (b == 0) {
              Mat cub = theta1 * xa.psi[j][0] * xa.psi[j][1];
              acc += cb * lam * cub;
            }
          }
          hvals[j][g] = acc;
        }
      AdaptedSimpleProcess hproc(gbm, hvals, 1, true, 1e-8);
      StochasticExponential zse = stochastic_exponential(noise, hproc);

      // strong solution of the full SDE
      StrongSolution full = cubic_sol;

      // test polynomials: even two-point functionals
      double worst = 0.0;
      for (auto [a, b] : {std::pair<int, int>{0, 1}, {1, 0}}) {
        Complex strong = m.state(Mat(full.psi[nt][a] * full.psi[nt][b]));
        Complex weak = m.state_product(Mat(xa.psi[nt][a] * xa.psi[nt][b]),
                                       zse.z[nt]);
        worst = std::max(worst, std::abs(strong - weak));
      }
      weak_res.push_back(worst);
    }
  }
  rep.check("sde", "mu = 0 closed form", mu0_defect, 1e-12);
  rep.check("sde", "linear drift matches discrete closed form",
            linear_defect, 1e-9);
  rep.expect("sde", "cubic Picard converges (<= 30 iters, residual < 1e-8)",
             cubic_iters > 0 && cubic_iters <= 30 && cubic_residual < 1e-8,
             cubic_residual,
             "iterations = " + std::to_string(cubic_iters));
  rep.check("sde", "weak vs strong refinement ratio", worst_successive_ratio(weak_res),
            0.8);
  return rep;
}

Report suite_hypercontractivity(const SuiteConfig& cfg) {
  Report rep;
  QuasiFreeModel m = scalar_model(2, cfg.mu);
  Rng rng = Rng(cfg.seed).split("hyper");

  {  // Eq. (3.22) identity
    double worst = 0.0;
    double t = 0.6, tau = -0.3;
    for (std::uint32_t mask : {0x1u, 0x3u, 0x7u, 0xDu}) {
      std::vector<int> legs;
      for (int l = 0; l < 4; ++l)
        if (mask & (1u << l)) legs.push_back(l);
      Mat mono = m.wick_monomial(legs);
      int deg = static_cast<int>(legs.size());
      Mat lhs = m.sandwich(mono, 0.25 + tau, 0.25 - tau);
      Mat rhs = std::exp(t * deg) *
                m.sandwich(m.ou_semigroup(mono, t), 0.25 + tau, 0.25 - tau);
      worst = std::max(worst, double((lhs - rhs).norm() /
                                     std::max(1.0, lhs.norm())));
    }
    rep.check("hypercontractivity", "eq3.22 identity", worst, 1e-10);
  }

  double p = 4.0 / 3.0;
  double rhs = 0.1 * std::pow(cfg.mu, 8.0 / p - 4.0) * (p - 1.0);
  double t_threshold = -0.5 * std::log(rhs);
  int probes = cfg.fast ? 50 : 500;
  auto est = hyper_norm_estimate(m, t_threshold, p, 2.0, probes, cfg.seed);
  rep.check("hypercontractivity",
            "||P_t^{(4/3,2)}|| <= 1 + 1e-6 at the Thm 3.20 threshold",
            est.estimate - 1.0, 1e-6,
            "t = " + std::to_string(t_threshold));

  // empirical t*: first t where the estimate dips below 1
  double tstar = -1.0;
  double prev = 1e300;
  double monotone_defect = 0.0;
  for (double t = 0.0; t <= 3.01; t += 0.25) {
    auto e = hyper_norm_estimate(m, t, p, 2.0, cfg.fast ? 30 : 120,
                                 cfg.seed + 17);
    monotone_defect = std::max(monotone_defect, e.estimate - prev);
    prev = e.estimate;
    if (tstar < 0.0 && e.estimate <= 1.0) tstar = t;
  }
  rep.expect("hypercontractivity", "empirical t* finite", tstar >= 0.0, tstar,
             "t* = " + std::to_string(tstar));
  rep.check("hypercontractivity", "estimate non-increasing in t",
            std::max(0.0, monotone_defect), 1e-6);
  (void)rng;
  return rep;
}

Report suite_phi4(const SuiteConfig& cfg) {
  Report rep;

  {  // FFT vs brute force, cutoffs <= 4
    double worst = 0.0;
    for (double theta : {0.1, 0.25})
      for (double t : {1.0, 2.0, 3.0, 4.0}) {
        LatticeSpec spec;
        spec.theta = theta;
        spec.mode_box = 8;
        double f = quad_zero_sum_fft(spec, t);
        double b = quad_zero_sum_brute(spec, t);
        worst = std::max(worst, std::abs(f - b) / std::max(1e-300, b));
      }
    rep.check("phi4", "FFT vs brute-force quadruple sum (rel)", worst, 1e-10);
  }

  {  // C_t growth exponent over t in [8, 128] (dyadic-increment estimator,
     // which removes the additive-constant bias of the raw fit)
    for (double theta : {0.1, 0.25}) {
      LatticeSpec spec;
      spec.theta = theta;
      spec.mode_box = 140;
      std::vector<double> ts = {8, 16, 32, 64, 128};
      double slope = covariance_growth_exponent(spec, ts);
      rep.check("phi4",
                "C_t exponent |slope - 2 theta|, theta=" +
                    std::to_string(theta),
                std::abs(slope - 2.0 * theta), 0.1);
      std::vector<double> cs;
      for (double t : ts) cs.push_back(covariance_sum(spec, t));
      rep.record("phi4", "C_t raw loglog slope, theta=" + std::to_string(theta),
                 loglog_slope(ts, cs), "biased by the additive constant");
      rep.check("phi4", "C_t monotone, theta=" + std::to_string(theta),
                std::max(0.0, cs[0] - cs[1]), 0.0);
    }
  }

  {  // difference-norm decay slope for theta = 0.1
    LatticeSpec spec;
    spec.theta = 0.1;
    spec.mode_box = 140;
    double top = quad_zero_sum_fft(spec, 128.0);
    std::vector<double> ss = {8, 12, 16, 24, 32, 48, 64}, diffs;
    for (double s : ss)
      diffs.push_back(top - quad_zero_sum_fft(spec, s));
    double slope = loglog_slope(ss, diffs);
    rep.expect("phi4", "difference decay slope <= -1.0 (theta=0.1)",
               slope <= -1.0, slope, "pilot-derived threshold");
    // positivity of the sums
    double minval = 1e300;
    for (double d : diffs) minval = std::min(minval, d);
    rep.expect("phi4", "lattice sums nonnegative", minval >= 0.0, minval);
  }

  {  // partition-function series
    LatticeSpec spec;
    spec.theta = 0.1;
    spec.mode_box = 140;
    bool all_conv = true;
    std::vector<double> lams = {0.01, 0.02, 0.05, 0.1}, ratios;
    for (double lam : lams) {
      auto r = partition_series(spec, lam, 4.0);
      all_conv = all_conv && r.converged && r.hypothesis_ok;
      ratios.push_back(r.one_minus_omega / lam);
    }
    auto r0 = partition_series(spec, 0.0, 4.0);
    rep.check("phi4", "partition series at lambda = 0",
              std::abs(r0.sum - 1.0), 1e-15);
    rep.expect("phi4", "partition series converges for lambda in [0, 0.1]",
               all_conv, ratios.back());
    double cmax = *std::max_element(ratios.begin(), ratios.end());
    double cmin = *std::min_element(ratios.begin(), ratios.end());
    rep.expect("phi4", "|1 - omega(Z)| <= c |lambda| with stable c",
               cmax / cmin < 1.5, cmax / cmin,
               "c in [" + std::to_string(cmin) + ", " + std::to_string(cmax) +
                   "]");
  }
  return rep;
}

Report suite_appendix_b(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("appendix_b");
  QuasiFreeModel m = scalar_model(3, cfg.mu);
  int samples = cfg.fast ? 20 : 100;
  double weight_defect = 0.0, second_moment = 0.0, cor_b8 = 0.0;
  for (int i = 0; i < samples; ++i) {
    Mat a = rng.cgaussian_matrix(m.dim());
    Mat x = 0.5 * (a + Mat(a.adjoint()));
    SpectralLaw law = spectral_law(m, x);
    weight_defect = std::max(weight_defect, std::abs(law.total_weight() - 1.0));
    // Eq. (B.2) model form: int y^2 mu(dy) = omega(x^2)
    Complex omega_x2 = m.state_product(x, x);
    second_moment = std::max(
        second_moment, std::abs(law.moment(2.0) - omega_x2.real()) /
                           std::max(1.0, std::abs(omega_x2)));
    // Cor B.8 for n in {1, 2}
    for (int n : {1, 2}) {
      double lhs = law.abs_moment(2.0 * n);
      double rhs = std::pow(twisted_norm(m, x, 2.0 * n), 2.0 * n);
      cor_b8 = std::max(cor_b8, (lhs - rhs) / std::max(1.0, rhs));
    }
  }
  rep.check("appendix_b", "spectral-law weights sum to 1", weight_defect,
            1e-10);
  rep.check("appendix_b", "second-moment identity eq B.2", second_moment,
            1e-10);
  rep.check("appendix_b", "Cor B.8 moment inequality violations",
            std::max(0.0, cor_b8), 1e-12);
  return rep;
}

Report suite_martingale_norms(const SuiteConfig& cfg) {
  Report rep;
  Rng rng = Rng(cfg.seed).split("martingale_norms");

  {  // Q_sigma idempotency and refinement convergence on the GBM filtration
    GBMProcess gbm(make_gbm_spec(cfg, 4, 0));
    const Filtration& filt = gbm.filtration();
    std::vector<Mat> f;
    for (int j = 0; j < 4; ++j)
      f.push_back(adapted_random(filt, rng, j));
    std::vector<int> sigma = {0, 2, 4};
    auto q1 = q_sigma(filt, f, sigma);
    auto q2 = q_sigma(filt, q1, sigma);
    double idem = 0.0;
    for (int j = 0; j < 4; ++j)
      idem = std::max(idem, double((q1[j] - q2[j]).norm() /
                                   std::max(1.0, q1[j].norm())));
    rep.check("martingale_norms", "Q_sigma idempotency", idem, 1e-10);

    // fixed point on M_0-valued constants
    std::vector<Mat> c(4, adapted_random(filt, rng, 0));
    auto qc = q_sigma(filt, c, sigma);
    double fix = 0.0;
    for (int j = 0; j < 4; ++j)
      fix = std::max(fix, double((qc[j] - c[j]).norm()));
    rep.check("martingale_norms", "Q_sigma fixed point on M_0 constants", fix,
              1e-10);

    // refinement convergence reported
    auto dist = [&](const std::vector<Mat>& a) {
      double acc = 0.0;
      for (int j = 0; j < 4; ++j) acc += (a[j] - f[j]).squaredNorm();
      return std::sqrt(acc);
    };
    double d_coarse = dist(q_sigma(filt, f, {0, 4}));
    double d_mid = dist(q_sigma(filt, f, {0, 2, 4}));
    double d_fine = dist(q_sigma(filt, f, {0, 1, 2, 3, 4}));
    rep.record("martingale_norms", "Q_sigma refinement convergence", d_fine,
               "coarse/mid/fine = " + std::to_string(d_coarse) + "/" +
                   std::to_string(d_mid) + "/" + std::to_string(d_fine) +
                   (d_fine <= d_mid && d_mid <= d_coarse ? " (monotone)"
                                                         : " (non-monotone)"));
  }

  {  // Burkholder and Stein ratios across d = 2, 3, 4
    double p = 3.0;
    std::vector<double> burk_ratios, stein_ratios;
    for (int d : {2, 3, 4}) {
      QuasiFreeModel m = scalar_model(d, cfg.mu);
      std::vector<double> times, dummy;
      std::vector<int> kept;
      for (int j = 0; j <= d; ++j) {
        times.push_back(j);
        kept.push_back(j);
      }
      Filtration filt(m, times, kept);
      double worst_burk = 0.0, worst_stein = 0.0;
      int samples = cfg.fast ? 3 : 8;
      for (int i = 0; i < samples; ++i) {
        Mat xt = rng.cgaussian_matrix(m.dim());
        MartingaleSequence seq = martingale_from_terminal(filt, xt, p);
        std::vector<Mat> diffs;
        for (int j = 0; j < filt.levels(); ++j) {
          Mat prev = (j == 0) ? Mat::Zero(m.dim(), m.dim()) : seq.values[j - 1];
          diffs.push_back((seq.values[j] - prev) * m.w_power(1.0 / p));
        }
        HardyNorms h = hardy_norms(filt, diffs, p);
        double xnorm = schatten_norm(Mat(xt * m.w_power(1.0 / p)), p);
        double hnorm = std::max({h.hc, h.hr, h.hd});
        if (hnorm > 1e-12)
          worst_burk = std::max(worst_burk, xnorm / hnorm);
        // Stein: Q(x)_n = omega_n(x_n) on a random L^p sequence
        std::vector<Mat> xs, qxs;
        for (int j = 0; j < filt.levels(); ++j) {
          Mat r = rng.cgaussian_matrix(m.dim()) * m.w_power(1.0 / p);
          xs.push_back(r);
          qxs.push_back(filt.cond_exp_lp(r, j, p, 0.0));
        }
        HardyNorms hx = hardy_norms(filt, xs, p, false);
        HardyNorms hq = hardy_norms(filt, qxs, p, false);
        if (hx.Hc > 1e-12)
          worst_stein = std::max(worst_stein, hq.Hc / hx.Hc);
      }
      burk_ratios.push_back(worst_burk);
      stein_ratios.push_back(worst_stein);
    }
    auto spread = [](const std::vector<double>& v) {
      double lo = *std::min_element(v.begin(), v.end());
      double hi = *std::max_element(v.begin(), v.end());
      return hi / std::max(lo, 1e-12);
    };
    bool finite = true;
    for (double v : burk_ratios) finite = finite && std::isfinite(v);
    for (double v : stein_ratios) finite = finite && std::isfinite(v);
    rep.expect("martingale_norms",
               "Burkholder ratios finite, stable within factor 3",
               finite && spread(burk_ratios) < 3.0, spread(burk_ratios),
               "ratios " + std::to_string(burk_ratios[0]) + ", " +
                   std::to_string(burk_ratios[1]) + ", " +
                   std::to_string(burk_ratios[2]));
    rep.expect("martingale_norms",
               "Stein ratios finite, stable within factor 3",
               finite && spread(stein_ratios) < 3.0, spread(stein_ratios),
               "ratios " + std::to_string(stein_ratios[0]) + ", " +
                   std::to_string(stein_ratios[1]) + ", " +
                   std::to_string(stein_ratios[2]));
  }
  return rep;
}

std::vector<std::pair<std::string, SuiteFn>> all_suites() {
  return {
      {"car_quasifree", suite_car_quasifree},
      {"wick_modular", suite_wick_modular},
      {"twisted_lp", suite_twisted_lp},
      {"cond_exp", suite_cond_exp},
      {"gbm", suite_gbm},
      {"ito_isometry", suite_ito_isometry},
      {"ito_formula", suite_ito_formula},
      {"girsanov", suite_girsanov},
      {"sde", suite_sde},
      {"hypercontractivity", suite_hypercontractivity},
      {"phi4", suite_phi4},
      {"appendix_b", suite_appendix_b},
      {"martingale_norms", suite_martingale_norms},
  };
}

CsvTable phi4_scan(double theta, double tau, const std::vector<double>& s,
                   const std::vector<double>& t, int mode_box) {
  CsvTable table({"theta", "tau", "s", "t", "value"});
  LatticeSpec spec;
  spec.theta = theta;
  spec.mode_box = mode_box;
  for (double sv : s)
    for (double tv : t) {
      if (sv > tv) continue;
      table.add_row({theta, tau, sv, tv, v_l2_difference(spec, sv, tv)});
    }
  return table;
}

CsvTable ito_residual_scan(const SuiteConfig& cfg,
                           const std::vector<int>& grids) {
  CsvTable table({"n_t", "delta", "residual", "ratio"});
  std::map<int, double> by_grid;
  for (int nt : grids) {
    GBMProcess gbm(make_gbm_spec(cfg, nt, 0));
    GridNoise noise(gbm);
    Eigen::Index dim = gbm.model().dim();
    int nd = noise.dirs();
    auto make_driftless = [&](const Vec& u) {
      std::vector<std::vector<Mat>> h(nt, std::vector<Mat>(nd));
      for (int j = 0; j < nt; ++j)
        for (int a = 0; a < nd; ++a)
          h[j][a] = Complex(noise.dir(a).dot(u)) * Mat::Identity(dim, dim);
      return ItoProcess(noise, Mat::Zero(dim, dim), h, {}, 0);
    };
    ItoProcess y0 = make_driftless(noise.dir(0));
    ItoProcess y1 = make_driftless(noise.dir(1));
    GrassmannPolynomial f = GrassmannPolynomial::anti_monomial(2, 0, 3u);
    double res = ito_formula_residual(noise, f, {y0, y1}, {}).residual;
    by_grid[nt] = res;
    // ratio column is residual(delta/2)/residual(delta) where the halved
    // grid is part of the family, 0 otherwise
    double ratio = 0.0;
    if (nt % 2 == 0 && by_grid.count(nt / 2))
      ratio = res / by_grid[nt / 2];
    table.add_row({double(nt), cfg.gbm_T / nt, res, ratio});
  }
  return table;
}

std::string girsanov_report_json(const SuiteConfig& cfg,
                                 const std::vector<int>& grids) {
  nlohmann::json out = nlohmann::json::array();
  double prev = -1.0;
  for (int nt : grids) {
    SuiteConfig c = cfg;
    c.fast = true;
    GBMProcess gbm(make_gbm_spec(c, nt, 1));
    GridNoise noise(gbm);
    int nd = noise.dirs();
    Mat theta0 = gbm.reserved_generator(0);
    std::vector<std::vector<Mat>> hvals(nt, std::vector<Mat>(nd));
    for (int j = 0; j < nt; ++j)
      for (int a = 0; a < nd; ++a)
        hvals[j][a] =
            0.3 * Complex(noise.dir(0).dot(noise.dir(a))) * theta0;
    AdaptedSimpleProcess h(gbm, hvals, 1);
    GirsanovShift gs = girsanov_shift(noise, h);
    Mat bt = shifted_field(noise, gs, nt, noise.dir(0));
    Mat bs = shifted_field(noise, gs, nt, noise.dir(1));
    Complex lhs = gs.se.expect(Mat(bt * bs));
    Complex rhs = matching_moment(gbm, {{cfg.gbm_T, noise.dir(0)},
                                        {cfg.gbm_T, noise.dir(1)}});
    double res = std::abs(lhs - rhs);
    out.push_back({{"test", "two-point moment"},
                   {"grid", nt},
                   {"residual", res},
                   {"ratio", prev > 0.0 ? res / prev : 0.0}});
    prev = res;
  }
  return out.dump(2);
}

std::string sde_report_json(const SuiteConfig& cfg,
                            const std::vector<int>& grids) {
  nlohmann::json out = nlohmann::json::array();
  for (int nt : grids) {
    GBMProcess gbm(make_gbm_spec(cfg, nt, 1));
    GridNoise noise(gbm);
    int nd = noise.dirs();
    Mat theta0 = gbm.reserved_generator(0);
    std::vector<std::vector<Mat>> xpath(nt + 1, std::vector<Mat>(nd));
    for (int mm = 0; mm <= nt; ++mm)
      for (int a = 0; a < nd; ++a) xpath[mm][a] = Mat(noise.field(mm, a));
    std::vector<Mat> psi0(nd, Mat(0.5 * theta0));
    Mat amat = 0.4 * Mat::Identity(gbm.h_dim(), gbm.h_dim());
    auto sol = sde_strong_solve(noise, linear_drift(noise, amat), psi0, xpath,
                                1e-12, nt + 3);
    out.push_back({{"test", "linear SDE"},
                   {"grid", nt},
                   {"residual", sol.residual},
                   {"iterations", sol.iterations}});
  }
  return out.dump(2);
}

CsvTable norms_table(const SuiteConfig& cfg) {
  CsvTable table({"d", "p", "norm_identity", "norm_random"});
  Rng rng = Rng(cfg.seed).split("norms_table");
  for (int d : {1, 2, 3}) {
    QuasiFreeModel m = scalar_model(d, cfg.mu);
    Mat x = rng.cgaussian_matrix(m.dim());
    for (double p : {1.0, 2.0, 4.0}) {
      table.add_row({double(d), p,
                     twisted_norm(m, Mat::Identity(m.dim(), m.dim()), p),
                     twisted_norm(m, x, p)});
    }
  }
  return table;
}

}  // namespace ncpg

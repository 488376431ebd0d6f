#ifndef NCPG_GBM_HPP
#define NCPG_GBM_HPP

#include <memory>
#include <vector>

#include "ncpg/filtration.hpp"

namespace ncpg {

// Grassmann Brownian motion on a uniform grid, built inside a scalar-rho
// quasi-free model over H = reserved modes (+) (time cells x h). The index
// space h = h~ (+) h~ carries the swap conjugation Theta, U = 1 (+) -1 and
// a positive C commuting with both, so G = C^2 U has antisymmetric bilinear
// form (f, g) -> <Theta f, G g>.
struct GBMSpec {
  double mu = 0.5;
  int n_t = 4;
  double T = 1.0;
  int h_dim = 2;
  int n_reserved = 0;
  Mat C;  // defaults to identity when empty

  double dt() const { return T / n_t; }
};

class GBMProcess {
 public:
  explicit GBMProcess(const GBMSpec& spec,
                      int mode_cap = FockBasis::kDefaultModeCap);

  const GBMSpec& spec() const { return spec_; }
  const QuasiFreeModel& model() const { return *model_; }
  const Filtration& filtration() const { return *filt_; }
  int n_t() const { return spec_.n_t; }
  int h_dim() const { return spec_.h_dim; }
  double dt() const { return spec_.dt(); }

  // h-level structure.
  Vec theta_h(const Vec& f) const;          // swap conjugation on h
  Mat u_matrix() const;                     // 1 (+) -1
  Mat g_matrix() const;                     // G = C^2 U
  Mat c_matrix() const;                     // C
  Mat abs_g_matrix() const;                 // |G| = C^2
  Vec gbar(const Vec& f) const;             // G* Theta f (antilinear)
  Complex covariance(const Vec& f, const Vec& g, double st) const;

  // Discretized embeddings E_m f, E~_m f in H (grid index m = 0..n_t).
  Vec embed(int m, const Vec& f) const;
  Vec embed_tilde(int m, const Vec& f) const;

  // X_m(f) = gamma_dag(E_m f) - gamma(E~_m f); linear in f, odd parity.
  SpMat field_sparse(int m, const Vec& f) const;
  Mat field(int m, const Vec& f) const { return Mat(field_sparse(m, f)); }
  SpMat increment_sparse(int m_lo, int m_hi, const Vec& f) const;
  Mat increment(int m_lo, int m_hi, const Vec& f) const {
    return Mat(increment_sparse(m_lo, m_hi, f));
  }

  // K-argument of X_m(f) = beta(mu E_m f (+) -mu^{-1} Theta_H E~_m f).
  Vec field_k_argument(int m, const Vec& f) const;

  // Reserved odd generator theta_j = gamma_dag(e_r) + gamma(e_r).
  Mat reserved_generator(int j) const;

  int grid_index(double t) const;  // exact grid times only

 private:
  GBMSpec spec_;
  double kappa_;  // (mu^{-2} - mu^2)^{-1}
  std::unique_ptr<QuasiFreeModel> model_;
  std::unique_ptr<Filtration> filt_;
};

// Orthonormal real basis of h with respect to the swap conjugation:
// (e_j (+) e_j)/sqrt(2) and (i e_j (+) -i e_j)/sqrt(2).
std::vector<Vec> real_theta_basis(int h_dim);

struct CovarianceReportRow {
  double r, rp;
  Complex c, cprime;
};

// Tabulates the modular-shifted two-point constants of Lemma 3.18:
// omega([X_t(f)]_r [X_s(g)]_{r'}) = c_{r,r'} (s^t) <Theta f, G g>,
// omega([X_t*(f)]_r [X_s(g)]_{r'}) = c'_{r,r'} (s^t) <f, C^2 g>.
std::vector<CovarianceReportRow> gbm_covariance_report(
    const GBMProcess& gbm, const std::vector<double>& r_grid);

}  // namespace ncpg

#endif

#ifndef NCPG_LP_SPACES_HPP
#define NCPG_LP_SPACES_HPP

#include <optional>
#include <vector>

#include "ncpg/araki_wyss.hpp"

namespace ncpg {

// Haagerup L^p data collapse to weighted Schatten norms at type I: an
// algebra element x embeds as the representative x W^{1/p}, Haagerup's
// trace is the matrix trace, and the twisted embeddings are the
// two-sided sandwiches T_tau^{(p)}(x) = W^{1/2p + tau} x W^{1/2p - tau}.

double tau_range(double p);  // 1 - 1/(2p); p = inf gives 1

Mat twisted_embed(const QuasiFreeModel& model, const Mat& x, double p,
                  double tau);

struct TwistedNormResult {
  double value = 0.0;
  double interior_max = 0.0;  // max over the interior tau grid
  bool endpoint_guard_ok = true;
};

// sup_{|tau| <= 1 - 1/2p} ||T_tau^{(p)}(x)||_p evaluated at the endpoints,
// with a 9-point interior grid guard (log-convexity makes the endpoints
// the maximum; the guard is tested, not assumed).
TwistedNormResult twisted_norm_detail(const QuasiFreeModel& model,
                                      const Mat& x, double p,
                                      double guard_tol = 1e-9);
double twisted_norm(const QuasiFreeModel& model, const Mat& x, double p);

// Schatten norm of an L^p representative (a = x W^{1/p} by convention).
double haagerup_norm(const Mat& a, double p);

class TwistedElement {
 public:
  TwistedElement(const QuasiFreeModel& model, Mat x, double p);

  const Mat& matrix() const { return x_; }
  double exponent() const { return p_; }
  double norm() const;

  // x.y in L^r, 1/r = 1/p + 1/q; requires 1/p + 1/q <= 1.
  TwistedElement product(const TwistedElement& other) const;

  const QuasiFreeModel& model() const { return *model_; }

 private:
  const QuasiFreeModel* model_;
  Mat x_;
  double p_;
  mutable std::optional<double> norm_cache_;
};

// omega extended to twisted elements; |omega(x)| <= ||x||_{L^1}.
Complex expectation_extend(const TwistedElement& x);

struct SpectralLaw {
  std::vector<std::pair<double, double>> atoms;  // (value, weight)

  double moment(double power) const;
  double abs_moment(double power) const;
  double total_weight() const;
};

// Law of a self-adjoint x under omega: eigenvalues weighted by <v, W v>.
SpectralLaw spectral_law(const QuasiFreeModel& model, const Mat& x,
                         double cluster_tol = 1e-10);

}  // namespace ncpg

#endif

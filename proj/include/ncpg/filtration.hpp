#ifndef NCPG_FILTRATION_HPP
#define NCPG_FILTRATION_HPP

#include <vector>

#include "ncpg/lp_spaces.hpp"

namespace ncpg {

// Filtered modular space over a time grid. Level j keeps the first
// kept_modes[j] Fock modes (Jordan-Wigner order is chosen so that every
// M_{t_j} is a full matrix algebra on the low-mode factor tensor identity).
// The state-preserving conditional expectation onto such a factor of a
// product density is the weighted partial trace over the complementary
// modes; it coincides with Wick-coefficient truncation onto the monomials
// supported in the kept legs (cond_exp_wick below, used as cross-check).
class Filtration {
 public:
  Filtration(const QuasiFreeModel& model, std::vector<double> times,
             std::vector<int> kept_modes);

  const QuasiFreeModel& model() const { return *model_; }
  int levels() const { return static_cast<int>(times_.size()); }
  double time(int j) const { return times_.at(j); }
  int kept(int j) const { return kept_modes_.at(j); }
  const std::vector<double>& times() const { return times_; }

  // omega_j: weighted partial trace over modes >= kept(j).
  Mat cond_exp(const Mat& x, int level) const;

  // Reference implementation by Wick-coefficient truncation (small d only).
  Mat cond_exp_wick(const Mat& x, int level) const;

  // omega_j^{(p)} acting on an L^p representative a = W^{1/2p+tau} x
  // W^{1/2p-tau}; the result does not depend on tau (tested).
  Mat cond_exp_lp(const Mat& a, int level, double p, double tau) const;

  bool is_level_element(const Mat& x, int level, double tol = 1e-10) const;

 private:
  const QuasiFreeModel* model_;
  std::vector<double> times_;
  std::vector<int> kept_modes_;
};

struct HardyNorms {
  double Hc = 0.0;
  double Hr = 0.0;
  double hc = 0.0;
  double hr = 0.0;
  double hd = 0.0;
};

// Hardy norms of a difference sequence given by L^p representatives,
// indexed by filtration level; omega_{-1} := omega_0. The conditioned
// norms require p >= 2.
HardyNorms hardy_norms(const Filtration& filt, const std::vector<Mat>& diffs,
                       double p, bool conditioned = true);

// Piecewise process on the filtration grid: values[j] on [t_j, t_{j+1}).
// Q_sigma averages conditional expectations over the cells of a coarser
// subdivision sigma (indices into the fine grid, starting at 0).
std::vector<Mat> q_sigma(const Filtration& filt,
                         const std::vector<Mat>& values,
                         const std::vector<int>& sigma);

struct MartingaleSequence {
  std::vector<Mat> values;
  double p = 2.0;
};

MartingaleSequence martingale_from_terminal(const Filtration& filt,
                                            const Mat& x_terminal, double p);

}  // namespace ncpg

#endif

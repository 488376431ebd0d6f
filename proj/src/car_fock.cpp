#include "ncpg/car_fock.hpp"

#include <bit>

namespace ncpg {

namespace {

inline int jw_sign(std::uint64_t mask, int mode) {
  std::uint64_t below = mask & ((std::uint64_t{1} << mode) - 1);
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

FockBasis::FockBasis(int modes, int mode_cap) : m_(modes) {
  if (modes < 0) throw InvalidInput("FockBasis: negative mode count");
  if (modes > mode_cap)
    throw ResourceError("FockBasis: mode count exceeds dense cap");
  dim_ = Eigen::Index{1} << modes;
}

SpMat FockBasis::mode_annihilator(int i) const {
  if (i < 0 || i >= m_) throw InvalidInput("mode_annihilator: bad index");
  SpMat a(dim_, dim_);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(dim_ / 2);
  std::uint64_t bit = std::uint64_t{1} << i;
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim_); ++s) {
    if (s & bit) {
      // a_i |s> = sign |s without i>
      trip.emplace_back(static_cast<Eigen::Index>(s ^ bit),
                        static_cast<Eigen::Index>(s),
                        Complex(jw_sign(s, i), 0.0));
    }
  }
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SpMat FockBasis::annihilator(const Vec& f) const {
  if (f.size() != m_) throw InvalidInput("annihilator: length mismatch");
  SpMat a(dim_, dim_);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int i = 0; i < m_; ++i) {
    if (f(i) == Complex(0.0, 0.0)) continue;
    std::uint64_t bit = std::uint64_t{1} << i;
    Complex c = std::conj(f(i));
    for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim_); ++s) {
      if (s & bit)
        trip.emplace_back(static_cast<Eigen::Index>(s ^ bit),
                          static_cast<Eigen::Index>(s),
                          c * double(jw_sign(s, i)));
    }
  }
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

SpMat FockBasis::creator(const Vec& f) const {
  return SpMat(annihilator(f).adjoint());
}

Mat FockBasis::annihilator_dense(const Vec& f) const {
  return Mat(annihilator(f));
}

Mat FockBasis::creator_dense(const Vec& f) const { return Mat(creator(f)); }

Vec FockBasis::wedge_vector(const std::vector<Vec>& fs) const {
  if (static_cast<int>(fs.size()) > m_)
    throw InvalidInput("wedge_vector: more vectors than modes");
  Vec v = Vec::Zero(dim_);
  v(0) = 1.0;  // vacuum
  for (auto it = fs.rbegin(); it != fs.rend(); ++it) v = creator(*it) * v;
  return v;
}

Mat FockBasis::second_quantization(const Mat& b) const {
  if (b.rows() != m_ || b.cols() != m_)
    throw InvalidInput("second_quantization: shape mismatch");
  if (!is_finite(b)) throw InvalidInput("second_quantization: non-finite");
  // Build columns by applying B to each occupied-mode wedge.
  Mat g = Mat::Zero(dim_, dim_);
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim_); ++s) {
    std::vector<Vec> cols;
    for (int i = 0; i < m_; ++i)
      if (s & (std::uint64_t{1} << i)) cols.push_back(b.col(i));
    g.col(static_cast<Eigen::Index>(s)) = wedge_vector(cols);
  }
  return g;
}

Mat FockBasis::number_operator() const {
  Mat n = Mat::Zero(dim_, dim_);
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim_); ++s)
    n(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) =
        double(std::popcount(s));
  return n;
}

Mat FockBasis::parity_operator() const {
  Mat p = Mat::Zero(dim_, dim_);
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(dim_); ++s)
    p(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) =
        (std::popcount(s) & 1) ? -1.0 : 1.0;
  return p;
}

int FockBasis::parity_grade(const Mat& x, double tol) const {
  double scale = x.norm();
  if (scale == 0.0) return 0;
  double even_defect = 0.0, odd_defect = 0.0;
  for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(dim_); ++r) {
    int pr = std::popcount(r) & 1;
    for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(dim_); ++c) {
      int pc = std::popcount(c) & 1;
      double a2 = std::norm(x(static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(c)));
      if (pr == pc)
        odd_defect += a2;  // even blocks contradict oddness
      else
        even_defect += a2;
    }
  }
  bool even_ok = std::sqrt(even_defect) <= tol * scale;
  bool odd_ok = std::sqrt(odd_defect) <= tol * scale;
  if (even_ok && !odd_ok) return 0;
  if (odd_ok && !even_ok) return 1;
  if (even_ok && odd_ok) return 0;  // zero operator
  return -1;
}

}  // namespace ncpg

#ifndef NCPG_COMMON_HPP
#define NCPG_COMMON_HPP

#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ncpg {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPInf = std::numeric_limits<double>::infinity();

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct AdaptednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NovikovError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvertibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AliasingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All randomness flows from one seed, split per named task so suites stay
// deterministic regardless of execution order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  Rng split(const std::string& task) const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : task) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= seed_ + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return Rng(h);
  }

  double uniform(double a = 0.0, double b = 1.0) {
    return std::uniform_real_distribution<double>(a, b)(gen_);
  }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  Complex cgaussian() { return {gaussian(), gaussian()}; }
  std::uint64_t integer(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
  }

  Vec cgaussian_vector(Eigen::Index n) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }
  Mat cgaussian_matrix(Eigen::Index n) {
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cgaussian();
    return m;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace ncpg

#endif

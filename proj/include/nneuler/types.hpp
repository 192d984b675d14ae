#ifndef NNEULER_TYPES_HPP
#define NNEULER_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nneuler {

// Largest state dimension handled by the library. States and coefficient
// matrices live on the stack up to this size.
inline constexpr int kMaxDim = 4;

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

template <typename Scalar>
using StateMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using Vec = StateVector<double>;
using Mat = StateMatrix<double>;

/// A point outside the state space, or an argument outside an operation's
/// domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A parameter combination that violates the nonnegativity window, or an
/// increment law that cannot be built with the requested moments.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite payoff, failed quadrature, and similar numerical breakdowns.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or incomplete experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Vec scalar_vec(double v) {
  Vec out(1);
  out(0) = v;
  return out;
}

}  // namespace nneuler

#endif  // NNEULER_TYPES_HPP

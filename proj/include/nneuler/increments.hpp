#ifndef NNEULER_INCREMENTS_HPP
#define NNEULER_INCREMENTS_HPP

#include "nneuler/rng.hpp"
#include "nneuler/types.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace nneuler {

/// Nonnegative law with atoms {0, mu + 1/mu}, P(0) = 1/(1 + mu^2).
/// Mean mu, variance 1.
struct TwoPointLaw {
  double mu = 1.0;
  double p_zero = 0.5;
  double v = 2.0;  // the nonzero atom
};

/// Joint law on {0, v1} x {0, v2} with TwoPointLaw marginals and a prescribed
/// correlation. Cell pij is P(eps1 = i*v1, eps2 = j*v2).
struct BivariateTwoPointLaw {
  TwoPointLaw first;
  TwoPointLaw second;
  double rho = 0.0;
  double p00 = 0.25, p01 = 0.25, p10 = 0.25, p11 = 0.25;
};

/// Standard normal vector with identity covariance.
struct GaussianLaw {
  int dimension = 1;
};

/// Pair (eps1, rho*eps1 + sqrt(1-rho^2)*eps3) with eps1 two-point and eps3
/// an independent unit-variance scalar law.
struct LinearMixLaw {
  double rho = 0.0;
  TwoPointLaw base1;
  std::variant<TwoPointLaw, GaussianLaw> base3;
};

using IncrementLaw =
    std::variant<TwoPointLaw, BivariateTwoPointLaw, LinearMixLaw, GaussianLaw>;

struct CorrelationInterval {
  double lower;
  double upper;
};

/// Exact first and second moments of a law.
struct MomentReport {
  Vec mean;
  Mat covariance;
  std::vector<bool> support_nonnegative;
};

/// One support point of a finite-support law.
struct Atom {
  double probability;
  Vec value;
};

TwoPointLaw make_two_point(double mu);

/// Correlations reachable by a joint pmf with TwoPointLaw(mu1), TwoPointLaw(mu2)
/// marginals.
CorrelationInterval two_point_correlation_interval(double mu1, double mu2);

/// Throws InfeasibleError when rho is outside the reachable interval; in
/// particular whenever -rho > mu1*mu2.
BivariateTwoPointLaw make_bivariate_two_point(double mu1, double mu2,
                                              double rho);

LinearMixLaw make_linear_mix(double rho, double mu1, double mu3);
LinearMixLaw make_linear_mix(double rho, TwoPointLaw base1,
                             std::variant<TwoPointLaw, GaussianLaw> base3);

int dimension(const IncrementLaw& law);
Vec mean(const IncrementLaw& law);
bool has_finite_support(const IncrementLaw& law);

/// Support points with probabilities; empty for continuous laws.
std::vector<Atom> atoms(const IncrementLaw& law);

MomentReport verify_moments(const IncrementLaw& law);

/// One draw.
Vec draw(const IncrementLaw& law, SeededStream& stream);

/// `count` i.i.d. draws as the columns of a dimension x count matrix.
Eigen::MatrixXd sample(const IncrementLaw& law, SeededStream& stream,
                       std::size_t count);

}  // namespace nneuler

#endif  // NNEULER_INCREMENTS_HPP

#ifndef NNEULER_ANALYTIC_HPP
#define NNEULER_ANALYTIC_HPP

#include "nneuler/models.hpp"

namespace nneuler {

/// Zero-coupon bond under CIR short rate: face * phi(T) * exp(-psi(T) x0)
/// with gamma = sqrt(kappa^2 + 2 nu^2).
double cir_bond_price(double kappa, double beta, double nu, double x0,
                      double maturity, double face);

/// Adaptive Gauss-Kronrod on [0, upper] for the Fourier inversion integrals.
struct QuadratureConfig {
  double upper = 200.0;
  double tolerance = 1e-10;
  unsigned max_depth = 20;
};

/// Heston European call via the two-probability characteristic-function
/// representation, using the rotation-count-free ("little trap") form of the
/// characteristic function. Throws NumericalError if either integral fails
/// to meet the tolerance.
double heston_call_price(const HestonParams& p, double strike, double maturity,
                         const QuadratureConfig& quad = {});
double heston_put_price(const HestonParams& p, double strike, double maturity,
                        const QuadratureConfig& quad = {});

/// Standard normal CDF, 0.5 * erfc(-x / sqrt 2).
double normal_cdf(double x);

double black_scholes_call(double s0, double strike, double rate, double sigma,
                          double maturity);
double black_scholes_put(double s0, double strike, double rate, double sigma,
                         double maturity);

}  // namespace nneuler

#endif  // NNEULER_ANALYTIC_HPP

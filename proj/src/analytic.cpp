#include "nneuler/analytic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>

namespace nneuler {

namespace {

using cd = std::complex<double>;

// log(1 + z) / z, accurate for small |z|.
cd log1p_ratio(cd z) {
  if (std::abs(z) < 1e-5) return 1.0 - z / 2.0 + z * z / 3.0;
  return std::log(1.0 + z) / z;
}

// Characteristic function of log S_T under Heston, evaluated at complex w.
// This branch choice keeps log((1 - g e^{-dT}) / (1 - g)) continuous.
// (a - d) / nu^2 is rewritten as -(iw + w^2) / (a + d) so that small nu does
// not cancel.
cd heston_cf(const HestonParams& p, double maturity, cd w) {
  const cd i(0.0, 1.0);
  const cd iw = i * w;
  const double nu2 = p.nu * p.nu;
  const cd a = p.kappa - p.rho * p.nu * iw;
  const cd d = std::sqrt(a * a + nu2 * (iw + w * w));
  const cd q = -(iw + w * w) / (a + d);  // (a - d) / nu^2
  const cd g = nu2 * q / (a + d);
  const cd e = std::exp(-d * maturity);
  // log((1 - g e) / (1 - g)) / nu^2 = log1p(z) / nu^2, z = g (1 - e) / (1 - g)
  const cd z_over_nu2 = q * (1.0 - e) / ((a + d) * (1.0 - g));
  const cd log_term = log1p_ratio(nu2 * z_over_nu2) * z_over_nu2;
  const cd c = p.r * iw * maturity +
               p.kappa * p.beta * (q * maturity - 2.0 * log_term);
  const cd dd = q * (1.0 - e) / (1.0 - g * e);
  return std::exp(c + dd * p.v0 + iw * std::log(p.s0));
}

double integrate_checked(const std::function<double(double)>& f,
                         const QuadratureConfig& quad) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, quad.upper, quad.max_depth, quad.tolerance, &error, &l1);
  if (!std::isfinite(value) || error > std::max(1e-6, quad.tolerance * 1e4) * std::max(1.0, l1)) {
    throw NumericalError("Heston Fourier integral did not converge");
  }
  return value;
}

}  // namespace

double cir_bond_price(double kappa, double beta, double nu, double x0,
                      double maturity, double face) {
  if (!(maturity >= 0.0)) throw DomainError("bond maturity must be >= 0");
  if (maturity == 0.0) return face;
  const double gamma = std::sqrt(kappa * kappa + 2.0 * nu * nu);
  const double em1 = std::expm1(gamma * maturity);
  const double den = (gamma + kappa) * em1 + 2.0 * gamma;
  const double phi = std::pow(
      2.0 * gamma * std::exp(0.5 * (gamma + kappa) * maturity) / den,
      2.0 * kappa * beta / (nu * nu));
  const double psi = 2.0 * em1 / den;
  return face * phi * std::exp(-psi * x0);
}

double heston_call_price(const HestonParams& p, double strike, double maturity,
                         const QuadratureConfig& quad) {
  if (!(strike > 0.0) || !(maturity > 0.0)) {
    throw DomainError("Heston call needs strike > 0 and maturity > 0");
  }
  const cd i(0.0, 1.0);
  const double log_k = std::log(strike);
  const double forward = p.s0 * std::exp(p.r * maturity);

  auto f1 = [&](double u) {
    if (u == 0.0) u = 1e-12;
    const cd num = std::exp(-i * u * log_k) * heston_cf(p, maturity, cd(u, -1.0));
    return std::real(num / (i * u * forward));
  };
  auto f2 = [&](double u) {
    if (u == 0.0) u = 1e-12;
    const cd num = std::exp(-i * u * log_k) * heston_cf(p, maturity, cd(u, 0.0));
    return std::real(num / (i * u));
  };

  const double p1 = 0.5 + integrate_checked(f1, quad) / M_PI;
  const double p2 = 0.5 + integrate_checked(f2, quad) / M_PI;
  return p.s0 * p1 - strike * std::exp(-p.r * maturity) * p2;
}

double heston_put_price(const HestonParams& p, double strike, double maturity,
                        const QuadratureConfig& quad) {
  return heston_call_price(p, strike, maturity, quad) - p.s0 +
         strike * std::exp(-p.r * maturity);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double black_scholes_call(double s0, double strike, double rate, double sigma,
                          double maturity) {
  if (!(sigma > 0.0) || !(maturity > 0.0)) {
    throw DomainError("Black-Scholes needs sigma > 0 and maturity > 0");
  }
  const double vol = sigma * std::sqrt(maturity);
  const double d1 =
      (std::log(s0 / strike) + (rate + 0.5 * sigma * sigma) * maturity) / vol;
  const double d2 = d1 - vol;
  return s0 * normal_cdf(d1) - strike * std::exp(-rate * maturity) * normal_cdf(d2);
}

double black_scholes_put(double s0, double strike, double rate, double sigma,
                         double maturity) {
  return black_scholes_call(s0, strike, rate, sigma, maturity) - s0 +
         strike * std::exp(-rate * maturity);
}

}  // namespace nneuler

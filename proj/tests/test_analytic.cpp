#include <doctest.h>

#include "nneuler/analytic.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

using namespace nneuler;

namespace {

// RK4 on the bond Riccati system B' = 1 - kappa B - nu^2 B^2 / 2,
// A' = -kappa beta B, price = face exp(A - B x0).
double riccati_bond(double kappa, double beta, double nu, double x0, double T, double face) {
  const int steps = 20000;
  const double h = T / steps;
  double a = 0.0, b = 0.0;
  auto fb = [&](double bb) { return 1.0 - kappa * bb - 0.5 * nu * nu * bb * bb; };
  for (int i = 0; i < steps; ++i) {
    const double k1 = fb(b), l1 = -kappa * beta * b;
    const double k2 = fb(b + 0.5 * h * k1), l2 = -kappa * beta * (b + 0.5 * h * k1);
    const double k3 = fb(b + 0.5 * h * k2), l3 = -kappa * beta * (b + 0.5 * h * k2);
    const double k4 = fb(b + h * k3), l4 = -kappa * beta * (b + h * k3);
    b += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    a += h / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
  }
  return face * std::exp(a - b * x0);
}

double bs_call_oracle(double s, double k, double r, double sig, double T) {
  const boost::math::normal_distribution<double> z;
  const double d1 = (std::log(s / k) + (r + 0.5 * sig * sig) * T) / (sig * std::sqrt(T));
  const double d2 = d1 - sig * std::sqrt(T);
  return s * boost::math::cdf(z, d1) - k * std::exp(-r * T) * boost::math::cdf(z, d2);
}

const HestonParams kHeston{2.0, 0.09, 1.0, 0.05, -0.3, 0.09, 100.0};

}  // namespace

TEST_SUITE("analytic") {

TEST_CASE("CIR bond reference values") {
  CHECK(std::abs(cir_bond_price(0.5, 0.04, 0.3, 0.04, 2.0, 1000.0) - 925.258) <= 0.001);
  CHECK(std::abs(cir_bond_price(0.5, 0.04, 1.0, 0.04, 2.0, 1000.0) - 940.024) <= 0.001);
  CHECK(cir_bond_price(0.5, 0.04, 0.3, 0.04, 0.0, 1000.0) == 1000.0);
}

TEST_CASE("CIR bond matches the Riccati ODE") {
  for (double nu : {0.1, 0.3, 1.0}) {
    for (double x0 : {0.0, 0.02, 0.1}) {
      for (double T : {0.5, 2.0, 7.0}) {
        CHECK(cir_bond_price(0.8, 0.05, nu, x0, T, 1.0) ==
              doctest::Approx(riccati_bond(0.8, 0.05, nu, x0, T, 1.0)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("CIR bond monotonicity") {
  double prev = 1.0;
  for (double T : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    const double p = cir_bond_price(0.5, 0.04, 0.3, 0.04, T, 1.0);
    CHECK(p < prev);
    prev = p;
  }
  CHECK(cir_bond_price(0.5, 0.04, 0.3, 0.02, 2.0, 1.0) >
        cir_bond_price(0.5, 0.04, 0.3, 0.06, 2.0, 1.0));
}

TEST_CASE("Heston call reference value") {
  CHECK(std::abs(heston_call_price(kHeston, 100.0, 5.0) - 34.9998) <= 0.001);
}

TEST_CASE("Heston parity and limits") {
  for (double K : {60.0, 100.0, 150.0}) {
    const double c = heston_call_price(kHeston, K, 5.0);
    const double p = heston_put_price(kHeston, K, 5.0);
    CHECK(c - p == doctest::Approx(100.0 - K * std::exp(-0.25)).epsilon(1e-9));
    CHECK(c >= std::max(100.0 - K * std::exp(-0.25), 0.0));
    CHECK(c <= 100.0);
  }
  // nearly deterministic variance pinned at its mean reduces to Black-Scholes
  const HestonParams flat{2.0, 0.09, 1e-4, 0.05, -0.3, 0.09, 100.0};
  CHECK(heston_call_price(flat, 100.0, 5.0) ==
        doctest::Approx(bs_call_oracle(100.0, 100.0, 0.05, 0.3, 5.0)).epsilon(1e-5));
  CHECK(heston_call_price(kHeston, 1e-6, 5.0) == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("Black-Scholes against an independent normal CDF") {
  CHECK(black_scholes_call(100, 100, 0.05, 0.3, 5) ==
        doctest::Approx(bs_call_oracle(100, 100, 0.05, 0.3, 5)).epsilon(1e-12));
  CHECK(black_scholes_call(100, 100, 0.05, 0.3, 5) == doctest::Approx(35.95781).epsilon(1e-7));
  for (double K : {50.0, 90.0, 130.0}) {
    for (double sig : {0.05, 0.4}) {
      const double c = black_scholes_call(100, K, 0.03, sig, 2);
      CHECK(c == doctest::Approx(bs_call_oracle(100, K, 0.03, sig, 2)).epsilon(1e-10));
      CHECK(c - black_scholes_put(100, K, 0.03, sig, 2) ==
            doctest::Approx(100 - K * std::exp(-0.06)).epsilon(1e-12));
    }
  }
  const boost::math::normal_distribution<double> z;
  for (double x : {-8.0, -1.5, 0.0, 0.3, 4.0}) {
    CHECK(normal_cdf(x) == doctest::Approx(boost::math::cdf(z, x)).epsilon(1e-14));
  }
}

}  // TEST_SUITE

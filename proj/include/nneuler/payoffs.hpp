#ifndef NNEULER_PAYOFFS_HPP
#define NNEULER_PAYOFFS_HPP

#include "nneuler/schemes.hpp"

#include <functional>
#include <optional>
#include <string_view>

namespace nneuler {

enum class PayoffKind {
  Bond,
  EuroCall,
  EuroPut,
  AsianCall,
  AsianPut,
  LookbackMax,
  UpAndOutCall,
  BinaryBelow,
  Custom
};

std::string_view to_string(PayoffKind kind);
std::optional<PayoffKind> parse_payoff(std::string_view text);

/// Time-integral rule. Trapezoid is exact on the linear interpolant,
/// LeftRiemann on the piecewise-constant one.
enum class IntegralRule { Trapezoid, LeftRiemann };

IntegralRule rule_for(InterpolationMode mode);

/// Whether the bound path coordinate is the asset price or its logarithm.
enum class PriceScale { Price, LogPrice };

struct Discounting {
  enum class Kind { None, ConstantRate, RateCoordinate };
  Kind kind = Kind::None;
  double rate = 0.0;  // ConstantRate
  int coord = 0;      // RateCoordinate; must be a nonnegative coordinate

  static Discounting none() { return {}; }
  static Discounting constant(double r) { return {Kind::ConstantRate, r, 0}; }
  static Discounting short_rate(int coord) {
    return {Kind::RateCoordinate, 0.0, coord};
  }
};

/// Discounted payoff g(x) of a path on [0, T].
struct PathFunctional {
  PayoffKind kind = PayoffKind::Bond;
  double horizon = 1.0;
  double face = 1.0;     // Bond
  double strike = 0.0;   // calls, puts
  double barrier = 0.0;  // UpAndOutCall, BinaryBelow
  int price_coord = 0;
  PriceScale scale = PriceScale::Price;
  Discounting discount;
  std::optional<IntegralRule> rule;  // default: rule_for(path mode)
  std::optional<double> cap;         // payoff truncation min(h, cap)
  std::function<double(const ContinuousPath&)> custom;

  bool bounded() const;
  /// Upper bound on |g| when bounded(), +inf otherwise.
  double bound() const;
};

PathFunctional bond_payoff(double face, double horizon, int rate_coord = 0);
PathFunctional european_call(double strike, double horizon, int price_coord,
                             PriceScale scale, Discounting discount);
PathFunctional european_put(double strike, double horizon, int price_coord,
                            PriceScale scale, Discounting discount);
PathFunctional asian_call(double strike, double horizon, int price_coord,
                          PriceScale scale, Discounting discount);
PathFunctional asian_put(double strike, double horizon, int price_coord,
                         PriceScale scale, Discounting discount);
PathFunctional lookback_max(double horizon, int price_coord, PriceScale scale,
                            Discounting discount);
PathFunctional up_and_out_call(double strike, double barrier, double horizon,
                               int price_coord, PriceScale scale,
                               Discounting discount);
PathFunctional binary_below(double barrier, double horizon, int price_coord,
                            PriceScale scale, Discounting discount);
PathFunctional custom_payoff(double horizon,
                             std::function<double(const ContinuousPath&)> fn);

/// \int_0^T g(x_coord(s)) ds by `rule` over the path's node values, with a
/// partial final segment when nT is not an integer. `exponentiate` applies
/// g = exp, otherwise g is the identity.
double integrate(const ContinuousPath& path, int coord, double horizon,
                 IntegralRule rule, bool exponentiate = false);

/// exp(-\int_0^T x_coord(s) ds).
double discount_factor(const ContinuousPath& path, double horizon,
                       IntegralRule rule, int coord = 0);

/// Maximum of the continuous path on [0, T] (attained at a node or at T).
double path_max(const ContinuousPath& path, int coord, double horizon);

double evaluate(const PathFunctional& g, const ContinuousPath& path);

/// Call price from put and zero-coupon prices:
/// s0 - K * bond_price_unit + put_price.
double put_call_parity_call(double put_price, double bond_price_unit, double s0,
                            double strike);

/// g with its undiscounted payoff replaced by min(h, cap).
PathFunctional truncate(PathFunctional g, double cap);

}  // namespace nneuler

#endif  // NNEULER_PAYOFFS_HPP

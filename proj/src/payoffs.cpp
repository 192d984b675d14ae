#include "nneuler/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nneuler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_discount(const PathFunctional& g) {
  switch (g.discount.kind) {
    case Discounting::Kind::ConstantRate:
      return std::exp(-g.discount.rate * g.horizon);
    case Discounting::Kind::RateCoordinate:
    case Discounting::Kind::None:
      return 1.0;
  }
  return 1.0;
}

PathFunctional priced(PayoffKind kind, double horizon, int coord,
                      PriceScale scale, Discounting discount) {
  PathFunctional g;
  g.kind = kind;
  g.horizon = horizon;
  g.price_coord = coord;
  g.scale = scale;
  g.discount = discount;
  return g;
}

double to_price(const PathFunctional& g, double x) {
  return g.scale == PriceScale::LogPrice ? std::exp(x) : x;
}

void check_coord(const ContinuousPath& path, int coord) {
  if (coord < 0 || coord >= path.dim()) {
    throw DomainError("payoff coordinate binding out of range");
  }
}

}  // namespace

std::string_view to_string(PayoffKind kind) {
  switch (kind) {
    case PayoffKind::Bond: return "bond";
    case PayoffKind::EuroCall: return "euro_call";
    case PayoffKind::EuroPut: return "euro_put";
    case PayoffKind::AsianCall: return "asian_call";
    case PayoffKind::AsianPut: return "asian_put";
    case PayoffKind::LookbackMax: return "lookback_max";
    case PayoffKind::UpAndOutCall: return "up_and_out_call";
    case PayoffKind::BinaryBelow: return "binary_below";
    case PayoffKind::Custom: return "custom";
  }
  return "unknown";
}

std::optional<PayoffKind> parse_payoff(std::string_view text) {
  for (auto k : {PayoffKind::Bond, PayoffKind::EuroCall, PayoffKind::EuroPut,
                 PayoffKind::AsianCall, PayoffKind::AsianPut,
                 PayoffKind::LookbackMax, PayoffKind::UpAndOutCall,
                 PayoffKind::BinaryBelow}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

IntegralRule rule_for(InterpolationMode mode) {
  return mode == InterpolationMode::Linear ? IntegralRule::Trapezoid
                                           : IntegralRule::LeftRiemann;
}

bool PathFunctional::bounded() const { return std::isfinite(bound()); }

double PathFunctional::bound() const {
  const double d = max_discount(*this);
  if (cap) return *cap * d;
  switch (kind) {
    case PayoffKind::Bond: return face * d;
    case PayoffKind::EuroPut:
    case PayoffKind::AsianPut: return strike * d;
    case PayoffKind::UpAndOutCall: return std::max(barrier - strike, 0.0) * d;
    case PayoffKind::BinaryBelow: return d;
    default: return kInf;
  }
}

PathFunctional bond_payoff(double face, double horizon, int rate_coord) {
  PathFunctional g;
  g.kind = PayoffKind::Bond;
  g.face = face;
  g.horizon = horizon;
  g.discount = Discounting::short_rate(rate_coord);
  return g;
}

PathFunctional european_call(double strike, double horizon, int price_coord,
                             PriceScale scale, Discounting discount) {
  auto g = priced(PayoffKind::EuroCall, horizon, price_coord, scale, discount);
  g.strike = strike;
  return g;
}

PathFunctional european_put(double strike, double horizon, int price_coord,
                            PriceScale scale, Discounting discount) {
  auto g = priced(PayoffKind::EuroPut, horizon, price_coord, scale, discount);
  g.strike = strike;
  return g;
}

PathFunctional asian_call(double strike, double horizon, int price_coord,
                          PriceScale scale, Discounting discount) {
  auto g = priced(PayoffKind::AsianCall, horizon, price_coord, scale, discount);
  g.strike = strike;
  return g;
}

PathFunctional asian_put(double strike, double horizon, int price_coord,
                         PriceScale scale, Discounting discount) {
  auto g = priced(PayoffKind::AsianPut, horizon, price_coord, scale, discount);
  g.strike = strike;
  return g;
}

PathFunctional lookback_max(double horizon, int price_coord, PriceScale scale,
                            Discounting discount) {
  return priced(PayoffKind::LookbackMax, horizon, price_coord, scale, discount);
}

PathFunctional up_and_out_call(double strike, double barrier, double horizon,
                               int price_coord, PriceScale scale,
                               Discounting discount) {
  auto g = priced(PayoffKind::UpAndOutCall, horizon, price_coord, scale, discount);
  g.strike = strike;
  g.barrier = barrier;
  return g;
}

PathFunctional binary_below(double barrier, double horizon, int price_coord,
                            PriceScale scale, Discounting discount) {
  auto g = priced(PayoffKind::BinaryBelow, horizon, price_coord, scale, discount);
  g.barrier = barrier;
  return g;
}

PathFunctional custom_payoff(double horizon,
                             std::function<double(const ContinuousPath&)> fn) {
  PathFunctional g;
  g.kind = PayoffKind::Custom;
  g.horizon = horizon;
  g.custom = std::move(fn);
  return g;
}

double integrate(const ContinuousPath& path, int coord, double horizon,
                 IntegralRule rule, bool exponentiate) {
  check_coord(path, coord);
  const int n = path.grid().n;
  const double h = 1.0 / n;
  auto g = [&](double v) { return exponentiate ? std::exp(v) : v; };
  const long full = static_cast<long>(std::floor(n * horizon * (1.0 + 1e-12)));
  const long full_in = std::min<long>(full, static_cast<long>(
                                                path.grid().values.cols() - 1));
  double sum = 0.0;
  double left = g(path.node(0, coord));
  for (long k = 0; k < full_in; ++k) {
    const double right = g(path.node(k + 1, coord));
    sum += rule == IntegralRule::Trapezoid ? 0.5 * h * (left + right) : h * left;
    left = right;
  }
  const double rest = horizon - double(full_in) * h;
  if (rest > 1e-15) {
    const double right = g(path.at(horizon, coord));
    sum += rule == IntegralRule::Trapezoid ? 0.5 * rest * (left + right)
                                           : rest * left;
  }
  return sum;
}

double discount_factor(const ContinuousPath& path, double horizon,
                       IntegralRule rule, int coord) {
  return std::exp(-integrate(path, coord, horizon, rule));
}

double path_max(const ContinuousPath& path, int coord, double horizon) {
  check_coord(path, coord);
  const int n = path.grid().n;
  const long full = static_cast<long>(std::floor(n * horizon * (1.0 + 1e-12)));
  double best = path.at(horizon, coord);
  const long last = std::min<long>(full, static_cast<long>(path.grid().values.cols() - 1));
  for (long k = 0; k <= last; ++k) best = std::max(best, path.node(k, coord));
  return best;
}

double evaluate(const PathFunctional& g, const ContinuousPath& path) {
  if (g.horizon > path.horizon() * (1.0 + 1e-12)) {
    throw DomainError("path does not cover the payoff horizon");
  }
  const double T = g.horizon;
  const IntegralRule rule = g.rule.value_or(rule_for(path.mode()));

  double disc = 1.0;
  switch (g.discount.kind) {
    case Discounting::Kind::ConstantRate:
      disc = std::exp(-g.discount.rate * T);
      break;
    case Discounting::Kind::RateCoordinate:
      disc = discount_factor(path, T, rule, g.discount.coord);
      break;
    case Discounting::Kind::None:
      break;
  }

  double h = 0.0;
  switch (g.kind) {
    case PayoffKind::Bond:
      h = g.face;
      break;
    case PayoffKind::Custom:
      if (!g.custom) throw DomainError("custom payoff without a function");
      return g.cap ? std::min(g.custom(path), *g.cap) : g.custom(path);
    default: {
      check_coord(path, g.price_coord);
      const double terminal = to_price(g, path.at(T, g.price_coord));
      switch (g.kind) {
        case PayoffKind::EuroCall:
          h = std::max(terminal - g.strike, 0.0);
          break;
        case PayoffKind::EuroPut:
          h = std::max(g.strike - terminal, 0.0);
          break;
        case PayoffKind::AsianCall:
        case PayoffKind::AsianPut: {
          const double avg =
              integrate(path, g.price_coord, T, rule,
                        g.scale == PriceScale::LogPrice) / T;
          h = g.kind == PayoffKind::AsianCall ? std::max(avg - g.strike, 0.0)
                                              : std::max(g.strike - avg, 0.0);
          break;
        }
        case PayoffKind::LookbackMax:
          h = to_price(g, path_max(path, g.price_coord, T));
          break;
        case PayoffKind::UpAndOutCall:
          h = to_price(g, path_max(path, g.price_coord, T)) <= g.barrier
                  ? std::max(terminal - g.strike, 0.0)
                  : 0.0;
          break;
        case PayoffKind::BinaryBelow:
          h = terminal <= g.barrier ? 1.0 : 0.0;
          break;
        default:
          break;
      }
    }
  }
  if (g.cap) h = std::min(h, *g.cap);
  return disc * h;
}

double put_call_parity_call(double put_price, double bond_price_unit, double s0,
                            double strike) {
  return s0 - strike * bond_price_unit + put_price;
}

PathFunctional truncate(PathFunctional g, double cap) {
  if (!(cap > 0.0)) throw DomainError("truncation level must be > 0");
  g.cap = g.cap ? std::min(*g.cap, cap) : cap;
  return g;
}

}  // namespace nneuler

#include "nneuler/fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace nneuler {

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

const std::vector<SchemeKind> kAllSchemes = {SchemeKind::Proposed, SchemeKind::B1,
                                             SchemeKind::B2, SchemeKind::B3,
                                             SchemeKind::B4};

ExperimentSpec bond_spec(double nu, double mu) {
  ExperimentSpec s;
  s.model = ModelSpec{ModelKind::Cir,
                      {{"kappa", 0.5}, {"beta", 0.04}, {"nu", nu}, {"x0", 0.04}}};
  SchemeSpec scheme;
  scheme.mu = mu;
  s.scheme = scheme;
  PayoffSpec payoff;
  payoff.kind = PayoffKind::Bond;
  payoff.maturity = 2.0;
  payoff.face = 1000.0;
  payoff.discount = Discounting::Kind::RateCoordinate;
  s.payoff = payoff;
  RunSpec run;
  run.n = 4;
  run.paths = 1000000;
  run.seed = kDefaultSeed;
  run.reference = "analytic";
  s.run = run;
  return s;
}

std::vector<std::int64_t> repeat(std::int64_t v, std::size_t count) {
  return std::vector<std::int64_t>(count, v);
}

}  // namespace

ExperimentSpec low_vol_bond_spec() { return bond_spec(0.3, 0.8); }

ExperimentSpec high_vol_bond_spec() { return bond_spec(1.0, 0.28); }

ExperimentSpec heston_call_spec() {
  ExperimentSpec s;
  s.model = ModelSpec{ModelKind::Heston,
                      {{"kappa", 2.0},
                       {"beta", 0.09},
                       {"nu", 1.0},
                       {"r", 0.05},
                       {"rho", -0.3},
                       {"v0", 0.09},
                       {"s0", 100.0}}};
  SchemeSpec scheme;
  scheme.mu1 = 0.657;
  scheme.mu3 = 1.0;
  s.scheme = scheme;
  PayoffSpec payoff;
  payoff.kind = PayoffKind::EuroCall;
  payoff.maturity = 5.0;
  payoff.strike = 100.0;
  payoff.coord = 1;
  payoff.scale = PriceScale::LogPrice;
  payoff.discount = Discounting::Kind::ConstantRate;
  payoff.rate = 0.05;
  s.payoff = payoff;
  RunSpec run;
  run.n = 5;
  run.paths = 1000000;
  run.seed = kDefaultSeed;
  run.reference = "analytic";
  s.run = run;
  return s;
}

std::vector<std::string> fixture_names() {
  return {"table1", "table2", "table3", "table4", "table5"};
}

TableFixture table_fixture(const std::string& name) {
  TableFixture f;
  f.name = name;
  if (name == "table1") {
    f.title = "CIR zero-coupon bond, nu = 0.3, all schemes";
    const std::vector<int> ns = {4, 6, 8, 10, 20, 40, 80, 160};
    f.panels.push_back({"low volatility", low_vol_bond_spec(), ns,
                        repeat(1000000, ns.size()), kAllSchemes});
  } else if (name == "table2") {
    f.title = "CIR zero-coupon bond, nu = 1, all schemes";
    const std::vector<int> ns = {50, 100, 200, 400, 800, 1600};
    f.panels.push_back({"high volatility", high_vol_bond_spec(), ns,
                        repeat(1000000, ns.size()), kAllSchemes});
  } else if (name == "table3") {
    f.title = "CIR bond, two-point law, growing N per n";
    f.n_by_paths = true;
    f.panels.push_back({"low volatility", low_vol_bond_spec(),
                        {4, 8, 10, 20, 40},
                        {4000000, 16000000, 25000000, 100000000, 400000000},
                        {SchemeKind::Proposed}});
    f.panels.push_back({"high volatility", high_vol_bond_spec(),
                        {50, 100, 200, 400, 800},
                        {4000000, 8000000, 16000000, 32000000, 64000000},
                        {SchemeKind::Proposed}});
  } else if (name == "table4") {
    f.title = "Heston European call, all schemes";
    const std::vector<int> ns = {5, 10, 20, 40, 80, 160};
    f.panels.push_back({"heston", heston_call_spec(), ns,
                        repeat(1000000, ns.size()), kAllSchemes});
  } else if (name == "table5") {
    f.title = "Heston call, two-point law, growing N per n";
    f.n_by_paths = true;
    f.panels.push_back({"heston", heston_call_spec(),
                        {5, 10, 20, 40, 80, 160},
                        {5000000, 10000000, 20000000, 40000000, 80000000, 160000000},
                        {SchemeKind::Proposed}});
  } else {
    throw ConfigError("unknown fixture '" + name +
                      "' (expected table1, table2, table3, table4 or table5)");
  }
  return f;
}

TableSpec panel_table_spec(const TablePanel& panel, std::uint64_t seed,
                           double scale, int threads) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("--scale must be a positive number");
  }
  ExperimentSpec spec = panel.spec;
  spec.run->seed = seed;
  spec.run->threads = threads;
  TableSpec t;
  t.base = build_experiment(spec);
  t.ns = panel.ns;
  t.schemes = panel.schemes;
  for (std::int64_t n_paths : panel.paths) {
    t.paths.push_back(std::max<std::int64_t>(
        2, static_cast<std::int64_t>(std::llround(double(n_paths) / scale))));
  }
  return t;
}

}  // namespace nneuler

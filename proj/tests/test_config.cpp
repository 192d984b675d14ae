#include <doctest.h>

#include "nneuler/config.hpp"
#include "nneuler/engine.hpp"

#include <sstream>

using namespace nneuler;

namespace {

const char* kBond = R"([model]
kind = cir
kappa = 0.5
beta = 0.04
nu = 0.3
x0 = 0.04

[scheme]
kind = proposed
mu = 0.8

[payoff]
kind = bond
maturity = 2
face = 1000

[run]
n = 40
paths = 1000
seed = 7
reference = analytic
)";

ExperimentSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string round_trip(const ExperimentSpec& s) {
  std::ostringstream out;
  write_config(out, s);
  return out.str();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("bond experiment") {
  const auto spec = parse(kBond);
  REQUIRE(spec.model);
  CHECK(spec.model->kind == ModelKind::Cir);
  CHECK(spec.model->params.at("nu") == 0.3);
  CHECK(*spec.scheme->mu == 0.8);
  CHECK(spec.payoff->discount == Discounting::Kind::RateCoordinate);
  CHECK_FALSE(spec.gencheck);

  const auto c = build_experiment(spec);
  CHECK(c.n == 40);
  CHECK(c.paths == 1000);
  CHECK(c.seed == 7);
  CHECK(c.horizon() == 2.0);
  CHECK(std::abs(*c.reference - 925.258) <= 0.001);
  CHECK(std::get<TwoPointLaw>(c.law).mu == 0.8);
}

TEST_CASE("serialise and parse round trip") {
  for (const char* path : {"/configs/cir_low_vol_bond.ini", "/configs/cir_high_vol_bond.ini",
                           "/configs/heston_call.ini", "/configs/gencheck_cir.ini"}) {
    const auto spec = load_config(std::string(NNEULER_TEST_DATA) + "/../.." + path);
    const std::string once = round_trip(spec);
    const std::string twice = round_trip(parse(once));
    CHECK(once == twice);
  }
  auto spec = parse(kBond);
  spec.payoff->cap = 990.5;
  spec.run->interpolation = InterpolationMode::AbsPiecewiseConstant;
  spec.gencheck = GencheckSpec{{4, 16}, "bump", 0.1, 0.3, 0.4, 11};
  const auto back = parse(round_trip(spec));
  CHECK(*back.payoff->cap == 990.5);
  CHECK(*back.run->interpolation == InterpolationMode::AbsPiecewiseConstant);
  CHECK(back.gencheck->ns == std::vector<int>{4, 16});
  CHECK(back.gencheck->function == "bump");
  CHECK(back.gencheck->points == 11);
}

TEST_CASE("Heston experiment resolves the Fourier reference") {
  const auto spec = load_config(std::string(NNEULER_TEST_DATA) + "/../../configs/heston_call.ini");
  const auto c = build_experiment(spec);
  CHECK(std::abs(*c.reference - 34.9998) <= 0.001);
  const auto& law = std::get<LinearMixLaw>(c.law);
  CHECK(law.rho == -0.3);
  CHECK(law.base1.mu == 0.657);
  CHECK(c.payoff.scale == PriceScale::LogPrice);
  CHECK(c.payoff.price_coord == 1);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse("[model]\nkind = cir\nkappa = 0.5\nbeta = 0.04\nnu = 0.3\nx0 = 0.04\nfoo = 1\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("[extras]\na = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[model]\nkind = vasicek\n"), ConfigError);
  CHECK_THROWS_AS(parse("[run]\nn = four\n"), ConfigError);
  CHECK_THROWS_AS(parse("[payoff]\nkind = bond\nscale = cubic\n"), ConfigError);

  auto no_run = parse(kBond);
  no_run.run.reset();
  CHECK_THROWS_AS(build_experiment(no_run), ConfigError);

  auto missing = parse(kBond);
  missing.model->params.erase("kappa");
  CHECK_THROWS_AS(build_experiment(missing), ConfigError);

  auto bad_model = parse(kBond);
  bad_model.model->params["nu"] = -1.0;
  CHECK_THROWS_AS(build_experiment(bad_model), ConfigError);

  auto bad_ref = parse(kBond);
  bad_ref.run->reference = "oracle";
  CHECK_THROWS_AS(build_experiment(bad_ref), ConfigError);

  auto numeric = parse(kBond);
  numeric.run->reference = "925.5";
  CHECK(*build_experiment(numeric).reference == 925.5);
  numeric.run->reference = "none";
  CHECK_FALSE(build_experiment(numeric).reference);
}

TEST_CASE("analytic reference needs a supported payoff") {
  auto spec = parse(kBond);
  spec.payoff->kind = PayoffKind::AsianCall;
  spec.payoff->strike = 0.04;
  spec.payoff->discount = Discounting::Kind::None;
  CHECK_THROWS_AS(build_experiment(spec), ConfigError);
}

}  // TEST_SUITE

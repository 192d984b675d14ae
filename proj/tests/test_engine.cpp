#include <doctest.h>

#include "nneuler/analytic.hpp"
#include "nneuler/engine.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

using namespace nneuler;

namespace {

ExperimentConfig bond_config(std::int64_t paths, int n, double mu = 0.8) {
  ExperimentConfig c;
  c.model = make_cir({0.5, 0.04, 0.3, 0.04});
  c.scheme = SchemeKind::Proposed;
  c.law = make_two_point(mu);
  c.payoff = bond_payoff(1000.0, 2.0);
  c.n = n;
  c.paths = paths;
  c.seed = 424242;
  c.reference = cir_bond_price(0.5, 0.04, 0.3, 0.04, 2.0, 1000.0);
  c.threads = 1;
  return c;
}

std::vector<RatePoint> read_bias_csv(const std::string& name) {
  std::ifstream in(std::string(NNEULER_TEST_DATA) + "/" + name);
  REQUIRE(in);
  std::string line;
  std::getline(in, line);
  std::vector<RatePoint> pts;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string n, N, bias;
    std::getline(row, n, ',');
    std::getline(row, N, ',');
    std::getline(row, bias, ',');
    pts.push_back({std::stod(n), std::stod(bias)});
  }
  return pts;
}

// Least squares through the normal equations, independent of the
// closed-form centred sums used by convergence_rate.
double ols_slope(const std::vector<RatePoint>& pts) {
  Eigen::MatrixXd X(pts.size(), 2);
  Eigen::VectorXd y(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = std::log(pts[i].n);
    y(i) = std::log(std::abs(pts[i].bias));
  }
  const Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
  return beta(1);
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("constant payoff has zero standard error") {
  auto c = bond_config(1000, 4);
  c.payoff = custom_payoff(2.0, [](const ContinuousPath&) { return 7.5; });
  c.reference = 7.0;
  const auto e = run_experiment(c);
  CHECK(e.mean == 7.5);
  CHECK(e.std_error == 0.0);
  CHECK(e.margin95 == 0.0);
  CHECK(*e.bias == doctest::Approx(0.5));
  CHECK(*e.rmse == doctest::Approx(0.5));
  CHECK(e.paths == 1000);
  CHECK(e.n == 4);
}

TEST_CASE("sample statistics against a direct two-pass computation") {
  auto c = bond_config(10000, 4);
  const auto e = run_experiment(c);
  std::vector<double> xs;
  for (std::int64_t i = 0; i < c.paths; ++i) {
    const auto g = replay_path(c, i);
    xs.push_back(evaluate(c.payoff, ContinuousPath(g, InterpolationMode::Linear)));
  }
  double m = 0.0;
  for (double x : xs) m += x;
  m /= xs.size();
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double se = std::sqrt(ss / (xs.size() - 1) / xs.size());
  CHECK(e.mean == doctest::Approx(m).epsilon(1e-12));
  CHECK(e.std_error == doctest::Approx(se).epsilon(1e-9));
  CHECK(e.margin95 == doctest::Approx(kZ95 * se).epsilon(1e-9));
  CHECK(*e.rmse * *e.rmse == doctest::Approx(*e.bias * *e.bias + se * se).epsilon(1e-9));
}

TEST_CASE("results do not depend on the thread count") {
  for (auto scheme : {SchemeKind::Proposed, SchemeKind::B4}) {
    auto c = bond_config(20000, 8);
    c.scheme = scheme;
    c.threads = 1;
    const auto a = run_experiment(c);
    c.threads = 3;
    const auto b = run_experiment(c);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(*a.rmse == *b.rmse);
  }
}

TEST_CASE("standard error shrinks like one over root N") {
  auto c = bond_config(50000, 4);
  const double se1 = run_experiment(c).std_error;
  c.paths = 100000;
  c.seed = 99;
  const double se2 = run_experiment(c).std_error;
  CHECK(se1 / se2 == doctest::Approx(std::sqrt(2.0)).epsilon(0.03));
}

TEST_CASE("input validation") {
  auto c = bond_config(1, 4);
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.paths = 100;
  c.n = 0;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  c.n = 4;
  c.model = nullptr;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);

  auto bad = bond_config(100, 4, 0.9);
  CHECK_THROWS_AS(run_experiment(bad), InfeasibleError);
  bad.scheme = SchemeKind::B1;  // competitors ignore the law
  CHECK_NOTHROW(run_experiment(bad));

  auto nan = bond_config(5000, 4);
  nan.payoff = custom_payoff(2.0, [](const ContinuousPath& p) {
    return p.node(1, 0) > 0.05 ? std::nan("") : 1.0;
  });
  try {
    run_experiment(nan);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("path") != std::string::npos);
  }
}

TEST_CASE("replay reproduces the path stream") {
  auto c = bond_config(100, 4);
  const auto g = replay_path(c, 17);
  SeededStream s(c.seed, 17);
  const auto direct = simulate_path(SchemeKind::Proposed, c.model, c.law, 4, 2.0, s);
  CHECK(g.values == direct.values);
  CHECK_THROWS_AS(replay_path(c, 100), DomainError);
}

TEST_CASE("rate regression on exact power laws") {
  std::vector<RatePoint> pts;
  for (double n : {4.0, 8.0, 16.0, 64.0}) pts.push_back({n, -3.0 / n});
  const auto r = convergence_rate(pts);
  CHECK(r.rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  pts.push_back({128.0, 5.0});
  const auto ex = convergence_rate(pts, {128.0});
  CHECK(ex.rate == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ex.used.size() == 4);
  CHECK(ex.excluded.size() == 1);
}

TEST_CASE("rate regression on the reference bias columns") {
  const auto t3 = read_bias_csv("table3_low_vol_bias.csv");
  const auto t5 = read_bias_csv("table5_bias.csv");
  CHECK(std::abs(convergence_rate(t3).rate - 1.209) <= 0.01);
  CHECK(std::abs(convergence_rate(t5).rate - 0.654) <= 0.01);
  CHECK(convergence_rate(t3).slope == doctest::Approx(ols_slope(t3)).epsilon(1e-10));
  CHECK(convergence_rate(t5).slope == doctest::Approx(ols_slope(t5)).epsilon(1e-10));
  const auto hv = read_bias_csv("table3_high_vol_bias.csv");
  CHECK(convergence_rate(hv).slope == doctest::Approx(ols_slope(hv)).epsilon(1e-10));
}

TEST_CASE("rate regression invariances") {
  auto pts = read_bias_csv("table5_bias.csv");
  const double base = convergence_rate(pts).slope;
  auto scaled = pts;
  for (auto& p : scaled) p.bias *= -37.0;
  CHECK(convergence_rate(scaled).slope == doctest::Approx(base).epsilon(1e-12));
  auto shuffled = pts;
  std::reverse(shuffled.begin(), shuffled.end());
  std::rotate(shuffled.begin(), shuffled.begin() + 2, shuffled.end());
  CHECK(convergence_rate(shuffled).slope == doctest::Approx(base).epsilon(1e-12));
  auto stretched = pts;
  for (auto& p : stretched) p.n *= 10.0;
  CHECK(convergence_rate(stretched).slope == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rate regression errors") {
  CHECK_THROWS_AS(convergence_rate({{4, 0.1}}), DomainError);
  CHECK_THROWS_AS(convergence_rate({{4, 0.1}, {8, 0.0}}), DomainError);
  CHECK_THROWS_AS(convergence_rate({{4, 0.1}, {4, 0.2}}), DomainError);
  CHECK_THROWS_AS(convergence_rate({{4, 0.1}, {8, 0.2}}, {8}), DomainError);
}

TEST_CASE("table sweep") {
  TableSpec spec;
  spec.base = bond_config(2000, 4);
  spec.ns = {4, 10};
  spec.schemes = {SchemeKind::Proposed, SchemeKind::B3, SchemeKind::B4};
  spec.base.law = make_two_point(0.9);  // feasible at n = 10 only
  const auto t = run_table(spec);
  REQUIRE(t.cells.size() == 6);
  CHECK_FALSE(t.cell(0, 0).estimate);
  CHECK(t.cell(0, 0).error.find("mu") != std::string::npos);
  CHECK(t.cell(1, 0).estimate);
  CHECK(t.cell(0, 1).estimate);
  CHECK(t.cell(1, 2).n == 10);
  CHECK(t.cell(1, 2).scheme == SchemeKind::B4);

  std::ostringstream a, b;
  write_estimates_csv(a, t);
  write_estimates_csv(b, run_table(spec));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("n,scheme,mean,stderr,margin95,bias,rmse,N,seed\n", 0) == 0);
  CHECK(a.str().find("\n4,proposed,,,,,,,424242\n") != std::string::npos);

  std::ostringstream w;
  write_wide_csv(w, t);
  CHECK(w.str().rfind("n,Bernoulli,(b3),(b4)\n", 0) == 0);

  spec.paths = {100};
  CHECK_THROWS_AS(run_table(spec), ConfigError);
}

}  // TEST_SUITE

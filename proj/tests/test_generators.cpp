#include <doctest.h>

#include "nneuler/generators.hpp"

#include <cmath>

using namespace nneuler;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ModelPtr low_vol_cir() { return make_cir({0.5, 0.04, 0.3, 0.04}); }

ModelPtr cev075() {
  return make_cev({[](double x) { return 0.06 - 0.5 * x; }, 0.5, 0.3, 0.75, 0.04});
}

ModelPtr garch() { return make_garch_sv({0.05, 1.0, 0.5, 0.05, -0.3, 0.05, 100.0}); }

// max over the grid of |b|^2, the exact quadratic gap times n
double max_drift_sq(const Model& m, const GridSpec& grid) {
  double best = 0.0;
  for (const auto& p : grid.points) best = std::max(best, m.drift(p.t, p.x).squaredNorm());
  return best;
}

}  // namespace

TEST_SUITE("generators") {

TEST_CASE("analytic derivatives match finite differences") {
  const auto f = SmoothTestFunction::bump(v2(0.3, -0.2), 0.5, 1.5);
  const auto q = SmoothTestFunction(0.7, v2(0.2, -1.0),
                                    (Mat(2, 2) << 2.0, 0.5, 0.5, -1.0).finished(),
                                    v2(0.0, 0.0), 0.4, 1.0);
  const double h = 1e-5;
  for (const auto* fn : {&f, &q}) {
    for (const Vec& x : {v2(1.0, 0.4), v2(-0.4, -0.9), v2(0.2, 0.6), v2(0.1, 0.1)}) {
      const Vec g = fn->gradient(x);
      const Mat H = fn->hessian(x);
      for (int i = 0; i < 2; ++i) {
        Vec e = Vec::Zero(2);
        e(i) = h;
        const double fd = (fn->value(x + e) - fn->value(x - e)) / (2 * h);
        CHECK(g(i) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
        const Vec gd = (fn->gradient(x + e) - fn->gradient(x - e)) / (2 * h);
        for (int j = 0; j < 2; ++j) {
          CHECK(H(j, i) == doctest::Approx(gd(j)).epsilon(1e-6).scale(1.0));
        }
      }
      CHECK(H(0, 1) == doctest::Approx(H(1, 0)));
    }
  }
  CHECK(f.value(v2(0.3, -0.2)) == 1.0);
  CHECK(f.value(v2(2.0, 2.0)) == 0.0);
  CHECK(f.gradient(v2(2.0, 2.0)).norm() == 0.0);
}

TEST_CASE("CIR quadratic example") {
  const auto cir = low_vol_cir();
  const auto f = SmoothTestFunction::quadratic(1, 1.0, 2.0);
  const Vec x = scalar_vec(0.04);
  CHECK(apply_generator(*cir, f, 0.0, x) == doctest::Approx(0.0036).epsilon(1e-12));
  // atoms 0.016 and 0.0775 with weights 25/41 and 16/41
  const double direct = 4.0 * ((25.0 * 0.016 * 0.016 + 16.0 * 0.0775 * 0.0775) / 41.0 - 0.0016);
  const auto an = apply_discrete_generator(*cir, make_two_point(0.8), 4, f, 0.0, x);
  CHECK(an.value == doctest::Approx(direct).epsilon(1e-12));
  CHECK(an.value == doctest::Approx(0.0036).epsilon(1e-12));
  CHECK(an.std_error == 0.0);
}

TEST_CASE("linear, constant and linearity") {
  const auto cir = low_vol_cir();
  const auto law = make_two_point(0.8);
  const auto lin = SmoothTestFunction(0.0, scalar_vec(1.0), Mat::Zero(1, 1), scalar_vec(0.0), 1.0, 2.0);
  const auto one = SmoothTestFunction::constant(1, 3.0, 1.0, 2.0);
  for (double x : {0.0, 0.02, 0.1, 0.3}) {
    const double b = 0.5 * (0.04 - x);
    CHECK(apply_generator(*cir, lin, 0.0, scalar_vec(x)) == doctest::Approx(b).scale(1.0));
    CHECK(apply_discrete_generator(*cir, law, 8, lin, 0.0, scalar_vec(x)).value ==
          doctest::Approx(b).epsilon(1e-12).scale(1.0));
    CHECK(apply_generator(*cir, one, 0.0, scalar_vec(x)) == 0.0);
    CHECK(apply_discrete_generator(*cir, law, 8, one, 0.0, scalar_vec(x)).value == 0.0);

    const auto sq = SmoothTestFunction::quadratic(1, 1.0, 2.0);
    const auto mix = SmoothTestFunction(1.5, scalar_vec(2.0), Mat::Constant(1, 1, 2.0),
                                        scalar_vec(0.0), 1.0, 2.0);
    // mix = 1.5 + 2 x + x^2 = 1.5 + 2 lin + sq
    const double lhs = apply_discrete_generator(*cir, law, 8, mix, 0.0, scalar_vec(x)).value;
    const double rhs = 2.0 * apply_discrete_generator(*cir, law, 8, lin, 0.0, scalar_vec(x)).value +
                       apply_discrete_generator(*cir, law, 8, sq, 0.0, scalar_vec(x)).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("Gaussian law via Monte Carlo agrees with the exact atom sum") {
  const auto gbm = make_gbm(GbmParams::constant(0.05, 0.2, 1.0));
  const auto f = SmoothTestFunction::quadratic(1, 10.0, 20.0);
  const auto exact = apply_discrete_generator(*gbm, make_two_point(1.0), 16, f, 0.0, scalar_vec(1.0));
  const auto mc = apply_discrete_generator(*gbm, GaussianLaw{1}, 16, f, 0.0, scalar_vec(1.0),
                                           {400000, 3});
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.value - exact.value) < 4.0 * mc.std_error);
}

TEST_CASE("quadratic gap equals |b|^2 / n") {
  struct Case {
    ModelPtr model;
    IncrementLaw law;
    Vec lo, hi;
  };
  const auto gbm = make_gbm(GbmParams::constant(0.05, 0.2, 1.0));
  const Case cases[] = {
      {low_vol_cir(), make_two_point(0.8), scalar_vec(0.0), scalar_vec(0.4)},
      {gbm, make_two_point(0.7), scalar_vec(0.0), scalar_vec(5.0)},
      {cev075(), make_two_point(0.5), scalar_vec(0.0), scalar_vec(0.4)},
      {garch(), make_linear_mix(-0.3, 0.657, 1.0), v2(0.0, std::log(100.0) - 0.5),
       v2(0.5, std::log(100.0) + 0.5)},
  };
  for (const auto& c : cases) {
    const int d = c.model->dim();
    const auto grid = GridSpec::box(*c.model, c.lo, c.hi, d == 1 ? 41 : 7);
    Vec center = Vec::Zero(d);
    if (d == 2) center(1) = std::log(100.0);
    const auto f = SmoothTestFunction::quadratic_around(center, 50.0, 100.0);
    const double b2 = max_drift_sq(*c.model, grid);
    double prev = 1e300;
    for (int n : {8, 32, 128}) {
      REQUIRE(check_feasible(*c.model, mean(c.law), n));
      const double gap = generator_gap(*c.model, c.law, f, n, grid);
      CHECK(gap == doctest::Approx(b2 / n).epsilon(1e-7));
      CHECK(gap < prev);
      prev = gap;
    }
  }
}

TEST_CASE("bump gap vanishes with n") {
  const auto cir = low_vol_cir();
  const auto grid = GridSpec::box(*cir, scalar_vec(0.0), scalar_vec(0.4), 41);
  const auto f = SmoothTestFunction::bump(scalar_vec(0.04), 0.2, 0.4);
  const double g8 = generator_gap(*cir, make_two_point(0.8), f, 8, grid);
  const double g128 = generator_gap(*cir, make_two_point(0.8), f, 128, grid);
  const double g2048 = generator_gap(*cir, make_two_point(0.8), f, 2048, grid);
  CHECK(g128 < g8);
  CHECK(g2048 < g128);
}

TEST_CASE("grid and jump diagnostics") {
  const auto cir = low_vol_cir();
  CHECK_THROWS_AS(GridSpec::box(*cir, scalar_vec(-0.1), scalar_vec(0.4), 5), DomainError);
  const auto grid = GridSpec::box(*cir, scalar_vec(0.0), scalar_vec(0.4), 5, {0.0, 1.0});
  CHECK(grid.points.size() == 10);
  CHECK(grid.points.front().x(0) == 0.0);

  const auto law = make_two_point(0.8);
  const double radius = 0.05;
  const int n = jump_vanishing_n(*cir, law, grid, radius);
  // every atom move is shorter than radius at n and some move is not at n - 1
  auto longest = [&](int m) {
    double best = 0.0;
    for (const auto& p : grid.points) {
      const double b = 0.5 * (0.04 - p.x(0)) / m;
      const double s = 0.3 * std::sqrt(p.x(0)) / std::sqrt(double(m));
      best = std::max({best, std::abs(b - s * 0.8), std::abs(b + s * (law.v - 0.8))});
    }
    return best;
  };
  CHECK(longest(n) < radius);
  CHECK(longest(n - 1) >= radius);
  CHECK_THROWS(jump_vanishing_n(*cir, GaussianLaw{1}, grid, radius));
}

}  // TEST_SUITE

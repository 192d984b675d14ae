#include "nneuler/generators.hpp"

#include <cmath>
#include <limits>

namespace nneuler {

namespace {

// psi(t) = exp(-1/t) for t > 0, with its first two derivatives.
struct Psi {
  double v, d1, d2;
};

Psi psi(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  const double v = std::exp(-1.0 / t);
  const double t2 = t * t;
  return {v, v / t2, v * (1.0 / (t2 * t2) - 2.0 / (t2 * t))};
}

// Step S(u) = psi(u) / (psi(u) + psi(1-u)): 0 for u <= 0, 1 for u >= 1.
Psi smooth_step(double u) {
  if (u <= 0.0) return {0.0, 0.0, 0.0};
  if (u >= 1.0) return {1.0, 0.0, 0.0};
  const Psi a = psi(u);
  const Psi b0 = psi(1.0 - u);
  const double b = b0.v, db = -b0.d1, d2b = b0.d2;
  const double den = a.v + b;
  const double dden = a.d1 + db;
  const double num = a.d1 * b - a.v * db;
  const double dnum = a.d2 * b - a.v * d2b;
  const double den2 = den * den;
  return {a.v / den, num / den2, dnum / den2 - 2.0 * num * dden / (den2 * den)};
}

Vec step_point(const Coefficients& c, const Vec& x, const Vec& eps,
               const Vec& mu, int n) {
  return x + c.drift / double(n) + c.factor * (eps - mu) / std::sqrt(double(n));
}

}  // namespace

SmoothTestFunction::SmoothTestFunction(double c0, Vec g, Mat h, Vec center,
                                       double r_in, double r_out)
    : c0_(c0), g_(std::move(g)), h_(std::move(h)), center_(std::move(center)),
      r_in_(r_in), r_out_(r_out) {
  if (!(r_in >= 0.0) || !(r_out > r_in)) {
    throw DomainError("test function needs 0 <= r_in < r_out");
  }
  if (h_.rows() != g_.size() || h_.cols() != g_.size() ||
      center_.size() != g_.size()) {
    throw DomainError("test function coefficient dimensions disagree");
  }
}

SmoothTestFunction SmoothTestFunction::quadratic(int d, double r_in, double r_out) {
  return {0.0, Vec::Zero(d), Mat::Identity(d, d) * 2.0, Vec::Zero(d), r_in, r_out};
}

SmoothTestFunction SmoothTestFunction::quadratic_around(Vec center, double r_in,
                                                        double r_out) {
  const int d = static_cast<int>(center.size());
  const double c0 = center.squaredNorm();
  Vec g = -2.0 * center;
  return {c0, std::move(g), Mat::Identity(d, d) * 2.0, std::move(center), r_in, r_out};
}

SmoothTestFunction SmoothTestFunction::bump(Vec center, double r_in, double r_out) {
  const int d = static_cast<int>(center.size());
  return {1.0, Vec::Zero(d), Mat::Zero(d, d), std::move(center), r_in, r_out};
}

SmoothTestFunction SmoothTestFunction::constant(int d, double value, double r_in,
                                                double r_out) {
  return {value, Vec::Zero(d), Mat::Zero(d, d), Vec::Zero(d), r_in, r_out};
}

SmoothTestFunction::Radial SmoothTestFunction::radial(double r) const {
  const double w = r_out_ - r_in_;
  const Psi s = smooth_step((r - r_in_) / w);
  return {1.0 - s.v, -s.d1 / w, -s.d2 / (w * w)};
}

double SmoothTestFunction::value(const Vec& x) const {
  const double r = (x - center_).norm();
  if (r >= r_out_) return 0.0;
  const double p = c0_ + g_.dot(x) + 0.5 * x.dot(h_ * x);
  return p * radial(r).chi;
}

Vec SmoothTestFunction::gradient(const Vec& x) const {
  const Vec y = x - center_;
  const double r = y.norm();
  if (r >= r_out_) return Vec::Zero(dim());
  const Vec dp = g_ + h_ * x;
  const Radial c = radial(r);
  if (r <= r_in_) return dp;
  const double p = c0_ + g_.dot(x) + 0.5 * x.dot(h_ * x);
  return c.chi * dp + p * c.d1 * y / r;
}

Mat SmoothTestFunction::hessian(const Vec& x) const {
  const Vec y = x - center_;
  const double r = y.norm();
  const int d = dim();
  if (r >= r_out_) return Mat::Zero(d, d);
  if (r <= r_in_) return h_;
  const Radial c = radial(r);
  const double p = c0_ + g_.dot(x) + 0.5 * x.dot(h_ * x);
  const Vec dp = g_ + h_ * x;
  const Vec u = y / r;
  const Vec dchi = c.d1 * u;
  const Mat uu = u * u.transpose();
  const Mat d2chi = c.d2 * uu + (c.d1 / r) * (Mat::Identity(d, d) - uu);
  return c.chi * h_ + dp * dchi.transpose() + dchi * dp.transpose() + p * d2chi;
}

double apply_generator(const Model& model, const SmoothTestFunction& f,
                       double t, const Vec& x) {
  const Coefficients c = eval_coeffs(model, t, x);
  const Mat a = c.factor * model.covariance() * c.factor.transpose();
  return c.drift.dot(f.gradient(x)) + 0.5 * (a.cwiseProduct(f.hessian(x))).sum();
}

GeneratorValue apply_discrete_generator(const Model& model,
                                        const IncrementLaw& law, int n,
                                        const SmoothTestFunction& f, double t,
                                        const Vec& x,
                                        const DiscreteGeneratorOptions& opt) {
  if (n < 1) throw DomainError("discrete generator needs n >= 1");
  if (dimension(law) != model.dim()) {
    throw DomainError("increment law dimension does not match the model");
  }
  const Coefficients c = eval_coeffs(model, t, x);
  const Vec mu = mean(law);
  const double fx = f.value(x);
  if (has_finite_support(law)) {
    double sum = 0.0;
    for (const Atom& a : atoms(law)) {
      sum += a.probability * (f.value(step_point(c, x, a.value, mu, n)) - fx);
    }
    return {double(n) * sum, 0.0};
  }
  if (opt.samples < 2) throw DomainError("Monte Carlo generator needs >= 2 samples");
  SeededStream stream(opt.seed, 0);
  double m = 0.0, m2 = 0.0;
  for (std::int64_t i = 0; i < opt.samples; ++i) {
    const double v =
        double(n) * (f.value(step_point(c, x, draw(law, stream), mu, n)) - fx);
    const double delta = v - m;
    m += delta / double(i + 1);
    m2 += delta * (v - m);
  }
  const double k = double(opt.samples);
  return {m, std::sqrt(m2 / (k - 1.0) / k)};
}

GridSpec GridSpec::box(const Model& model, const Vec& lo, const Vec& hi,
                       int per_axis, const std::vector<double>& times) {
  const int d = model.dim();
  if (lo.size() != d || hi.size() != d || per_axis < 1) {
    throw DomainError("grid bounds do not match the model dimension");
  }
  GridSpec grid;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= per_axis;
  for (double t : times) {
    if (!(t >= 0.0)) throw DomainError("grid time must be >= 0");
    for (long idx = 0; idx < total; ++idx) {
      Vec x(d);
      long rest = idx;
      for (int i = 0; i < d; ++i) {
        const int j = static_cast<int>(rest % per_axis);
        rest /= per_axis;
        x(i) = per_axis == 1 ? lo(i)
                             : lo(i) + (hi(i) - lo(i)) * double(j) / (per_axis - 1);
      }
      if (!model.space().contains(x)) {
        throw DomainError("grid point outside the state space");
      }
      grid.points.push_back({t, x});
    }
  }
  return grid;
}

double generator_gap(const Model& model, const IncrementLaw& law,
                     const SmoothTestFunction& f, int n, const GridSpec& grid,
                     const DiscreteGeneratorOptions& opt) {
  double gap = 0.0;
  for (const auto& p : grid.points) {
    const double exact = apply_generator(model, f, p.t, p.x);
    const double discrete =
        apply_discrete_generator(model, law, n, f, p.t, p.x, opt).value;
    gap = std::max(gap, std::abs(discrete - exact));
  }
  return gap;
}

int jump_vanishing_n(const Model& model, const IncrementLaw& law,
                     const GridSpec& grid, double radius, int n_limit) {
  if (!has_finite_support(law)) {
    throw DomainError("jump diagnostic needs a finite-support law");
  }
  if (!(radius > 0.0)) throw DomainError("jump radius must be > 0");
  const auto support = atoms(law);
  const Vec mu = mean(law);
  auto small_enough = [&](int n) {
    for (const auto& p : grid.points) {
      const Coefficients c = eval_coeffs(model, p.t, p.x);
      for (const Atom& a : support) {
        if (a.probability <= 0.0) continue;
        if ((step_point(c, p.x, a.value, mu, n) - p.x).norm() >= radius) return false;
      }
    }
    return true;
  };
  int hi = 1;
  while (!small_enough(hi)) {
    if (hi >= n_limit) throw DomainError("moves stay large up to the n limit");
    hi = hi > n_limit / 2 ? n_limit : hi * 2;
  }
  int lo = hi / 2;  // fails (or is 0)
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (small_enough(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace nneuler

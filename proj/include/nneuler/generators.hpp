#ifndef NNEULER_GENERATORS_HPP
#define NNEULER_GENERATORS_HPP

#include "nneuler/increments.hpp"
#include "nneuler/models.hpp"

#include <cstdint>
#include <vector>

namespace nneuler {

/// f(x) = p(x) * chi(|x - c|), with p(x) = c0 + g.x + x'Hx/2 and chi a C-infinity
/// radial cutoff equal to 1 on |x - c| <= r_in and 0 beyond r_out. Value,
/// gradient and Hessian are analytic.
class SmoothTestFunction {
 public:
  SmoothTestFunction(double c0, Vec g, Mat h, Vec center, double r_in,
                     double r_out);

  /// x'x (or x^2) times the cutoff.
  static SmoothTestFunction quadratic(int d, double r_in, double r_out);
  /// |x - center|^2 times a cutoff around `center`.
  static SmoothTestFunction quadratic_around(Vec center, double r_in,
                                             double r_out);
  /// The cutoff alone: a plateau of height 1 around `center`.
  static SmoothTestFunction bump(Vec center, double r_in, double r_out);
  static SmoothTestFunction constant(int d, double value, double r_in,
                                     double r_out);

  int dim() const { return static_cast<int>(g_.size()); }
  double support_radius() const { return r_out_; }
  double plateau_radius() const { return r_in_; }
  const Vec& center() const { return center_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

 private:
  struct Radial {
    double chi, d1, d2;
  };
  Radial radial(double r) const;

  double c0_;
  Vec g_;
  Mat h_;
  Vec center_;
  double r_in_;
  double r_out_;
};

/// Af = b . grad f + tr(a Hess f) / 2 with a = sigma~ Sigma sigma~'.
double apply_generator(const Model& model, const SmoothTestFunction& f,
                       double t, const Vec& x);

struct GeneratorValue {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact (finite-support) evaluations
};

struct DiscreteGeneratorOptions {
  std::int64_t samples = 200000;  // continuous laws only
  std::uint64_t seed = 1;
};

/// A_n f = n E[f(x + b/n + sigma~ (eps - mu)/sqrt n) - f(x)]. Exact sum over
/// the atoms for finite-support laws, Monte Carlo otherwise.
GeneratorValue apply_discrete_generator(const Model& model,
                                        const IncrementLaw& law, int n,
                                        const SmoothTestFunction& f, double t,
                                        const Vec& x,
                                        const DiscreteGeneratorOptions& opt = {});

struct GridPoint {
  double t;
  Vec x;
};

struct GridSpec {
  std::vector<GridPoint> points;

  /// Tensor grid with `per_axis` points on [lo_i, hi_i] in every
  /// coordinate, at each listed time. Throws DomainError if a point lies
  /// outside the model's state space.
  static GridSpec box(const Model& model, const Vec& lo, const Vec& hi,
                      int per_axis, const std::vector<double>& times = {0.0});
};

/// max over the grid of |A_n f - A f|.
double generator_gap(const Model& model, const IncrementLaw& law,
                     const SmoothTestFunction& f, int n, const GridSpec& grid,
                     const DiscreteGeneratorOptions& opt = {});

/// Smallest n at which every one-step move from every grid point is shorter
/// than `radius` (then n K_n(t, x, {|y - x| >= radius}) = 0 on the grid).
/// Finite-support laws only.
int jump_vanishing_n(const Model& model, const IncrementLaw& law,
                     const GridSpec& grid, double radius,
                     int n_limit = 1 << 24);

}  // namespace nneuler

#endif  // NNEULER_GENERATORS_HPP

#ifndef NNEULER_MODELS_HPP
#define NNEULER_MODELS_HPP

#include "nneuler/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace nneuler {

/// E = R_+^m x R^(d-m): the first m coordinates are constrained to be >= 0.
struct StateSpace {
  int d = 1;
  int m = 1;

  bool contains(const Vec& x) const;
};

struct FeasibilityWindow {
  int n0 = 1;
  Vec mu_max;           // +inf on unconstrained coordinates
  bool strict = false;  // true when mu must stay strictly below mu_max
};

struct FeasibilityReport {
  bool feasible = false;
  std::string reason;  // names the violated inequality when !feasible

  explicit operator bool() const { return feasible; }
};

enum class ModelKind { Cir, Cev, Affine, Gbm, TwoFactorCir, GarchSv, Heston };

std::string_view to_string(ModelKind kind);

struct CirParams {
  double kappa;
  double beta;
  double nu;
  double x0;
};

struct CevParams {
  std::function<double(double)> drift;  // b(x), Lipschitz with b(0) > 0
  double lipschitz;                     // K
  double nu;
  double alpha;  // in [1/2, 1)
  double x0;
};

struct AffineParams {
  double h0, h1, k0, k1, r0;
};

struct GbmParams {
  std::function<double(double)> beta;  // drift rate beta(t)
  std::function<double(double)> nu;    // volatility nu(t) >= 0
  double x0;
  // beta/nu are inspected on [0, horizon] when bounds are needed.
  double horizon = 10.0;

  static GbmParams constant(double beta0, double nu0, double x0);
};

struct TwoFactorCirParams {
  double beta1, beta2;
  double lambda11, lambda12, lambda21, lambda22;
  double rho;
  double x01, x02;
};

struct GarchSvParams {
  double alpha, lambda, nu, beta, rho, v0, s0;
};

struct HestonParams {
  double kappa, beta, nu, r, rho, v0, s0;
};

/// Drift b(t,x), diffusion factor sigma~(t,x) and increment covariance Sigma
/// with a = sigma~ Sigma sigma~^T, plus the model's nonnegativity window.
///
/// Concrete models live behind make_* factories; all are immutable.
class Model {
 public:
  Model(StateSpace space, Vec x0, Mat sigma);
  virtual ~Model() = default;

  virtual ModelKind kind() const = 0;

  const StateSpace& space() const { return space_; }
  int dim() const { return space_.d; }
  const Vec& initial_state() const { return x0_; }
  const Mat& covariance() const { return sigma_; }

  virtual Vec drift(double t, const Vec& x) const = 0;
  virtual Mat factor(double t, const Vec& x) const = 0;
  Mat diffusion(double t, const Vec& x) const;

  /// Smallest n for which the window formulas are defined (e.g. n > kappa).
  virtual int min_steps() const { return 1; }

  /// Sufficient conditions on (mu, n0) guaranteeing the scheme stays in E.
  virtual FeasibilityReport check_feasible(const Vec& mu, int n0) const = 0;

  /// Upper bound on admissible mu for steps-per-unit-time n0.
  virtual FeasibilityWindow window(int n0) const;

  /// Componentwise inf over (t,x) of x + b/n - sigma~ mu / sqrt(n).
  /// The default is a grid search; models with a closed form override it.
  virtual Vec infimum_margin(const Vec& mu, int n) const;

  /// Typical magnitude of the constrained coordinates, used to size grids.
  virtual double state_scale() const;

 private:
  StateSpace space_;
  Vec x0_;
  Mat sigma_;
};

using ModelPtr = std::shared_ptr<const Model>;

ModelPtr make_cir(const CirParams& p);
ModelPtr make_cev(const CevParams& p);
ModelPtr make_affine(const AffineParams& p);
ModelPtr make_gbm(const GbmParams& p);
ModelPtr make_two_factor_cir(const TwoFactorCirParams& p);
ModelPtr make_garch_sv(const GarchSvParams& p);
ModelPtr make_heston(const HestonParams& p);

/// Parameters of the square-root leg for models that have one (CIR: the
/// whole state; Heston: the variance coordinate). Throws DomainError
/// otherwise.
CirParams square_root_leg(const Model& model);
const HestonParams* heston_params(const Model& model);
const CirParams* cir_params(const Model& model);

struct Coefficients {
  Vec drift;
  Mat factor;
};

/// b and sigma~ at (t, x); DomainError when x is outside E or t < 0.
Coefficients eval_coeffs(const Model& model, double t, const Vec& x);

/// Window at the smallest admissible n0. Throws InfeasibleError when the
/// parameters admit no window at all.
FeasibilityWindow feasibility_window(const Model& model);
FeasibilityWindow feasibility_window(const Model& model, int n0);

Vec infimum_margin(const Model& model, const Vec& mu, int n);
FeasibilityReport check_feasible(const Model& model, const Vec& mu, int n0);

/// Smallest n0 with check_feasible(model, mu, n0), searched by doubling and
/// then bisection. Throws InfeasibleError if none is found below n_limit.
int minimal_n0(const Model& model, const Vec& mu, int n_limit = 1 << 24);

struct InfimumGrid {
  double x_max = 0.0;  // 0 selects 10 * state_scale()
  int x_points = 400;
  double t_max = 10.0;
  int t_points = 1;  // time-homogeneous models need only t = 0
};

/// Brute-force componentwise minimum over a log-spaced state grid (plus the
/// origin) and a uniform time grid.
Vec grid_infimum_margin(const Model& model, const Vec& mu, int n,
                        const InfimumGrid& grid = {});

/// E[Y_n(k)] = beta + (x0 - beta)(1 - kappa/n)^k for the CIR scheme.
double cir_mean_at(const CirParams& p, int n, long k);

/// Variance of the exact CIR process at time t.
double cir_variance_at(const CirParams& p, double t);

}  // namespace nneuler

#endif  // NNEULER_MODELS_HPP

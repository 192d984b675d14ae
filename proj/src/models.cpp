#include "nneuler/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nneuler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(8);
  s << v;
  return s.str();
}

FeasibilityReport ok() { return {true, {}}; }
FeasibilityReport fail(std::string reason) { return {false, std::move(reason)}; }

Mat unit_correlation(double rho) {
  Mat s(2, 2);
  s << 1.0, rho, rho, 1.0;
  return s;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Mat scalar_mat(double v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return m;
}

// inf_{x>=0} x + (c0 - c1 x)/n - s*mu*sqrt(x)/sqrt(n) for n > c1, i.e. the
// square-root-diffusion closed form c0/n - s^2 mu^2 / (4 (n - c1)).
double sqrt_leg_infimum(double c0, double c1, double s, double mu, int n) {
  if (!(n > c1)) {
    throw DomainError("infimum undefined: requires n > " + fmt(c1));
  }
  return c0 / n - s * s * mu * mu / (4.0 * (n - c1));
}

// Largest mu with c0/n0 - s^2 mu^2/(4(n0-c1)) >= 0.
double sqrt_leg_mu_max(double c0, double c1, double s, int n0) {
  if (!(n0 > c1)) return 0.0;
  return (2.0 / s) * std::sqrt(c0 * (1.0 - c1 / n0));
}

// ---------------------------------------------------------------------------

class CirModel final : public Model {
 public:
  explicit CirModel(const CirParams& p)
      : Model({1, 1}, scalar_vec(p.x0), scalar_mat(1.0)), p_(p) {}

  ModelKind kind() const override { return ModelKind::Cir; }
  const CirParams& params() const { return p_; }

  Vec drift(double, const Vec& x) const override {
    return scalar_vec(p_.kappa * (p_.beta - x(0)));
  }
  Mat factor(double, const Vec& x) const override {
    return scalar_mat(p_.nu * std::sqrt(x(0)));
  }
  int min_steps() const override {
    return static_cast<int>(std::floor(p_.kappa)) + 1;
  }
  FeasibilityReport check_feasible(const Vec& mu, int n0) const override {
    if (!(n0 > p_.kappa)) return fail("requires n0 > kappa = " + fmt(p_.kappa));
    const double bound = sqrt_leg_mu_max(p_.kappa * p_.beta, p_.kappa, p_.nu, n0);
    if (!(mu(0) > 0.0)) return fail("requires mu > 0");
    if (!(mu(0) <= bound)) {
      return fail("requires mu <= (2/nu) sqrt(kappa beta (1 - kappa/n0)) = " +
                  fmt(bound) + ", got mu = " + fmt(mu(0)));
    }
    return ok();
  }
  FeasibilityWindow window(int n0) const override {
    return {n0, scalar_vec(sqrt_leg_mu_max(p_.kappa * p_.beta, p_.kappa, p_.nu, n0)),
            false};
  }
  Vec infimum_margin(const Vec& mu, int n) const override {
    return scalar_vec(
        sqrt_leg_infimum(p_.kappa * p_.beta, p_.kappa, p_.nu, mu(0), n));
  }
  double state_scale() const override { return std::max(p_.x0, p_.beta); }

 private:
  CirParams p_;
};

// ---------------------------------------------------------------------------

class CevModel final : public Model {
 public:
  explicit CevModel(CevParams p)
      : Model({1, 1}, scalar_vec(p.x0), scalar_mat(1.0)), p_(std::move(p)) {
    if (!(p_.alpha >= 0.5 && p_.alpha < 1.0)) {
      throw DomainError("CEV requires alpha in [1/2, 1)");
    }
  }

  ModelKind kind() const override { return ModelKind::Cev; }

  Vec drift(double, const Vec& x) const override {
    return scalar_vec(p_.drift(x(0)));
  }
  Mat factor(double, const Vec& x) const override {
    return scalar_mat(p_.nu * std::pow(x(0), p_.alpha));
  }
  int min_steps() const override {
    return static_cast<int>(std::floor(p_.lipschitz)) + 1;
  }

  // x^(n): above it, -K x/n + c_n(x) >= 0.
  double upper_threshold(double mu, int n) const {
    return std::pow(p_.nu * mu / std::sqrt(double(n)) / (1.0 - p_.lipschitz / n),
                    1.0 / (1.0 - p_.alpha));
  }
  // c_n at its minimiser x_n.
  double cn_min(double mu, int n) const {
    const double a = p_.alpha;
    return std::pow(p_.nu * mu / std::sqrt(double(n)), 1.0 / (1.0 - a)) *
           (std::pow(a, 1.0 / (1.0 - a)) - std::pow(a, a / (1.0 - a)));
  }
  double min_drift_below(double x_hi) const {
    constexpr int kPoints = 512;
    double lo = p_.drift(0.0);
    for (int i = 1; i <= kPoints; ++i) {
      lo = std::min(lo, p_.drift(x_hi * i / kPoints));
    }
    return lo;
  }

  FeasibilityReport check_feasible(const Vec& mu, int n0) const override {
    const double b0 = p_.drift(0.0);
    if (!(b0 > 0.0)) return fail("requires b(0) > 0");
    if (!(mu(0) > 0.0)) return fail("requires mu > 0");
    if (!(n0 > p_.lipschitz)) {
      return fail("requires n0 > K = " + fmt(p_.lipschitz));
    }
    if (p_.alpha == 0.5) {
      const double bound = std::sqrt(2.0 * b0) / p_.nu;
      if (!(mu(0) < bound)) {
        return fail("requires mu < sqrt(2 b(0))/nu = " + fmt(bound) +
                    " (strict), got mu = " + fmt(mu(0)));
      }
    } else {
      // |n c_n(x_n)| decreases in n for alpha > 1/2, so n0 is the worst case.
      const double lhs = std::abs(n0 * cn_min(mu(0), n0));
      if (!(lhs < b0 / 2.0)) {
        return fail("requires |n0 c_n0(x_n0)| < b(0)/2: " + fmt(lhs) +
                    " >= " + fmt(b0 / 2.0));
      }
    }
    // x^(n) shrinks with n, so the min-drift condition at n0 covers n >= n0.
    const double x_hi = upper_threshold(mu(0), n0);
    const double bmin = min_drift_below(x_hi);
    if (!(bmin >= b0 / 2.0)) {
      return fail("requires min b on [0, x^(n0)] >= b(0)/2: " + fmt(bmin) +
                  " < " + fmt(b0 / 2.0));
    }
    return ok();
  }

  FeasibilityWindow window(int n0) const override {
    FeasibilityWindow w = Model::window(n0);
    w.strict = true;
    if (p_.alpha == 0.5) {
      w.mu_max = scalar_vec(std::sqrt(2.0 * p_.drift(0.0)) / p_.nu);
    }
    return w;
  }

  double state_scale() const override {
    const double b0 = p_.drift(0.0);
    const double root = p_.lipschitz > 0.0 ? b0 / p_.lipschitz : 1.0;
    return std::max({p_.x0, root, 1e-6});
  }

 private:
  CevParams p_;
};

// ---------------------------------------------------------------------------

// X = h0 + h1 R, dX = (b0 + k1 X) dt + |h1| sqrt(X) dW with b0 = k0 h1 - k1 h0.
class AffineModel final : public Model {
 public:
  explicit AffineModel(const AffineParams& p)
      : Model({1, 1}, scalar_vec(p.h0 + p.h1 * p.r0), scalar_mat(1.0)),
        p_(p),
        b0_(p.k0 * p.h1 - p.k1 * p.h0),
        nu_(std::abs(p.h1)) {
    if (p.h1 == 0.0) throw DomainError("affine model requires h1 != 0");
    if (!(b0_ > 0.0)) throw DomainError("affine model requires k0 h1 - k1 h0 > 0");
    if (!(p.h0 + p.h1 * p.r0 >= 0.0)) {
      throw DomainError("affine model requires h0 + h1 r0 >= 0");
    }
  }

  ModelKind kind() const override { return ModelKind::Affine; }

  Vec drift(double, const Vec& x) const override {
    return scalar_vec(b0_ + p_.k1 * x(0));
  }
  Mat factor(double, const Vec& x) const override {
    return scalar_mat(nu_ * std::sqrt(x(0)));
  }
  int min_steps() const override {
    return static_cast<int>(std::floor(std::abs(p_.k1))) + 1;
  }
  FeasibilityReport check_feasible(const Vec& mu, int n0) const override {
    const double bound = std::sqrt(2.0 * b0_) / nu_;
    const double K = std::abs(p_.k1);
    if (!(mu(0) > 0.0)) return fail("requires mu > 0");
    if (!(mu(0) < bound)) {
      return fail("requires mu < sqrt(2 b(0))/nu = " + fmt(bound) +
                  " (strict), got mu = " + fmt(mu(0)));
    }
    if (!(n0 > K)) return fail("requires n0 > K = |k1| = " + fmt(K));
    const double need =
        std::max(2.0 * K, 8.0 * K * nu_ * nu_ * mu(0) * mu(0) / b0_);
    if (!(n0 >= need)) {
      return fail("requires n0 >= max(2K, 8|k1| nu^2 mu^2 / b(0)) = " +
                  fmt(need));
    }
    return ok();
  }
  FeasibilityWindow window(int n0) const override {
    return {n0, scalar_vec(std::sqrt(2.0 * b0_) / nu_), true};
  }
  Vec infimum_margin(const Vec& mu, int n) const override {
    // b(x) = b0 - (-k1) x, the same closed form as CIR with kappa = -k1.
    return scalar_vec(sqrt_leg_infimum(b0_, -p_.k1, nu_, mu(0), n));
  }
  double state_scale() const override {
    const double root = p_.k1 < 0.0 ? b0_ / -p_.k1 : 1.0;
    return std::max({initial_state()(0), root, 1e-6});
  }

 private:
  AffineParams p_;
  double b0_;
  double nu_;
};

// ---------------------------------------------------------------------------

class GbmModel final : public Model {
 public:
  explicit GbmModel(GbmParams p)
      : Model({1, 1}, scalar_vec(p.x0), scalar_mat(1.0)), p_(std::move(p)) {
    constexpr int kPoints = 1001;
    beta_inf_ = kInf;
    nu_sup_ = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      const double t = p_.horizon * i / (kPoints - 1);
      beta_inf_ = std::min(beta_inf_, p_.beta(t));
      nu_sup_ = std::max(nu_sup_, p_.nu(t));
    }
    if (!(nu_sup_ > 0.0)) throw DomainError("GBM requires sup nu(t) > 0");
  }

  ModelKind kind() const override { return ModelKind::Gbm; }

  Vec drift(double t, const Vec& x) const override {
    return scalar_vec(x(0) * p_.beta(t));
  }
  Mat factor(double t, const Vec& x) const override {
    return scalar_mat(x(0) * p_.nu(t));
  }
  int min_steps() const override {
    return std::max(1, static_cast<int>(std::floor(-2.0 * beta_inf_)) + 1);
  }
  FeasibilityReport check_feasible(const Vec& mu, int n0) const override {
    if (!(mu(0) > 0.0)) return fail("requires mu > 0");
    if (!(n0 > -2.0 * beta_inf_)) {
      return fail("requires n0 > -2 inf beta(t) = " + fmt(-2.0 * beta_inf_));
    }
    const double bound = std::sqrt(double(n0)) / (2.0 * nu_sup_);
    if (!(mu(0) <= bound)) {
      return fail("requires mu <= sqrt(n0)/(2 sup nu(t)) = " + fmt(bound) +
                  ", got mu = " + fmt(mu(0)));
    }
    return ok();
  }
  FeasibilityWindow window(int n0) const override {
    return {n0, scalar_vec(std::sqrt(double(n0)) / (2.0 * nu_sup_)), false};
  }
  Vec infimum_margin(const Vec& mu, int n) const override {
    // inf_x x (1 + beta(t)/n - nu(t) mu / sqrt(n)) is 0 when the factor is
    // nonnegative for every t, and -inf otherwise.
    constexpr int kPoints = 1001;
    for (int i = 0; i < kPoints; ++i) {
      const double t = p_.horizon * i / (kPoints - 1);
      if (1.0 + p_.beta(t) / n - p_.nu(t) * mu(0) / std::sqrt(double(n)) < 0.0) {
        return scalar_vec(-kInf);
      }
    }
    return scalar_vec(0.0);
  }
  double state_scale() const override { return p_.x0; }

 private:
  GbmParams p_;
  double beta_inf_;
  double nu_sup_;
};

// ---------------------------------------------------------------------------

class TwoFactorCirModel final : public Model {
 public:
  explicit TwoFactorCirModel(const TwoFactorCirParams& p)
      : Model({2, 2}, vec2(p.x01, p.x02), unit_correlation(p.rho)), p_(p) {
    if (!(std::abs(p.rho) < 1.0)) throw DomainError("requires -1 < rho < 1");
  }

  ModelKind kind() const override { return ModelKind::TwoFactorCir; }

  Vec drift(double, const Vec& x) const override {
    return vec2(p_.beta1 - p_.lambda11 * x(0) + p_.lambda12 * x(1),
                p_.beta2 + p_.lambda21 * x(0) - p_.lambda22 * x(1));
  }
  Mat factor(double, const Vec& x) const override {
    return diag2(std::sqrt(x(0)), std::sqrt(x(1)));
  }
  int min_steps() const override {
    return static_cast<int>(std::floor(std::max(p_.lambda11, p_.lambda22))) + 1;
  }
  FeasibilityReport check_feasible(const Vec& mu, int n0) const override {
    const double cap = 4.0 * std::sqrt(p_.beta1 * p_.beta2);
    if (!(-p_.rho < cap)) {
      return fail("requires -rho < 4 sqrt(beta1 beta2) = " + fmt(cap));
    }
    const double lmax = std::max(p_.lambda11, p_.lambda22);
    if (!(n0 > lmax)) {
      return fail("requires n0 > max(lambda11, lambda22) = " + fmt(lmax));
    }
    const auto w = window(n0);
    for (int i = 0; i < 2; ++i) {
      if (!(mu(i) > 0.0)) return fail("requires mu_i > 0");
      if (!(mu(i) <= w.mu_max(i))) {
        return fail("requires mu_" + std::to_string(i + 1) +
                    " <= 2 sqrt(beta_i (1 - lambda_ii/n0)) = " +
                    fmt(w.mu_max(i)));
      }
    }
    if (!(-p_.rho <= mu(0) * mu(1))) {
      return fail("requires -rho <= mu1 mu2 = " + fmt(mu(0) * mu(1)));
    }
    return ok();
  }
  FeasibilityWindow window(int n0) const override {
    return {n0,
            vec2(sqrt_leg_mu_max(p_.beta1, p_.lambda11, 1.0, n0),
                 sqrt_leg_mu_max(p_.beta2, p_.lambda22, 1.0, n0)),
            false};
  }
  Vec infimum_margin(const Vec& mu, int n) const override {
    // lambda12, lambda21 >= 0: the cross term is minimised at the origin.
    return vec2(sqrt_leg_infimum(p_.beta1, p_.lambda11, 1.0, mu(0), n),
                sqrt_leg_infimum(p_.beta2, p_.lambda22, 1.0, mu(1), n));
  }
  double state_scale() const override {
    return std::max({p_.x01, p_.x02, p_.beta1 / p_.lambda11,
                     p_.beta2 / p_.lambda22});
  }

 private:
  TwoFactorCirParams p_;
};

// ---------------------------------------------------------------------------

// State (V, log S).
class GarchSvModel final : public Model {
 public:
  explicit GarchSvModel(const GarchSvParams& p)
      : Model({2, 1}, vec2(p.v0, std::log(p.s0)), unit_correlation(p.rho)),
        p_(p) {
    if (!(std::abs(p.rho) < 1.0)) throw DomainError("requires -1 < rho < 1");
  }

  ModelKind kind() const override { return ModelKind::GarchSv; }

  Vec drift(double, const Vec& x) const override {
    return vec2(p_.alpha - p_.lambda * x(0), p_.beta - 0.5 * x(0));
  }
  Mat factor(double, const Vec& x) const override {
    return diag2(p_.nu * x(0), std::sqrt(x(0)));
  }
  int min_steps() const override {
    return static_cast<int>(std::floor(p_.lambda)) + 1;
  }
  FeasibilityReport check_feasible(const Vec& mu, int n0) const override {
    if (!(n0 > p_.lambda)) return fail("requires n0 > lambda = " + fmt(p_.lambda));
    const double bound = window(n0).mu_max(0);
    if (!(mu(0) > 0.0)) return fail("requires mu1 > 0");
    if (!(mu(0) <= bound)) {
      return fail("requires mu1 <= sqrt(n0)/nu (1 - lambda/n0) = " + fmt(bound));
    }
    return ok();
  }
  FeasibilityWindow window(int n0) const override {
    const double b = std::sqrt(double(n0)) / p_.nu * (1.0 - p_.lambda / n0);
    return {n0, vec2(std::max(b, 0.0), kInf), false};
  }
  Vec infimum_margin(const Vec& mu, int n) const override {
    const double slope = 1.0 - p_.lambda / n - p_.nu * mu(0) / std::sqrt(double(n));
    return vec2(slope >= 0.0 ? p_.alpha / n : -kInf, -kInf);
  }
  double state_scale() const override {
    return std::max(p_.v0, p_.alpha / p_.lambda);
  }

 private:
  GarchSvParams p_;
};

// ---------------------------------------------------------------------------

// State (V, log S).
class HestonModel final : public Model {
 public:
  explicit HestonModel(const HestonParams& p)
      : Model({2, 1}, vec2(p.v0, std::log(p.s0)), unit_correlation(p.rho)),
        p_(p) {
    if (!(std::abs(p.rho) < 1.0)) throw DomainError("requires -1 < rho < 1");
  }

  ModelKind kind() const override { return ModelKind::Heston; }
  const HestonParams& params() const { return p_; }

  Vec drift(double, const Vec& x) const override {
    return vec2(p_.kappa * (p_.beta - x(0)), p_.r - 0.5 * x(0));
  }
  Mat factor(double, const Vec& x) const override {
    const double s = std::sqrt(x(0));
    return diag2(p_.nu * s, s);
  }
  int min_steps() const override {
    return static_cast<int>(std::floor(p_.kappa)) + 1;
  }
  FeasibilityReport check_feasible(const Vec& mu, int n0) const override {
    if (!(n0 > p_.kappa)) return fail("requires n0 > kappa = " + fmt(p_.kappa));
    const double bound = window(n0).mu_max(0);
    if (!(mu(0) > 0.0)) return fail("requires mu1 > 0");
    if (!(mu(0) <= bound)) {
      return fail("requires mu1 <= (2/nu) sqrt(kappa beta (1 - kappa/n0)) = " +
                  fmt(bound) + ", got mu1 = " + fmt(mu(0)));
    }
    return ok();
  }
  FeasibilityWindow window(int n0) const override {
    return {n0,
            vec2(sqrt_leg_mu_max(p_.kappa * p_.beta, p_.kappa, p_.nu, n0), kInf),
            false};
  }
  Vec infimum_margin(const Vec& mu, int n) const override {
    return vec2(sqrt_leg_infimum(p_.kappa * p_.beta, p_.kappa, p_.nu, mu(0), n),
                -kInf);
  }
  double state_scale() const override { return std::max(p_.v0, p_.beta); }

 private:
  HestonParams p_;
};

}  // namespace

// ---------------------------------------------------------------------------

bool StateSpace::contains(const Vec& x) const {
  if (x.size() != d) return false;
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(x(i))) return false;
    if (i < m && x(i) < 0.0) return false;
  }
  return true;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Cir: return "cir";
    case ModelKind::Cev: return "cev";
    case ModelKind::Affine: return "affine";
    case ModelKind::Gbm: return "gbm";
    case ModelKind::TwoFactorCir: return "two_factor_cir";
    case ModelKind::GarchSv: return "garch_sv";
    case ModelKind::Heston: return "heston";
  }
  return "unknown";
}

GbmParams GbmParams::constant(double beta0, double nu0, double x0) {
  return GbmParams{[beta0](double) { return beta0; },
                   [nu0](double) { return nu0; }, x0, 1.0};
}

Model::Model(StateSpace space, Vec x0, Mat sigma)
    : space_(space), x0_(std::move(x0)), sigma_(std::move(sigma)) {
  if (space_.m < 0 || space_.m > space_.d || space_.d > kMaxDim) {
    throw DomainError("state space requires 0 <= m <= d <= kMaxDim");
  }
  if (!space_.contains(x0_)) throw DomainError("initial state outside E");
}

Mat Model::diffusion(double t, const Vec& x) const {
  const Mat f = factor(t, x);
  return f * sigma_ * f.transpose();
}

FeasibilityWindow Model::window(int n0) const {
  // Bisection on check_feasible; only meaningful for d = 1.
  if (dim() != 1) {
    throw DomainError("no generic feasibility window for d > 1");
  }
  double hi = 1.0;
  while (check_feasible(scalar_vec(hi), n0) && hi < 1e12) hi *= 2.0;
  double lo = hi > 1.0 ? hi / 2.0 : 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (check_feasible(scalar_vec(mid), n0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {n0, scalar_vec(lo), false};
}

Vec Model::infimum_margin(const Vec& mu, int n) const {
  return grid_infimum_margin(*this, mu, n);
}

double Model::state_scale() const {
  double s = 0.0;
  for (int i = 0; i < space_.m; ++i) s = std::max(s, std::abs(x0_(i)));
  return s > 0.0 ? s : 1.0;
}

ModelPtr make_cir(const CirParams& p) {
  if (!(p.kappa > 0.0 && p.beta > 0.0 && p.nu > 0.0)) {
    throw DomainError("CIR requires kappa, beta, nu > 0");
  }
  return std::make_shared<CirModel>(p);
}
ModelPtr make_cev(const CevParams& p) { return std::make_shared<CevModel>(p); }
ModelPtr make_affine(const AffineParams& p) {
  return std::make_shared<AffineModel>(p);
}
ModelPtr make_gbm(const GbmParams& p) { return std::make_shared<GbmModel>(p); }
ModelPtr make_two_factor_cir(const TwoFactorCirParams& p) {
  return std::make_shared<TwoFactorCirModel>(p);
}
ModelPtr make_garch_sv(const GarchSvParams& p) {
  return std::make_shared<GarchSvModel>(p);
}
ModelPtr make_heston(const HestonParams& p) {
  if (!(p.kappa > 0.0 && p.beta > 0.0 && p.nu > 0.0)) {
    throw DomainError("Heston requires kappa, beta, nu > 0");
  }
  return std::make_shared<HestonModel>(p);
}

const CirParams* cir_params(const Model& model) {
  const auto* m = dynamic_cast<const CirModel*>(&model);
  return m ? &m->params() : nullptr;
}

const HestonParams* heston_params(const Model& model) {
  const auto* m = dynamic_cast<const HestonModel*>(&model);
  return m ? &m->params() : nullptr;
}

CirParams square_root_leg(const Model& model) {
  if (const auto* c = cir_params(model)) return *c;
  if (const auto* h = heston_params(model)) {
    return {h->kappa, h->beta, h->nu, h->v0};
  }
  throw DomainError("model " + std::string(to_string(model.kind())) +
                    " has no square-root leg");
}

Coefficients eval_coeffs(const Model& model, double t, const Vec& x) {
  if (!(t >= 0.0)) throw DomainError("coefficients require t >= 0");
  if (!model.space().contains(x)) throw DomainError("state outside E");
  return {model.drift(t, x), model.factor(t, x)};
}

FeasibilityWindow feasibility_window(const Model& model, int n0) {
  if (n0 < model.min_steps()) {
    throw InfeasibleError("no window for n0 = " + std::to_string(n0) +
                          "; requires n0 >= " +
                          std::to_string(model.min_steps()));
  }
  auto w = model.window(n0);
  for (int i = 0; i < model.space().m; ++i) {
    if (!(w.mu_max(i) > 0.0)) {
      throw InfeasibleError("parameters admit no admissible mu at n0 = " +
                            std::to_string(n0));
    }
  }
  if (model.kind() == ModelKind::TwoFactorCir) {
    // Probe: any mu within the window must satisfy -rho <= mu1 mu2.
    const auto r = model.check_feasible(w.mu_max, n0);
    if (!r) throw InfeasibleError("parameters admit no window: " + r.reason);
  }
  return w;
}

FeasibilityWindow feasibility_window(const Model& model) {
  return feasibility_window(model, model.min_steps());
}

Vec infimum_margin(const Model& model, const Vec& mu, int n) {
  if (n < 1) throw DomainError("infimum margin requires n >= 1");
  return model.infimum_margin(mu, n);
}

FeasibilityReport check_feasible(const Model& model, const Vec& mu, int n0) {
  if (mu.size() < model.space().m) {
    return fail("mu has fewer coordinates than constrained state components");
  }
  if (n0 < 1) return fail("requires n0 >= 1");
  return model.check_feasible(mu, n0);
}

int minimal_n0(const Model& model, const Vec& mu, int n_limit) {
  int hi = std::max(1, model.min_steps());
  while (!model.check_feasible(mu, hi)) {
    if (hi >= n_limit) {
      throw InfeasibleError("no feasible n0 below " + std::to_string(n_limit) +
                            ": " + model.check_feasible(mu, hi).reason);
    }
    hi = std::min(n_limit, hi * 2);
  }
  int lo = std::max(1, model.min_steps()) - 1;  // infeasible or below range
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (mid >= 1 && model.check_feasible(mu, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Vec grid_infimum_margin(const Model& model, const Vec& mu, int n,
                        const InfimumGrid& grid) {
  const int d = model.dim();
  const int m = model.space().m;
  const double x_max = grid.x_max > 0.0 ? grid.x_max : 10.0 * model.state_scale();
  std::vector<double> xs;
  xs.push_back(0.0);
  const double lo = x_max * 1e-10;
  for (int i = 0; i < grid.x_points; ++i) {
    xs.push_back(lo * std::pow(x_max / lo, double(i) / (grid.x_points - 1)));
  }
  const double sqrt_n = std::sqrt(double(n));
  Vec best = Vec::Constant(d, kInf);
  Vec x = model.initial_state();
  const int t_points = std::max(1, grid.t_points);

  // Enumerate the product grid over the m constrained coordinates; the
  // unconstrained ones stay at x0.
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  for (int ti = 0; ti < t_points; ++ti) {
    const double t = t_points == 1 ? 0.0 : grid.t_max * ti / (t_points - 1);
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (int i = 0; i < m; ++i) x(i) = xs[static_cast<std::size_t>(idx[i])];
      const Vec val = x + model.drift(t, x) / n - model.factor(t, x) * mu / sqrt_n;
      best = best.cwiseMin(val);
      int k = 0;
      while (k < m && ++idx[static_cast<std::size_t>(k)] ==
                          static_cast<int>(xs.size())) {
        idx[static_cast<std::size_t>(k)] = 0;
        ++k;
      }
      if (k == m) break;
    }
  }
  for (int i = m; i < d; ++i) best(i) = -kInf;
  return best;
}

double cir_mean_at(const CirParams& p, int n, long k) {
  if (!(n > p.kappa)) throw DomainError("CIR moment recursion requires n > kappa");
  return p.beta + (p.x0 - p.beta) * std::pow(1.0 - p.kappa / n, double(k));
}

double cir_variance_at(const CirParams& p, double t) {
  const double e = std::exp(-p.kappa * t);
  return p.x0 * p.nu * p.nu / p.kappa * (e - e * e) +
         p.beta * p.nu * p.nu / (2.0 * p.kappa) * (1.0 - e) * (1.0 - e);
}

}  // namespace nneuler

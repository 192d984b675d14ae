#include "nneuler/schemes.hpp"

#include <cmath>
#include <ostream>

namespace nneuler {

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Proposed: return "proposed";
    case SchemeKind::B1: return "b1";
    case SchemeKind::B2: return "b2";
    case SchemeKind::B3: return "b3";
    case SchemeKind::B4: return "b4";
  }
  return "unknown";
}

std::string_view table_label(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Proposed: return "Bernoulli";
    case SchemeKind::B1: return "(b1)";
    case SchemeKind::B2: return "(b2)";
    case SchemeKind::B3: return "(b3)";
    case SchemeKind::B4: return "(b4)";
  }
  return "unknown";
}

std::optional<SchemeKind> parse_scheme(std::string_view text) {
  for (auto k : {SchemeKind::Proposed, SchemeKind::B1, SchemeKind::B2,
                 SchemeKind::B3, SchemeKind::B4}) {
    if (text == to_string(k) || text == table_label(k)) return k;
  }
  if (text == "bernoulli") return SchemeKind::Proposed;
  return std::nullopt;
}

InterpolationMode default_interpolation(SchemeKind scheme, const Model& model) {
  if (scheme == SchemeKind::B4 && model.kind() == ModelKind::Cir) {
    return InterpolationMode::AbsPiecewiseConstant;
  }
  return InterpolationMode::Linear;
}

IncrementLaw scheme_law(SchemeKind scheme, const Model& model,
                        const IncrementLaw& proposed_law) {
  if (scheme == SchemeKind::Proposed) return proposed_law;
  return GaussianLaw{model.dim()};
}

Stepper::Stepper(SchemeKind scheme, ModelPtr model, IncrementLaw law, int n)
    : scheme_(scheme),
      model_(std::move(model)),
      law_(std::move(law)),
      n_(n),
      inv_n_(1.0 / n),
      inv_sqrt_n_(1.0 / std::sqrt(double(n))) {
  if (n < 1) throw DomainError("steps per unit time must be >= 1");
  if (scheme_ == SchemeKind::Proposed) {
    if (dimension(law_) != model_->dim()) {
      throw DomainError("increment law dimension does not match the model");
    }
    const auto moments = verify_moments(law_);
    if (!moments.covariance.isApprox(model_->covariance(), 1e-9) &&
        (moments.covariance - model_->covariance()).norm() > 1e-12) {
      throw DomainError("increment covariance does not match the model's Sigma");
    }
    mu_ = moments.mean;
  } else {
    leg_ = square_root_leg(*model_);  // throws for unsupported models
    if (const auto* h = heston_params(*model_)) heston_ = *h;
    law_ = GaussianLaw{model_->dim()};
    mu_ = Vec::Zero(model_->dim());
  }
}

Vec Stepper::draw(SeededStream& stream) const { return nneuler::draw(law_, stream); }

Vec Stepper::next(long k, const Vec& y, const Vec& draw) const {
  if (scheme_ != SchemeKind::Proposed) return next_competitor(y, draw);
  if (!model_->space().contains(y)) {
    throw DomainError("proposed scheme step from a state outside E");
  }
  const double t = double(k) * inv_n_;
  return y + model_->drift(t, y) * inv_n_ +
         model_->factor(t, y) * (draw - mu_) * inv_sqrt_n_;
}

Vec Stepper::next_competitor(const Vec& y, const Vec& z) const {
  const double kappa = leg_.kappa;
  const double beta = leg_.beta;
  const double nu = leg_.nu;
  const double v = y(0);
  const double vp = std::max(v, 0.0);
  double v_next = 0.0;
  double v_used = 0.0;  // variance fed into the log-price leg
  switch (scheme_) {
    case SchemeKind::B1:
      v_next = v + kappa * (beta - v) * inv_n_ + nu * std::sqrt(vp) * z(0) * inv_sqrt_n_;
      v_used = vp;
      break;
    case SchemeKind::B2:
      v_next = v + kappa * (beta - vp) * inv_n_ + nu * std::sqrt(vp) * z(0) * inv_sqrt_n_;
      v_used = vp;
      break;
    case SchemeKind::B3:
      if (v < 0.0) throw DomainError("scheme (b3) requires a nonnegative state");
      v_next = std::abs(v + kappa * (beta - v) * inv_n_ +
                        nu * std::sqrt(v) * z(0) * inv_sqrt_n_);
      v_used = v;
      break;
    case SchemeKind::B4:
      v_next = v + kappa * (beta - v) * inv_n_ +
               nu * std::sqrt(std::abs(v)) * z(0) * inv_sqrt_n_;
      v_used = std::abs(v);
      break;
    case SchemeKind::Proposed:
      break;
  }
  Vec out(y.size());
  out(0) = v_next;
  if (heston_) {
    const double rho = heston_->rho;
    const double w = rho * z(0) + std::sqrt(1.0 - rho * rho) * z(1);
    out(1) = y(1) + (heston_->r - 0.5 * v_used) * inv_n_ +
             std::sqrt(v_used) * w * inv_sqrt_n_;
  }
  return out;
}

Vec step(SchemeKind scheme, const Model& model, const IncrementLaw& law, int n,
         long k, const Vec& y, const Vec& draw) {
  // Non-owning handle; the stepper does not outlive this call.
  const ModelPtr handle(std::shared_ptr<const Model>(), &model);
  return Stepper(scheme, handle, law, n).next(k, y, draw);
}

namespace {

Eigen::Index grid_steps(int n, double horizon) {
  if (!(horizon >= 0.0)) throw DomainError("horizon must be >= 0");
  return static_cast<Eigen::Index>(std::floor(n * horizon * (1.0 + 1e-12))) + 1;
}

}  // namespace

void simulate_path_into(const Stepper& stepper, double horizon,
                        SeededStream& stream, PathGrid& out) {
  const Eigen::Index steps = grid_steps(stepper.n(), horizon);
  const Model& model = stepper.model();
  out.n = stepper.n();
  out.horizon = horizon;
  out.scheme = stepper.scheme();
  out.values.resize(model.dim(), steps + 1);
  Vec y = model.initial_state();
  out.values.col(0) = y;
  for (Eigen::Index k = 0; k < steps; ++k) {
    y = stepper.next(static_cast<long>(k), y, stepper.draw(stream));
    out.values.col(k + 1) = y;
  }
}

PathGrid simulate_path(const Stepper& stepper, double horizon,
                       SeededStream& stream) {
  PathGrid grid;
  simulate_path_into(stepper, horizon, stream, grid);
  return grid;
}

PathGrid simulate_path(SchemeKind scheme, ModelPtr model,
                       const IncrementLaw& law, int n, double horizon,
                       SeededStream& stream) {
  const Stepper stepper(scheme, std::move(model), law, n);
  return simulate_path(stepper, horizon, stream);
}

ContinuousPath::ContinuousPath(const PathGrid& grid, InterpolationMode mode)
    : grid_(&grid), mode_(mode) {}

double ContinuousPath::at(double t, int coord) const {
  const double T = grid_->horizon;
  if (!(t >= 0.0 && t <= T * (1.0 + 1e-12))) {
    throw DomainError("path evaluated outside [0, T]");
  }
  const double nt = grid_->n * std::min(t, T);
  // Snap t = k/n round-off onto the node.
  const double nearest = std::round(nt);
  Eigen::Index k = static_cast<Eigen::Index>(
      std::abs(nt - nearest) < 1e-9 * std::max(1.0, nt) ? nearest
                                                           : std::floor(nt));
  if (mode_ == InterpolationMode::AbsPiecewiseConstant) {
    k = std::min<Eigen::Index>(k, grid_->values.cols() - 1);
    return std::abs(grid_->values(coord, k));
  }
  k = std::min<Eigen::Index>(k, grid_->values.cols() - 2);
  const double frac = std::max(0.0, nt - double(k));
  const double y0 = grid_->values(coord, k);
  return y0 + frac * (grid_->values(coord, k + 1) - y0);
}

double ContinuousPath::node(Eigen::Index k, int coord) const {
  const double y = grid_->values(coord, k);
  return mode_ == InterpolationMode::AbsPiecewiseConstant ? std::abs(y) : y;
}

Vec ContinuousPath::at(double t) const {
  Vec out(dim());
  for (int i = 0; i < dim(); ++i) out(i) = at(t, i);
  return out;
}

ContinuousPath interpolate(const PathGrid& grid, InterpolationMode mode) {
  return ContinuousPath(grid, mode);
}

LatticeSpec lattice_specialize(double beta0, double nu0, double mu, int n) {
  if (!(nu0 > 0.0) || !(mu > 0.0) || n < 1) {
    throw DomainError("lattice requires nu0 > 0, mu > 0, n >= 1");
  }
  const double sqrt_n = std::sqrt(double(n));
  const double center = 1.0 + beta0 / n;
  LatticeSpec spec{center + nu0 / (sqrt_n * mu), center - nu0 * mu / sqrt_n,
                   mu * mu / (1.0 + mu * mu)};
  if (!(spec.d_n > 0.0)) {
    throw InfeasibleError("lattice down factor d_n <= 0: (mu, n) infeasible");
  }
  return spec;
}

void write_path_dump_header(std::ostream& os, SchemeKind scheme, int n,
                            double horizon, std::uint64_t seed) {
  os << "# scheme=" << to_string(scheme) << " n=" << n << " T=" << horizon
     << " seed=" << seed << '\n';
}

void write_path_record(std::ostream& os, const PathGrid& grid, int coord) {
  const auto old = os.precision(17);
  for (Eigen::Index k = 0; k < grid.values.cols(); ++k) {
    if (k > 0) os << ',';
    os << grid.values(coord, k);
  }
  os << '\n';
  os.precision(old);
}

}  // namespace nneuler

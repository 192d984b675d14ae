#include "nneuler/increments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nneuler {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double draw_scalar(const TwoPointLaw& law, SeededStream& stream) {
  return stream.next_uniform() < law.p_zero ? 0.0 : law.v;
}

double draw_scalar(const GaussianLaw&, SeededStream& stream) {
  return stream.next_normal();
}

double scalar_mean(const std::variant<TwoPointLaw, GaussianLaw>& law) {
  return std::visit(overloaded{[](const TwoPointLaw& l) { return l.mu; },
                               [](const GaussianLaw&) { return 0.0; }},
                    law);
}

}  // namespace

TwoPointLaw make_two_point(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("two-point law requires mu > 0");
  }
  const double mu2 = mu * mu;
  return TwoPointLaw{mu, 1.0 / (1.0 + mu2), mu + 1.0 / mu};
}

CorrelationInterval two_point_correlation_interval(double mu1, double mu2) {
  // p11 >= 0 gives rho >= -mu1*mu2, p00 >= 0 gives rho >= -1/(mu1*mu2),
  // p10, p01 >= 0 give rho <= mu1/mu2 and rho <= mu2/mu1.
  const double prod = mu1 * mu2;
  return {-std::min(prod, 1.0 / prod), std::min(mu1 / mu2, mu2 / mu1)};
}

BivariateTwoPointLaw make_bivariate_two_point(double mu1, double mu2,
                                              double rho) {
  const TwoPointLaw a = make_two_point(mu1);
  const TwoPointLaw b = make_two_point(mu2);
  const auto range = two_point_correlation_interval(mu1, mu2);
  if (!(rho >= range.lower && rho <= range.upper)) {
    std::ostringstream msg;
    msg << "infeasible correlation rho=" << rho << " for means (" << mu1 << ", "
        << mu2 << ")";
    if (-rho > mu1 * mu2) {
      msg << ": nonnegative increments require -rho <= mu1*mu2 = "
          << mu1 * mu2;
    } else {
      msg << ": two-point joint law reaches only [" << range.lower << ", "
          << range.upper << "]";
    }
    throw InfeasibleError(msg.str());
  }
  const double q1 = 1.0 - a.p_zero;
  const double q2 = 1.0 - b.p_zero;
  BivariateTwoPointLaw law;
  law.first = a;
  law.second = b;
  law.rho = rho;
  law.p11 = std::max(0.0, q1 * q2 + rho / (a.v * b.v));
  law.p10 = std::max(0.0, q1 - law.p11);
  law.p01 = std::max(0.0, q2 - law.p11);
  law.p00 = std::max(0.0, 1.0 - law.p11 - law.p10 - law.p01);
  return law;
}

LinearMixLaw make_linear_mix(double rho, TwoPointLaw base1,
                             std::variant<TwoPointLaw, GaussianLaw> base3) {
  if (!(std::abs(rho) < 1.0)) {
    throw DomainError("linear mix requires |rho| < 1");
  }
  if (const auto* g = std::get_if<GaussianLaw>(&base3); g && g->dimension != 1) {
    throw DomainError("linear mix needs a scalar third law");
  }
  return LinearMixLaw{rho, base1, base3};
}

LinearMixLaw make_linear_mix(double rho, double mu1, double mu3) {
  return make_linear_mix(rho, make_two_point(mu1), make_two_point(mu3));
}

int dimension(const IncrementLaw& law) {
  return std::visit(overloaded{[](const TwoPointLaw&) { return 1; },
                               [](const BivariateTwoPointLaw&) { return 2; },
                               [](const LinearMixLaw&) { return 2; },
                               [](const GaussianLaw& g) { return g.dimension; }},
                    law);
}

Vec mean(const IncrementLaw& law) {
  return std::visit(
      overloaded{[](const TwoPointLaw& l) { return scalar_vec(l.mu); },
                 [](const BivariateTwoPointLaw& l) {
                   Vec m(2);
                   m << l.first.mu, l.second.mu;
                   return m;
                 },
                 [](const LinearMixLaw& l) {
                   Vec m(2);
                   m << l.base1.mu, l.rho * l.base1.mu +
                                        std::sqrt(1.0 - l.rho * l.rho) *
                                            scalar_mean(l.base3);
                   return m;
                 },
                 [](const GaussianLaw& g) {
                   return Vec(Vec::Zero(g.dimension));
                 }},
      law);
}

bool has_finite_support(const IncrementLaw& law) {
  if (std::holds_alternative<GaussianLaw>(law)) return false;
  if (const auto* mix = std::get_if<LinearMixLaw>(&law)) {
    return std::holds_alternative<TwoPointLaw>(mix->base3);
  }
  return true;
}

std::vector<Atom> atoms(const IncrementLaw& law) {
  std::vector<Atom> out;
  auto pair = [](double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
  };
  std::visit(
      overloaded{
          [&](const TwoPointLaw& l) {
            out.push_back({l.p_zero, scalar_vec(0.0)});
            out.push_back({1.0 - l.p_zero, scalar_vec(l.v)});
          },
          [&](const BivariateTwoPointLaw& l) {
            out.push_back({l.p00, pair(0.0, 0.0)});
            out.push_back({l.p01, pair(0.0, l.second.v)});
            out.push_back({l.p10, pair(l.first.v, 0.0)});
            out.push_back({l.p11, pair(l.first.v, l.second.v)});
          },
          [&](const LinearMixLaw& l) {
            const auto* b3 = std::get_if<TwoPointLaw>(&l.base3);
            if (!b3) return;
            const double s = std::sqrt(1.0 - l.rho * l.rho);
            const double e1s[2] = {0.0, l.base1.v};
            const double p1s[2] = {l.base1.p_zero, 1.0 - l.base1.p_zero};
            const double e3s[2] = {0.0, b3->v};
            const double p3s[2] = {b3->p_zero, 1.0 - b3->p_zero};
            for (int i = 0; i < 2; ++i) {
              for (int j = 0; j < 2; ++j) {
                out.push_back({p1s[i] * p3s[j],
                               pair(e1s[i], l.rho * e1s[i] + s * e3s[j])});
              }
            }
          },
          [](const GaussianLaw&) {}},
      law);
  return out;
}

MomentReport verify_moments(const IncrementLaw& law) {
  const int d = dimension(law);
  MomentReport report;
  report.support_nonnegative.assign(static_cast<std::size_t>(d), true);
  if (has_finite_support(law)) {
    const auto support = atoms(law);
    Vec m = Vec::Zero(d);
    for (const auto& a : support) {
      m += a.probability * a.value;
      for (int i = 0; i < d; ++i) {
        if (a.probability > 0.0 && a.value(i) < 0.0) {
          report.support_nonnegative[static_cast<std::size_t>(i)] = false;
        }
      }
    }
    Mat c = Mat::Zero(d, d);
    for (const auto& a : support) {
      const Vec dev = a.value - m;
      c += a.probability * dev * dev.transpose();
    }
    report.mean = m;
    report.covariance = c;
    return report;
  }
  // Continuous laws: closed-form moments.
  report.mean = mean(law);
  if (const auto* mix = std::get_if<LinearMixLaw>(&law)) {
    Mat c(2, 2);
    c << 1.0, mix->rho, mix->rho, 1.0;
    report.covariance = c;
    report.support_nonnegative[1] = false;
  } else {
    report.covariance = Mat::Identity(d, d);
    std::fill(report.support_nonnegative.begin(),
              report.support_nonnegative.end(), false);
  }
  return report;
}

Vec draw(const IncrementLaw& law, SeededStream& stream) {
  return std::visit(
      overloaded{
          [&](const TwoPointLaw& l) { return scalar_vec(draw_scalar(l, stream)); },
          [&](const BivariateTwoPointLaw& l) {
            const double u = stream.next_uniform();
            Vec e(2);
            if (u < l.p00) {
              e << 0.0, 0.0;
            } else if (u < l.p00 + l.p01) {
              e << 0.0, l.second.v;
            } else if (u < l.p00 + l.p01 + l.p10) {
              e << l.first.v, 0.0;
            } else {
              e << l.first.v, l.second.v;
            }
            return e;
          },
          [&](const LinearMixLaw& l) {
            const double e1 = draw_scalar(l.base1, stream);
            const double e3 = std::visit(
                [&](const auto& b) { return draw_scalar(b, stream); }, l.base3);
            Vec e(2);
            e << e1, l.rho * e1 + std::sqrt(1.0 - l.rho * l.rho) * e3;
            return e;
          },
          [&](const GaussianLaw& g) {
            Vec z(g.dimension);
            for (int i = 0; i < g.dimension; ++i) z(i) = stream.next_normal();
            return z;
          }},
      law);
}

Eigen::MatrixXd sample(const IncrementLaw& law, SeededStream& stream,
                       std::size_t count) {
  Eigen::MatrixXd out(dimension(law), static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) = draw(law, stream);
  return out;
}

}  // namespace nneuler

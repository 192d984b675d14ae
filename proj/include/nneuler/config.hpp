#ifndef NNEULER_CONFIG_HPP
#define NNEULER_CONFIG_HPP

#include "nneuler/engine.hpp"
#include "nneuler/generators.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nneuler {

// Experiment files are INI text with sections [model], [scheme], [payoff],
// [run] and [gencheck]:
//
//   [model]
//   kind = cir
//   kappa = 0.5
//   beta = 0.04
//   nu = 0.3
//   x0 = 0.04
//
//   [scheme]
//   kind = proposed
//   mu = 0.8
//
//   [payoff]
//   kind = bond
//   maturity = 2
//   face = 1000
//
//   [run]
//   n = 40
//   paths = 100000
//   seed = 20240601
//   reference = analytic

struct ModelSpec {
  ModelKind kind = ModelKind::Cir;
  std::map<std::string, double> params;
};

struct SchemeSpec {
  SchemeKind kind = SchemeKind::Proposed;
  std::optional<double> mu;   // one-dimensional models
  std::optional<double> mu1;  // two-dimensional models
  std::optional<double> mu2;  // two-factor CIR second marginal
  std::optional<double> mu3;  // linear-mix base, default 1
  std::optional<double> rho;  // increment correlation, default the model's
};

struct PayoffSpec {
  PayoffKind kind = PayoffKind::Bond;
  double maturity = 1.0;
  double face = 1.0;
  double strike = 0.0;
  double barrier = 0.0;
  int coord = 0;
  PriceScale scale = PriceScale::Price;
  Discounting::Kind discount = Discounting::Kind::None;
  double rate = 0.0;
  int rate_coord = 0;
  std::optional<double> cap;
};

struct RunSpec {
  int n = 1;
  std::int64_t paths = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string reference = "none";  // "none", "analytic" or a number
  std::optional<InterpolationMode> interpolation;
};

struct GencheckSpec {
  std::vector<int> ns = {8, 32, 128};
  std::string function = "quadratic";  // quadratic | bump | constant
  double r_in = 0.0;   // 0 selects 2 * x_max (x_max / 2 for bump)
  double r_out = 0.0;  // 0 selects 2 * r_in
  double x_max = 0.0;  // 0 selects 10 * the model's state scale
  int points = 21;
};

struct ExperimentSpec {
  std::optional<ModelSpec> model;
  std::optional<SchemeSpec> scheme;
  std::optional<PayoffSpec> payoff;
  std::optional<RunSpec> run;
  std::optional<GencheckSpec> gencheck;
};

/// Throws ConfigError on malformed input or unknown keys.
ExperimentSpec parse_config(std::istream& in);
ExperimentSpec load_config(const std::string& path);
void write_config(std::ostream& out, const ExperimentSpec& spec);

ModelPtr build_model(const ModelSpec& spec);
IncrementLaw build_law(const SchemeSpec& spec, const Model& model);
PathFunctional build_payoff(const PayoffSpec& spec);

/// "analytic" resolves through the closed forms for CIR bonds, Heston
/// calls/puts and constant-coefficient GBM calls/puts.
std::optional<double> resolve_reference(const ExperimentSpec& spec,
                                        const Model& model);

/// Requires [model], [scheme], [payoff] and [run]. Throws ConfigError.
ExperimentConfig build_experiment(const ExperimentSpec& spec);

std::string_view to_string(InterpolationMode mode);
std::string_view to_string(Discounting::Kind kind);

}  // namespace nneuler

#endif  // NNEULER_CONFIG_HPP

#ifndef NNEULER_SCHEMES_HPP
#define NNEULER_SCHEMES_HPP

#include "nneuler/increments.hpp"
#include "nneuler/models.hpp"
#include "nneuler/rng.hpp"
#include "nneuler/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace nneuler {

/// Proposed: nonnegative-increment Euler step. B1-B4: Gaussian Euler
/// variants for square-root diffusions that repair negative states with
/// x^+ or |x|.
enum class SchemeKind { Proposed, B1, B2, B3, B4 };

std::string_view to_string(SchemeKind kind);     // "proposed", "b1", ...
std::string_view table_label(SchemeKind kind);   // "Bernoulli", "(b1)", ...
std::optional<SchemeKind> parse_scheme(std::string_view text);

enum class InterpolationMode { Linear, AbsPiecewiseConstant };

/// Linear everywhere except (b4) on a one-dimensional CIR model, where the
/// path is |Y(floor(n s))|.
InterpolationMode default_interpolation(SchemeKind scheme, const Model& model);

/// States Y_n(0..floor(nT)+1) stored column-wise (dimension x count).
struct PathGrid {
  int n = 1;
  double horizon = 0.0;
  SchemeKind scheme = SchemeKind::Proposed;
  Eigen::MatrixXd values;

  Eigen::Index steps() const { return values.cols() - 1; }
  auto state(Eigen::Index k) const { return values.col(k); }
};

/// One-step update bound to (scheme, model, law, n).
///
/// For the proposed scheme the draw is a sample of the increment law and
/// y' = y + b/n + sigma~ (eps - mu)/sqrt(n). For B1-B4 the draw is a standard
/// normal vector: one coordinate for CIR, two independent ones for Heston
/// (the second is correlated internally).
class Stepper {
 public:
  Stepper(SchemeKind scheme, ModelPtr model, IncrementLaw law, int n);

  SchemeKind scheme() const { return scheme_; }
  const Model& model() const { return *model_; }
  const IncrementLaw& law() const { return law_; }
  int n() const { return n_; }

  Vec next(long k, const Vec& y, const Vec& draw) const;
  Vec draw(SeededStream& stream) const;

 private:
  Vec next_competitor(const Vec& y, const Vec& z) const;

  SchemeKind scheme_;
  ModelPtr model_;
  IncrementLaw law_;
  int n_;
  double inv_n_;
  double inv_sqrt_n_;
  Vec mu_;
  CirParams leg_{};
  std::optional<HestonParams> heston_;
};

/// Law used by a scheme: the given increment law for Proposed, otherwise a
/// Gaussian of the dimension the competitor step consumes.
IncrementLaw scheme_law(SchemeKind scheme, const Model& model,
                        const IncrementLaw& proposed_law);

Vec step(SchemeKind scheme, const Model& model, const IncrementLaw& law, int n,
         long k, const Vec& y, const Vec& draw);

PathGrid simulate_path(const Stepper& stepper, double horizon,
                       SeededStream& stream);
/// Reuses `out` storage.
void simulate_path_into(const Stepper& stepper, double horizon,
                        SeededStream& stream, PathGrid& out);

PathGrid simulate_path(SchemeKind scheme, ModelPtr model,
                       const IncrementLaw& law, int n, double horizon,
                       SeededStream& stream);

/// Continuous-time extension X_n of a PathGrid on [0, T].
class ContinuousPath {
 public:
  ContinuousPath(const PathGrid& grid, InterpolationMode mode);

  const PathGrid& grid() const { return *grid_; }
  InterpolationMode mode() const { return mode_; }
  double horizon() const { return grid_->horizon; }
  int dim() const { return static_cast<int>(grid_->values.rows()); }

  /// DomainError when t is outside [0, T].
  Vec at(double t) const;
  double at(double t, int coord) const;
  /// X_n(k/n) for a grid index k.
  double node(Eigen::Index k, int coord) const;

 private:
  const PathGrid* grid_;
  InterpolationMode mode_;
};

ContinuousPath interpolate(const PathGrid& grid, InterpolationMode mode);

/// Recombining binomial lattice of the constant-coefficient GBM scheme with
/// the two-point law.
struct LatticeSpec {
  double u_n;
  double d_n;
  double p_up;
};

LatticeSpec lattice_specialize(double beta0, double nu0, double mu, int n);

/// One record per path: comma-separated states of the given coordinate,
/// preceded by a '#'-comment header carrying (scheme, n, T, seed).
void write_path_dump_header(std::ostream& os, SchemeKind scheme, int n,
                            double horizon, std::uint64_t seed);
void write_path_record(std::ostream& os, const PathGrid& grid, int coord = 0);

}  // namespace nneuler

#endif  // NNEULER_SCHEMES_HPP

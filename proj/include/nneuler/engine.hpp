#ifndef NNEULER_ENGINE_HPP
#define NNEULER_ENGINE_HPP

#include "nneuler/increments.hpp"
#include "nneuler/models.hpp"
#include "nneuler/payoffs.hpp"
#include "nneuler/schemes.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nneuler {

struct ExperimentConfig {
  ModelPtr model;
  SchemeKind scheme = SchemeKind::Proposed;
  IncrementLaw law = TwoPointLaw{};  // used by the proposed scheme only
  PathFunctional payoff;
  int n = 1;                  // steps per unit time
  std::int64_t paths = 0;     // N
  std::uint64_t seed = 0;
  std::optional<double> reference;
  int threads = 0;            // 0: hardware concurrency
  std::optional<InterpolationMode> interpolation;  // default per scheme/model

  double horizon() const { return payoff.horizon; }
};

/// Sample statistics of the discounted payoff. `std_error` uses the N-1
/// sample deviation; bias and rmse are set only with a reference price.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double margin95 = 0.0;
  std::optional<double> bias;
  std::optional<double> rmse;
  std::int64_t paths = 0;
  int n = 0;
};

inline constexpr double kZ95 = 1.96;

/// Paths are split into fixed blocks, each block accumulated in path order,
/// and blocks merged in index order, so the result depends only on
/// (config, seed) and never on the thread count. Path i draws from
/// SeededStream(seed, i).
///
/// Throws InfeasibleError for an infeasible proposed-scheme (mu, n),
/// ConfigError for N < 2 or n < 1, and NumericalError naming the path index
/// when a payoff is not finite.
McEstimate run_experiment(const ExperimentConfig& config);

/// Replays a single path exactly as run_experiment would.
PathGrid replay_path(const ExperimentConfig& config, std::int64_t path_index);

struct RatePoint {
  double n;
  double bias;
};

struct RateEstimate {
  double rate = 0.0;        // |slope|
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<RatePoint> used;
  std::vector<RatePoint> excluded;
};

/// OLS of log|bias| on log n with intercept. Points whose n appears in
/// `exclude_n` are dropped; nothing is excluded automatically.
RateEstimate convergence_rate(const std::vector<RatePoint>& points,
                              const std::vector<double>& exclude_n = {});

/// A sweep over n (rows) and schemes (columns) sharing model and payoff.
struct TableSpec {
  ExperimentConfig base;
  std::vector<int> ns;
  std::vector<SchemeKind> schemes;
  std::vector<std::int64_t> paths;  // per row; empty means base.paths
};

struct TableCell {
  int n = 0;
  SchemeKind scheme = SchemeKind::Proposed;
  std::optional<McEstimate> estimate;
  std::string error;  // set when the cell failed
};

struct Table {
  std::vector<TableCell> cells;  // row-major: n outer, scheme inner
  std::vector<int> ns;
  std::vector<SchemeKind> schemes;
  std::uint64_t seed = 0;

  const TableCell& cell(std::size_t row, std::size_t col) const {
    return cells[row * schemes.size() + col];
  }
};

/// Runs every cell; a failing cell records its error and the sweep goes on.
Table run_table(const TableSpec& spec);

/// Long format: n,scheme,mean,stderr,margin95,bias,rmse,N,seed. Failed cells
/// keep their row with empty numeric fields.
void write_estimates_csv(std::ostream& os, const Table& table);

/// Wide format mirroring the printed tables: one row per n, one
/// "bias (margin)" column per scheme labelled Bernoulli, (b1), ...
void write_wide_csv(std::ostream& os, const Table& table);

}  // namespace nneuler

#endif  // NNEULER_ENGINE_HPP

#include "nneuler/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace nneuler {

namespace {

constexpr std::int64_t kBlockSize = 4096;

// Running mean and sum of squared deviations.
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / double(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = double(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * double(o.count) / total;
    m2 += o.m2 + delta * delta * double(count) * double(o.count) / total;
    count += o.count;
  }
};

struct BlockResult {
  Moments moments;
  std::exception_ptr error;
};

void validate(const ExperimentConfig& c) {
  if (!c.model) throw ConfigError("experiment has no model");
  if (c.n < 1) throw ConfigError("steps per unit time n must be >= 1");
  if (c.paths < 2) throw ConfigError("path count N must be >= 2");
  if (!(c.payoff.horizon > 0.0)) throw ConfigError("payoff horizon must be > 0");
  if (c.scheme == SchemeKind::Proposed) {
    const auto report = check_feasible(*c.model, mean(c.law), c.n);
    if (!report) throw InfeasibleError(report.reason);
  }
}

Stepper make_stepper(const ExperimentConfig& c) {
  return Stepper(c.scheme, c.model, scheme_law(c.scheme, *c.model, c.law), c.n);
}

InterpolationMode mode_of(const ExperimentConfig& c) {
  return c.interpolation.value_or(default_interpolation(c.scheme, *c.model));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

McEstimate run_experiment(const ExperimentConfig& config) {
  validate(config);
  const Stepper stepper = make_stepper(config);
  const InterpolationMode mode = mode_of(config);
  const double horizon = config.horizon();

  const std::int64_t blocks = (config.paths + kBlockSize - 1) / kBlockSize;
  std::vector<BlockResult> results(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next_block{0};

  auto worker = [&] {
    PathGrid grid;
    for (;;) {
      const std::int64_t b = next_block.fetch_add(1);
      if (b >= blocks) return;
      BlockResult& out = results[static_cast<std::size_t>(b)];
      const std::int64_t first = b * kBlockSize;
      const std::int64_t last = std::min(config.paths, first + kBlockSize);
      try {
        for (std::int64_t i = first; i < last; ++i) {
          SeededStream stream(config.seed, static_cast<std::uint64_t>(i));
          simulate_path_into(stepper, horizon, stream, grid);
          const double value = evaluate(config.payoff, ContinuousPath(grid, mode));
          if (!std::isfinite(value)) {
            throw NumericalError("non-finite payoff at path " + std::to_string(i) +
                                 " (seed " + std::to_string(config.seed) + ")");
          }
          out.moments.push(value);
        }
      } catch (...) {
        out.error = std::current_exception();
      }
    }
  };

  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::int64_t>(threads, blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  Moments total;
  for (const auto& r : results) {
    if (r.error) std::rethrow_exception(r.error);  // lowest failing block first
    total.merge(r.moments);
  }

  McEstimate est;
  est.mean = total.mean;
  est.std_error = std::sqrt(total.m2 / double(total.count - 1) / double(total.count));
  est.margin95 = kZ95 * est.std_error;
  est.paths = total.count;
  est.n = config.n;
  if (config.reference) {
    est.bias = est.mean - *config.reference;
    est.rmse = std::sqrt(*est.bias * *est.bias + est.std_error * est.std_error);
  }
  return est;
}

PathGrid replay_path(const ExperimentConfig& config, std::int64_t path_index) {
  validate(config);
  if (path_index < 0 || path_index >= config.paths) {
    throw DomainError("path index outside [0, N)");
  }
  SeededStream stream(config.seed, static_cast<std::uint64_t>(path_index));
  return simulate_path(make_stepper(config), config.horizon(), stream);
}

RateEstimate convergence_rate(const std::vector<RatePoint>& points,
                              const std::vector<double>& exclude_n) {
  RateEstimate out;
  for (const auto& p : points) {
    const bool skip = std::find(exclude_n.begin(), exclude_n.end(), p.n) != exclude_n.end();
    (skip ? out.excluded : out.used).push_back(p);
  }
  if (out.used.size() < 2) {
    throw DomainError("rate regression needs at least two non-excluded points");
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& p : out.used) {
    if (p.bias == 0.0) {
      throw DomainError("zero bias at n = " + fmt(p.n) + ": log|bias| undefined");
    }
    if (!(p.n > 0.0)) throw DomainError("rate regression needs n > 0");
    sx += std::log(p.n);
    sy += std::log(std::abs(p.bias));
  }
  const double k = double(out.used.size());
  const double mx = sx / k, my = sy / k;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : out.used) {
    const double dx = std::log(p.n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(p.bias)) - my);
  }
  if (sxx == 0.0) throw DomainError("rate regression needs at least two distinct n");
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.rate = std::abs(out.slope);
  return out;
}

Table run_table(const TableSpec& spec) {
  if (!spec.paths.empty() && spec.paths.size() != spec.ns.size()) {
    throw ConfigError("per-row path counts do not match the n values");
  }
  Table table;
  table.ns = spec.ns;
  table.schemes = spec.schemes;
  table.seed = spec.base.seed;
  for (std::size_t row = 0; row < spec.ns.size(); ++row) {
    for (SchemeKind scheme : spec.schemes) {
      TableCell cell;
      cell.n = spec.ns[row];
      cell.scheme = scheme;
      ExperimentConfig c = spec.base;
      c.n = cell.n;
      c.scheme = scheme;
      if (!spec.paths.empty()) c.paths = spec.paths[row];
      try {
        cell.estimate = run_experiment(c);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      table.cells.push_back(std::move(cell));
    }
  }
  return table;
}

void write_estimates_csv(std::ostream& os, const Table& table) {
  os << "n,scheme,mean,stderr,margin95,bias,rmse,N,seed\n";
  const auto old = os.precision(12);
  for (const auto& cell : table.cells) {
    os << cell.n << ',' << to_string(cell.scheme) << ',';
    if (const auto& e = cell.estimate) {
      os << e->mean << ',' << e->std_error << ',' << e->margin95 << ',';
      if (e->bias) os << *e->bias;
      os << ',';
      if (e->rmse) os << *e->rmse;
      os << ',' << e->paths;
    } else {
      os << ",,,,,";
    }
    os << ',' << table.seed << '\n';
  }
  os.precision(old);
}

void write_wide_csv(std::ostream& os, const Table& table) {
  os << "n";
  for (SchemeKind s : table.schemes) os << ',' << table_label(s);
  os << '\n';
  for (std::size_t row = 0; row < table.ns.size(); ++row) {
    os << table.ns[row];
    for (std::size_t col = 0; col < table.schemes.size(); ++col) {
      const auto& cell = table.cell(row, col);
      os << ',';
      if (!cell.estimate) {
        os << "error";
        continue;
      }
      const auto& e = *cell.estimate;
      std::ostringstream v;
      v << std::fixed << std::setprecision(3) << e.bias.value_or(e.mean) << " ("
        << e.margin95 << ')';
      os << v.str();
    }
    os << '\n';
  }
}

}  // namespace nneuler

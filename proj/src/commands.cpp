#include "nneuler/commands.hpp"

#include "nneuler/fixtures.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace nneuler {

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Opens --out if given, otherwise writes to stdout.
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

struct Common {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out;
  std::string manifest;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "64-bit seed (overrides the config)");
  cmd->add_option("--threads", c.threads, "worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", c.out, "CSV output path (default: stdout)");
  cmd->add_option("--manifest", c.manifest,
                  "manifest path (default: <out>.manifest.json, or stderr)");
}

void emit_manifest(const Common& c, json manifest, Clock::time_point start) {
  manifest["tool_version"] = kVersion;
  manifest["finished_utc"] = utc_now();
  manifest["wall_clock_seconds"] =
      std::chrono::duration<double>(Clock::now() - start).count();
  manifest["threads"] = c.threads;
  manifest["outputs"] = c.out.empty() ? json::array() : json::array({c.out});
  const std::string path =
      !c.manifest.empty() ? c.manifest : (c.out.empty() ? "" : c.out + ".manifest.json");
  if (path.empty()) {
    std::cerr << manifest.dump() << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open manifest file '" + path + "'");
  f << manifest.dump(2) << '\n';
}

std::string infeasible_detail(const ExperimentConfig& c) {
  std::ostringstream os;
  try {
    const auto w = feasibility_window(*c.model, c.n);
    os << "mu_max = " << std::setprecision(6);
    for (Eigen::Index i = 0; i < w.mu_max.size(); ++i) {
      if (std::isfinite(w.mu_max(i))) os << (i ? "," : "") << w.mu_max(i);
    }
    os << " at n0 = " << c.n;
  } catch (const std::exception&) {
    os << "no admissible mu at n0 = " << c.n;
  }
  return os.str();
}

int cmd_price(const std::string& config_path, const Common& common) {
  const auto start = Clock::now();
  ExperimentSpec spec = load_config(config_path);
  if (!spec.run) throw ConfigError("missing [run] section");
  if (common.seed) spec.run->seed = *common.seed;
  if (common.threads > 0) spec.run->threads = common.threads;
  const ExperimentConfig config = build_experiment(spec);
  McEstimate est;
  try {
    est = run_experiment(config);
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string(e.what()) + " [" + infeasible_detail(config) + "]");
  }

  Table table;
  table.ns = {config.n};
  table.schemes = {config.scheme};
  table.seed = config.seed;
  table.cells.push_back({config.n, config.scheme, est, {}});
  Output out(common.out);
  write_estimates_csv(out.stream(), table);
  if (!common.out.empty()) {
    std::cout << std::setprecision(8) << "mean " << est.mean << "  margin95 "
              << est.margin95;
    if (est.bias) std::cout << "  bias " << *est.bias << "  rmse " << *est.rmse;
    std::cout << "  (n=" << est.n << ", N=" << est.paths << ")\n";
  }

  json m;
  m["command"] = "price";
  m["config"] = config_path;
  m["seed"] = config.seed;
  emit_manifest(common, m, start);
  return kExitOk;
}

void write_pairs_csv(std::ostream& os, const std::string& label, const Table& t,
                     bool header) {
  if (header) os << "panel,n,N,mean,bias,margin95,rmse\n";
  const auto old = os.precision(10);
  for (const auto& cell : t.cells) {
    os << label << ',' << cell.n << ',';
    if (!cell.estimate) {
      os << ",,,,\n";
      continue;
    }
    const auto& e = *cell.estimate;
    os << e.paths << ',' << e.mean << ',';
    if (e.bias) os << *e.bias;
    os << ',' << e.margin95 << ',';
    if (e.rmse) os << *e.rmse;
    os << '\n';
  }
  os.precision(old);
}

int cmd_table(const std::string& name, const Common& common, double scale,
              bool wide) {
  const auto start = Clock::now();
  const TableFixture fixture = table_fixture(name);
  const std::uint64_t seed =
      common.seed.value_or(fixture.panels.front().spec.run->seed);
  Output out(common.out);
  bool first = true;
  bool failed = false;
  for (const auto& panel : fixture.panels) {
    const Table table = run_table(panel_table_spec(panel, seed, scale, common.threads));
    for (const auto& cell : table.cells) {
      if (!cell.estimate) {
        failed = true;
        std::cerr << name << " n=" << cell.n << ' ' << to_string(cell.scheme)
                  << ": " << cell.error << '\n';
      }
    }
    if (fixture.n_by_paths) {
      write_pairs_csv(out.stream(), panel.label, table, first);
    } else if (wide) {
      write_wide_csv(out.stream(), table);
    } else {
      write_estimates_csv(out.stream(), table);
    }
    first = false;
  }

  json m;
  m["command"] = "table";
  m["fixture"] = name;
  m["seed"] = seed;
  m["scale"] = scale;
  m["layout"] = fixture.n_by_paths ? "pairs" : (wide ? "wide" : "long");
  emit_manifest(common, m, start);
  return failed ? kExitNumerical : kExitOk;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    const auto b = f.find_first_not_of(" \t\r");
    const auto e = f.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : f.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

int cmd_rate(const std::string& csv_path, const std::vector<double>& exclude,
             const std::string& scheme_filter, const Common& common) {
  const auto start = Clock::now();
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open '" + csv_path + "'");
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  auto column = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int n_col = column("n");
  const int bias_col = column("bias");
  const int scheme_col = column("scheme");
  if (n_col < 0 || bias_col < 0) {
    throw ConfigError("rate input needs 'n' and 'bias' columns");
  }
  std::vector<RatePoint> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv_line(line);
    if (f.size() <= static_cast<std::size_t>(std::max(n_col, bias_col))) {
      throw ConfigError("line " + std::to_string(line_no) + ": too few fields");
    }
    if (!scheme_filter.empty() && scheme_col >= 0 &&
        f[static_cast<std::size_t>(scheme_col)] != scheme_filter) {
      continue;
    }
    try {
      points.push_back({std::stod(f[static_cast<std::size_t>(n_col)]),
                        std::stod(f[static_cast<std::size_t>(bias_col)])});
    } catch (const std::exception&) {
      throw ConfigError("line " + std::to_string(line_no) + ": malformed number");
    }
  }
  const RateEstimate rate = convergence_rate(points, exclude);

  Output out(common.out);
  auto& os = out.stream();
  os << "rate,slope,intercept,points,excluded\n"
     << std::setprecision(10) << rate.rate << ',' << rate.slope << ','
     << rate.intercept << ',' << rate.used.size() << ',' << rate.excluded.size()
     << '\n';

  json m;
  m["command"] = "rate";
  m["input"] = csv_path;
  m["exclude"] = exclude;
  m["scheme"] = scheme_filter;
  emit_manifest(common, m, start);
  return kExitOk;
}

int cmd_gencheck(const std::string& config_path, const Common& common) {
  const auto start = Clock::now();
  const ExperimentSpec spec = load_config(config_path);
  const GencheckResult result = run_gencheck(spec);
  Output out(common.out);
  auto& os = out.stream();
  os << "n,gap\n" << std::setprecision(12);
  for (const auto& row : result.rows) os << row.n << ',' << row.gap << '\n';
  if (result.jump_vanishing_n > 0) {
    std::cerr << "moves from every grid point stay inside the plateau for n >= "
              << result.jump_vanishing_n << '\n';
  }
  json m;
  m["command"] = "gencheck";
  m["config"] = config_path;
  emit_manifest(common, m, start);
  return kExitOk;
}

}  // namespace

GencheckResult run_gencheck(const ExperimentSpec& spec) {
  if (!spec.model) throw ConfigError("missing [model] section");
  if (!spec.scheme) throw ConfigError("missing [scheme] section");
  const GencheckSpec g = spec.gencheck.value_or(GencheckSpec{});
  const ModelPtr model = build_model(*spec.model);
  if (spec.scheme->kind != SchemeKind::Proposed) {
    throw ConfigError("[scheme] gencheck applies to the proposed scheme");
  }
  const IncrementLaw law = build_law(*spec.scheme, *model);
  const int d = model->dim();
  const int m = model->space().m;

  const double x_max = g.x_max > 0.0 ? g.x_max : 10.0 * model->state_scale();
  const bool bump = g.function == "bump";
  const double r_in = g.r_in > 0.0 ? g.r_in : (bump ? 0.5 * x_max : 2.0 * x_max);
  const double r_out = g.r_out > 0.0 ? g.r_out : 2.0 * r_in;
  if (!(r_out > r_in)) throw ConfigError("[gencheck] r_out must exceed r_in");

  Vec center = model->initial_state();
  for (int i = 0; i < m; ++i) center(i) = bump ? model->initial_state()(i) : 0.0;
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo(i) = i < m ? 0.0 : center(i) - x_max;
    hi(i) = i < m ? x_max : center(i) + x_max;
  }
  const int per_axis = d == 1 ? g.points : std::max(2, static_cast<int>(std::lround(
                                                          std::sqrt(double(g.points)))));
  GridSpec grid;
  try {
    grid = GridSpec::box(*model, lo, hi, per_axis);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[gencheck] ") + e.what());
  }

  const SmoothTestFunction f =
      g.function == "constant" ? SmoothTestFunction::constant(d, 1.0, r_in, r_out)
      : bump                   ? SmoothTestFunction::bump(center, r_in, r_out)
                               : SmoothTestFunction::quadratic_around(center, r_in, r_out);

  GencheckResult result;
  const Vec mu = mean(law);
  for (int n : g.ns) {
    const auto report = check_feasible(*model, mu, n);
    if (!report) {
      throw InfeasibleError("n = " + std::to_string(n) + ": " + report.reason);
    }
    result.rows.push_back({n, generator_gap(*model, law, f, n, grid)});
  }
  if (has_finite_support(law)) {
    result.jump_vanishing_n = jump_vanishing_n(*model, law, grid, r_in);
  }
  return result;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Nonnegative Euler-type schemes: pricing, tables and diagnostics"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common price_opts, table_opts, rate_opts, gen_opts;
  std::string config_path, fixture, csv_path;
  double scale = 1.0;
  bool wide = false;
  std::vector<double> exclude;
  std::string scheme_filter;

  auto* price = app.add_subcommand("price", "Monte Carlo price of one configured experiment");
  price->add_option("config", config_path, "experiment config file")->required();
  add_common(price, price_opts);

  auto* table = app.add_subcommand("table", "reproduce a reference table (table1..table5)");
  table->add_option("fixture", fixture, "fixture name")->required();
  table->add_option("--scale", scale, "divide every N by this factor")
      ->check(CLI::PositiveNumber);
  table->add_flag("--wide", wide, "one 'bias (margin)' column per scheme");
  add_common(table, table_opts);

  auto* rate = app.add_subcommand("rate", "weak convergence rate from a CSV of (n, bias)");
  rate->add_option("csv", csv_path, "CSV with n and bias columns")->required();
  rate->add_option("--exclude", exclude, "n values to leave out")->delimiter(',');
  rate->add_option("--scheme", scheme_filter, "keep rows of this scheme only");
  add_common(rate, rate_opts);

  auto* gencheck = app.add_subcommand("gencheck", "generator gap sup|A_n f - A f| over n");
  gencheck->add_option("config", config_path, "config with [model], [scheme], [gencheck]")
      ->required();
  add_common(gencheck, gen_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*price) return cmd_price(config_path, price_opts);
    if (*table) return cmd_table(fixture, table_opts, scale, wide);
    if (*rate) return cmd_rate(csv_path, exclude, scheme_filter, rate_opts);
    if (*gencheck) return cmd_gencheck(config_path, gen_opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace nneuler

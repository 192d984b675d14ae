#include "nneuler/config.hpp"

#include "nneuler/analytic.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace nneuler {

namespace pt = boost::property_tree;

namespace {

const std::map<ModelKind, std::vector<std::string>>& model_keys() {
  static const std::map<ModelKind, std::vector<std::string>> keys = {
      {ModelKind::Cir, {"kappa", "beta", "nu", "x0"}},
      {ModelKind::Cev, {"b0", "b1", "nu", "alpha", "x0"}},
      {ModelKind::Affine, {"h0", "h1", "k0", "k1", "r0"}},
      {ModelKind::Gbm, {"beta", "nu", "x0"}},
      {ModelKind::TwoFactorCir,
       {"beta1", "beta2", "lambda11", "lambda12", "lambda21", "lambda22", "rho",
        "x01", "x02"}},
      {ModelKind::GarchSv, {"alpha", "lambda", "nu", "beta", "rho", "v0", "s0"}},
      {ModelKind::Heston, {"kappa", "beta", "nu", "r", "rho", "v0", "s0"}},
  };
  return keys;
}

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  for (const auto& [kind, _] : model_keys()) {
    if (s == to_string(kind)) return kind;
  }
  return std::nullopt;
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": expected a number, got '" +
                      text + "'");
  }
}

template <typename Int>
Int to_int(const std::string& section, const std::string& key,
           const std::string& text) {
  Int v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec == std::errc() && ptr == end) return v;
  // Accept integral values written in floating form, e.g. 1e5.
  const double d = to_double(section, key, text);
  if (d != std::floor(d) || d < double(std::numeric_limits<Int>::lowest()) ||
      d > double(std::numeric_limits<Int>::max())) {
    throw ConfigError("[" + section + "] " + key + ": expected an integer, got '" +
                      text + "'");
  }
  return static_cast<Int>(d);
}

void check_keys(const std::string& section, const pt::ptree& tree,
                const std::set<std::string>& allowed) {
  for (const auto& [key, _] : tree) {
    if (!allowed.count(key)) {
      throw ConfigError("[" + section + "] unknown key '" + key + "'");
    }
  }
}

std::string required(const std::string& section, const pt::ptree& tree,
                     const std::string& key) {
  const auto v = tree.get_optional<std::string>(key);
  if (!v) throw ConfigError("[" + section + "] missing key '" + key + "'");
  return *v;
}

std::optional<double> optional_double(const std::string& section,
                                      const pt::ptree& tree,
                                      const std::string& key) {
  const auto v = tree.get_optional<std::string>(key);
  if (!v) return std::nullopt;
  return to_double(section, key, *v);
}

ModelSpec parse_model(const pt::ptree& tree) {
  const std::string kind_text = required("model", tree, "kind");
  const auto kind = parse_model_kind(kind_text);
  if (!kind) throw ConfigError("[model] unknown kind '" + kind_text + "'");
  ModelSpec spec;
  spec.kind = *kind;
  const auto& keys = model_keys().at(*kind);
  std::set<std::string> allowed(keys.begin(), keys.end());
  allowed.insert("kind");
  check_keys("model", tree, allowed);
  for (const auto& key : keys) {
    spec.params[key] = to_double("model", key, required("model", tree, key));
  }
  return spec;
}

SchemeSpec parse_scheme_section(const pt::ptree& tree) {
  check_keys("scheme", tree, {"kind", "mu", "mu1", "mu2", "mu3", "rho"});
  SchemeSpec spec;
  const std::string kind_text = tree.get<std::string>("kind", "proposed");
  const auto kind = parse_scheme(kind_text);
  if (!kind) throw ConfigError("[scheme] unknown kind '" + kind_text + "'");
  spec.kind = *kind;
  spec.mu = optional_double("scheme", tree, "mu");
  spec.mu1 = optional_double("scheme", tree, "mu1");
  spec.mu2 = optional_double("scheme", tree, "mu2");
  spec.mu3 = optional_double("scheme", tree, "mu3");
  spec.rho = optional_double("scheme", tree, "rho");
  return spec;
}

std::optional<Discounting::Kind> parse_discount(std::string_view s) {
  for (auto k : {Discounting::Kind::None, Discounting::Kind::ConstantRate,
                 Discounting::Kind::RateCoordinate}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

PayoffSpec parse_payoff_section(const pt::ptree& tree) {
  check_keys("payoff", tree,
             {"kind", "maturity", "face", "strike", "barrier", "coord", "scale",
              "discount", "rate", "rate_coord", "cap"});
  PayoffSpec spec;
  const std::string kind_text = required("payoff", tree, "kind");
  const auto kind = parse_payoff(kind_text);
  if (!kind) throw ConfigError("[payoff] unknown kind '" + kind_text + "'");
  spec.kind = *kind;
  spec.maturity = to_double("payoff", "maturity", required("payoff", tree, "maturity"));
  if (!(spec.maturity > 0.0)) throw ConfigError("[payoff] maturity must be > 0");
  spec.face = optional_double("payoff", tree, "face").value_or(1.0);
  spec.strike = optional_double("payoff", tree, "strike").value_or(0.0);
  spec.barrier = optional_double("payoff", tree, "barrier").value_or(0.0);
  if (auto c = tree.get_optional<std::string>("coord")) {
    spec.coord = to_int<int>("payoff", "coord", *c);
  }
  const std::string scale = tree.get<std::string>("scale", "price");
  if (scale == "price") {
    spec.scale = PriceScale::Price;
  } else if (scale == "log") {
    spec.scale = PriceScale::LogPrice;
  } else {
    throw ConfigError("[payoff] scale must be 'price' or 'log'");
  }
  const std::string default_discount =
      spec.kind == PayoffKind::Bond ? "short_rate" : "none";
  const std::string disc = tree.get<std::string>("discount", default_discount);
  const auto dk = parse_discount(disc);
  if (!dk) throw ConfigError("[payoff] unknown discount '" + disc + "'");
  spec.discount = *dk;
  spec.rate = optional_double("payoff", tree, "rate").value_or(0.0);
  if (auto c = tree.get_optional<std::string>("rate_coord")) {
    spec.rate_coord = to_int<int>("payoff", "rate_coord", *c);
  }
  spec.cap = optional_double("payoff", tree, "cap");
  return spec;
}

RunSpec parse_run(const pt::ptree& tree) {
  check_keys("run", tree,
             {"n", "paths", "seed", "threads", "reference", "interpolation"});
  RunSpec spec;
  spec.n = to_int<int>("run", "n", required("run", tree, "n"));
  spec.paths = to_int<std::int64_t>("run", "paths", required("run", tree, "paths"));
  if (spec.n < 1) throw ConfigError("[run] n must be >= 1");
  if (spec.paths < 2) throw ConfigError("[run] paths must be >= 2");
  if (auto s = tree.get_optional<std::string>("seed")) {
    spec.seed = to_int<std::uint64_t>("run", "seed", *s);
  }
  if (auto s = tree.get_optional<std::string>("threads")) {
    spec.threads = to_int<int>("run", "threads", *s);
    if (spec.threads < 0) throw ConfigError("[run] threads must be >= 0");
  }
  spec.reference = tree.get<std::string>("reference", "none");
  if (spec.reference != "none" && spec.reference != "analytic") {
    to_double("run", "reference", spec.reference);
  }
  if (auto s = tree.get_optional<std::string>("interpolation")) {
    if (*s == "linear") {
      spec.interpolation = InterpolationMode::Linear;
    } else if (*s == "abs_piecewise_constant") {
      spec.interpolation = InterpolationMode::AbsPiecewiseConstant;
    } else {
      throw ConfigError("[run] interpolation must be 'linear' or 'abs_piecewise_constant'");
    }
  }
  return spec;
}

GencheckSpec parse_gencheck(const pt::ptree& tree) {
  check_keys("gencheck", tree, {"n", "function", "r_in", "r_out", "x_max", "points"});
  GencheckSpec spec;
  if (auto s = tree.get_optional<std::string>("n")) {
    spec.ns.clear();
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(' ');
      const auto e = item.find_last_not_of(' ');
      if (b == std::string::npos) throw ConfigError("[gencheck] empty n entry");
      const int n = to_int<int>("gencheck", "n", item.substr(b, e - b + 1));
      if (n < 1) throw ConfigError("[gencheck] n values must be >= 1");
      spec.ns.push_back(n);
    }
    if (spec.ns.empty()) throw ConfigError("[gencheck] n list is empty");
  }
  spec.function = tree.get<std::string>("function", "quadratic");
  if (spec.function != "quadratic" && spec.function != "bump" &&
      spec.function != "constant") {
    throw ConfigError("[gencheck] function must be quadratic, bump or constant");
  }
  spec.r_in = optional_double("gencheck", tree, "r_in").value_or(0.0);
  spec.r_out = optional_double("gencheck", tree, "r_out").value_or(0.0);
  spec.x_max = optional_double("gencheck", tree, "x_max").value_or(0.0);
  if (auto s = tree.get_optional<std::string>("points")) {
    spec.points = to_int<int>("gencheck", "points", *s);
    if (spec.points < 1) throw ConfigError("[gencheck] points must be >= 1");
  }
  return spec;
}

void put(std::ostream& os, const std::string& key, double v) {
  os << key << " = " << v << '\n';
}

double param(const ModelSpec& m, const std::string& key) {
  return m.params.at(key);
}

}  // namespace

std::string_view to_string(InterpolationMode mode) {
  return mode == InterpolationMode::Linear ? "linear" : "abs_piecewise_constant";
}

std::string_view to_string(Discounting::Kind kind) {
  switch (kind) {
    case Discounting::Kind::None: return "none";
    case Discounting::Kind::ConstantRate: return "constant";
    case Discounting::Kind::RateCoordinate: return "short_rate";
  }
  return "none";
}

ExperimentSpec parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.message() +
                      " (line " + std::to_string(e.line()) + ")");
  }
  ExperimentSpec spec;
  for (const auto& [name, section] : tree) {
    if (name == "model") {
      spec.model = parse_model(section);
    } else if (name == "scheme") {
      spec.scheme = parse_scheme_section(section);
    } else if (name == "payoff") {
      spec.payoff = parse_payoff_section(section);
    } else if (name == "run") {
      spec.run = parse_run(section);
    } else if (name == "gencheck") {
      spec.gencheck = parse_gencheck(section);
    } else {
      throw ConfigError("unknown section [" + name + "]");
    }
  }
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& os, const ExperimentSpec& spec) {
  const auto old = os.precision(17);
  bool first = true;
  auto header = [&](const char* name) {
    if (!first) os << '\n';
    first = false;
    os << '[' << name << "]\n";
  };
  if (spec.model) {
    header("model");
    os << "kind = " << to_string(spec.model->kind) << '\n';
    for (const auto& key : model_keys().at(spec.model->kind)) {
      put(os, key, param(*spec.model, key));
    }
  }
  if (spec.scheme) {
    header("scheme");
    const auto& s = *spec.scheme;
    os << "kind = " << to_string(s.kind) << '\n';
    if (s.mu) put(os, "mu", *s.mu);
    if (s.mu1) put(os, "mu1", *s.mu1);
    if (s.mu2) put(os, "mu2", *s.mu2);
    if (s.mu3) put(os, "mu3", *s.mu3);
    if (s.rho) put(os, "rho", *s.rho);
  }
  if (spec.payoff) {
    header("payoff");
    const auto& p = *spec.payoff;
    os << "kind = " << to_string(p.kind) << '\n';
    put(os, "maturity", p.maturity);
    put(os, "face", p.face);
    put(os, "strike", p.strike);
    put(os, "barrier", p.barrier);
    os << "coord = " << p.coord << '\n';
    os << "scale = " << (p.scale == PriceScale::Price ? "price" : "log") << '\n';
    os << "discount = " << to_string(p.discount) << '\n';
    put(os, "rate", p.rate);
    os << "rate_coord = " << p.rate_coord << '\n';
    if (p.cap) put(os, "cap", *p.cap);
  }
  if (spec.run) {
    header("run");
    const auto& r = *spec.run;
    os << "n = " << r.n << '\n';
    os << "paths = " << r.paths << '\n';
    os << "seed = " << r.seed << '\n';
    os << "threads = " << r.threads << '\n';
    os << "reference = " << r.reference << '\n';
    if (r.interpolation) os << "interpolation = " << to_string(*r.interpolation) << '\n';
  }
  if (spec.gencheck) {
    header("gencheck");
    const auto& g = *spec.gencheck;
    os << "n = ";
    for (std::size_t i = 0; i < g.ns.size(); ++i) os << (i ? "," : "") << g.ns[i];
    os << '\n';
    os << "function = " << g.function << '\n';
    put(os, "r_in", g.r_in);
    put(os, "r_out", g.r_out);
    put(os, "x_max", g.x_max);
    os << "points = " << g.points << '\n';
  }
  os.precision(old);
}

ModelPtr build_model(const ModelSpec& spec) {
  for (const auto& key : model_keys().at(spec.kind)) {
    if (!spec.params.count(key)) {
      throw ConfigError("[model] missing key '" + key + "'");
    }
  }
  auto p = [&](const char* key) { return param(spec, key); };
  try {
    switch (spec.kind) {
      case ModelKind::Cir:
        return make_cir({p("kappa"), p("beta"), p("nu"), p("x0")});
      case ModelKind::Cev: {
        const double b0 = p("b0"), b1 = p("b1");
        return make_cev({[b0, b1](double x) { return b0 - b1 * x; }, std::abs(b1),
                         p("nu"), p("alpha"), p("x0")});
      }
      case ModelKind::Affine:
        return make_affine({p("h0"), p("h1"), p("k0"), p("k1"), p("r0")});
      case ModelKind::Gbm:
        return make_gbm(GbmParams::constant(p("beta"), p("nu"), p("x0")));
      case ModelKind::TwoFactorCir:
        return make_two_factor_cir({p("beta1"), p("beta2"), p("lambda11"),
                                    p("lambda12"), p("lambda21"), p("lambda22"),
                                    p("rho"), p("x01"), p("x02")});
      case ModelKind::GarchSv:
        return make_garch_sv({p("alpha"), p("lambda"), p("nu"), p("beta"),
                              p("rho"), p("v0"), p("s0")});
      case ModelKind::Heston:
        return make_heston({p("kappa"), p("beta"), p("nu"), p("r"), p("rho"),
                            p("v0"), p("s0")});
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[model] ") + e.what());
  }
  throw ConfigError("[model] unsupported kind");
}

IncrementLaw build_law(const SchemeSpec& spec, const Model& model) {
  if (spec.kind != SchemeKind::Proposed) return GaussianLaw{model.dim()};
  auto need = [](const std::optional<double>& v, const char* key) {
    if (!v) throw ConfigError(std::string("[scheme] missing key '") + key + "'");
    return *v;
  };
  try {
    if (model.dim() == 1) return make_two_point(need(spec.mu, "mu"));
    const double model_rho = model.covariance()(0, 1);
    const double rho = spec.rho.value_or(model_rho);
    if (std::abs(rho - model_rho) > 1e-12) {
      throw ConfigError("[scheme] rho must equal the model's correlation");
    }
    const double mu1 = need(spec.mu1 ? spec.mu1 : spec.mu, "mu1");
    if (model.kind() == ModelKind::TwoFactorCir) {
      return make_bivariate_two_point(mu1, need(spec.mu2, "mu2"), rho);
    }
    return make_linear_mix(rho, mu1, spec.mu3.value_or(1.0));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("[scheme] ") + e.what());
  }
}

PathFunctional build_payoff(const PayoffSpec& s) {
  Discounting disc;
  switch (s.discount) {
    case Discounting::Kind::None: disc = Discounting::none(); break;
    case Discounting::Kind::ConstantRate: disc = Discounting::constant(s.rate); break;
    case Discounting::Kind::RateCoordinate: disc = Discounting::short_rate(s.rate_coord); break;
  }
  PathFunctional g;
  switch (s.kind) {
    case PayoffKind::Bond:
      g = bond_payoff(s.face, s.maturity, s.rate_coord);
      g.discount = disc;
      break;
    case PayoffKind::EuroCall: g = european_call(s.strike, s.maturity, s.coord, s.scale, disc); break;
    case PayoffKind::EuroPut: g = european_put(s.strike, s.maturity, s.coord, s.scale, disc); break;
    case PayoffKind::AsianCall: g = asian_call(s.strike, s.maturity, s.coord, s.scale, disc); break;
    case PayoffKind::AsianPut: g = asian_put(s.strike, s.maturity, s.coord, s.scale, disc); break;
    case PayoffKind::LookbackMax: g = lookback_max(s.maturity, s.coord, s.scale, disc); break;
    case PayoffKind::UpAndOutCall:
      g = up_and_out_call(s.strike, s.barrier, s.maturity, s.coord, s.scale, disc);
      break;
    case PayoffKind::BinaryBelow:
      g = binary_below(s.barrier, s.maturity, s.coord, s.scale, disc);
      break;
    case PayoffKind::Custom:
      throw ConfigError("[payoff] custom payoffs cannot be configured from a file");
  }
  if (s.cap) {
    try {
      g = truncate(g, *s.cap);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[payoff] ") + e.what());
    }
  }
  return g;
}

std::optional<double> resolve_reference(const ExperimentSpec& spec,
                                        const Model& model) {
  if (!spec.run || spec.run->reference == "none") return std::nullopt;
  if (spec.run->reference != "analytic") {
    return to_double("run", "reference", spec.run->reference);
  }
  if (!spec.payoff || !spec.model) {
    throw ConfigError("[run] analytic reference needs [model] and [payoff]");
  }
  const auto& p = *spec.payoff;
  const auto& m = *spec.model;
  auto mp = [&](const char* k) { return param(m, k); };
  if (p.cap) throw ConfigError("[run] no analytic reference for a truncated payoff");
  if (m.kind == ModelKind::Cir && p.kind == PayoffKind::Bond &&
      p.discount == Discounting::Kind::RateCoordinate && p.rate_coord == 0) {
    return cir_bond_price(mp("kappa"), mp("beta"), mp("nu"), mp("x0"), p.maturity,
                          p.face);
  }
  const bool vanilla = p.kind == PayoffKind::EuroCall || p.kind == PayoffKind::EuroPut;
  const bool call = p.kind == PayoffKind::EuroCall;
  if (m.kind == ModelKind::Heston && vanilla && p.coord == 1 &&
      p.scale == PriceScale::LogPrice &&
      p.discount == Discounting::Kind::ConstantRate && p.rate == mp("r")) {
    const auto* hp = heston_params(model);
    try {
      return call ? heston_call_price(*hp, p.strike, p.maturity)
                  : heston_put_price(*hp, p.strike, p.maturity);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[run] ") + e.what());
    }
  }
  if (m.kind == ModelKind::Gbm && vanilla && p.coord == 0 &&
      p.scale == PriceScale::Price &&
      p.discount == Discounting::Kind::ConstantRate && p.rate == mp("beta")) {
    try {
      return call ? black_scholes_call(mp("x0"), p.strike, p.rate, mp("nu"), p.maturity)
                  : black_scholes_put(mp("x0"), p.strike, p.rate, mp("nu"), p.maturity);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("[run] ") + e.what());
    }
  }
  throw ConfigError("[run] no analytic reference for this model and payoff");
}

ExperimentConfig build_experiment(const ExperimentSpec& spec) {
  if (!spec.model) throw ConfigError("missing [model] section");
  if (!spec.scheme) throw ConfigError("missing [scheme] section");
  if (!spec.payoff) throw ConfigError("missing [payoff] section");
  if (!spec.run) throw ConfigError("missing [run] section");
  ExperimentConfig c;
  c.model = build_model(*spec.model);
  c.scheme = spec.scheme->kind;
  c.law = build_law(*spec.scheme, *c.model);
  c.payoff = build_payoff(*spec.payoff);
  const int coord_limit = c.model->dim();
  if (spec.payoff->coord >= coord_limit || spec.payoff->rate_coord >= coord_limit ||
      spec.payoff->coord < 0 || spec.payoff->rate_coord < 0) {
    throw ConfigError("[payoff] coordinate outside the model dimension");
  }
  c.n = spec.run->n;
  c.paths = spec.run->paths;
  c.seed = spec.run->seed;
  c.threads = spec.run->threads;
  c.interpolation = spec.run->interpolation;
  c.reference = resolve_reference(spec, *c.model);
  return c;
}

}  // namespace nneuler

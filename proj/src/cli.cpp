#include "l1pred/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "l1pred/errors.hpp"
#include "l1pred/estimator.hpp"
#include "l1pred/loss_transform.hpp"
#include "l1pred/oracle.hpp"
#include "l1pred/radial_model.hpp"
#include "l1pred/search.hpp"
#include "l1pred/uniform_closed.hpp"
#include "l1pred/validation.hpp"

namespace l1pred::cli {

namespace {

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

double parse_number(std::string_view token, std::string_view context) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ConfigError("invalid number '" + std::string(token) + "' in " + std::string(context));
  }
  return v;
}

std::vector<double> parse_values(std::string_view text, std::string_view context) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(parse_number(token, context));
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  return out;
}

CenterEstimator make_estimator(const std::string& name, double m) {
  if (name == "raw") return CenterEstimator::raw();
  if (name == "mle-ball") return CenterEstimator::mle_ball(m);
  throw ConfigError("unknown estimator '" + name + "', expected raw or mle-ball");
}

bool is_uniform_ball(const RadialModel& model) { return std::holds_alternative<UniformBallLaw>(model.kind()); }

// Metadata header: every line needed to rerun the job, no timestamps.
class Header {
 public:
  explicit Header(std::string command) : rerun_("l1pred " + std::move(command)) {}

  void flag(const std::string& name, const std::string& value) {
    rerun_ += " --" + name + " " + value;
    lines_.push_back(name + ": " + value);
  }
  void note(const std::string& line) { lines_.push_back(line); }

  void write(std::ostream& out) const {
    out << "# " << rerun_ << "\n";
    for (const auto& l : lines_) out << "# " << l << "\n";
  }

 private:
  std::string rerun_;
  std::vector<std::string> lines_;
};

Grid grid_or(const std::optional<Grid>& g, std::string_view fallback, std::string_view flag) {
  return g ? *g : parse_grid(fallback, flag);
}

}  // namespace

std::vector<double> Grid::points() const { return make_grid(lo, hi, step); }

Grid parse_grid(std::string_view text, std::string_view flag) {
  const std::string context = "--" + std::string(flag) + " '" + std::string(text) + "'";
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) throw ConfigError("grid " + context + " must have the form lo:hi:step");
  Grid g{parse_number(parts[0], context), parse_number(parts[1], context), parse_number(parts[2], context),
         std::string(text)};
  if (!(g.step > 0.0)) throw ConfigError("grid " + context + " needs a positive step");
  if (g.hi < g.lo) throw ConfigError("grid " + context + " is empty: hi < lo");
  return g;
}

void cmd_risk_curve(const RunConfig& config, std::ostream& out) {
  if (config.p.empty()) throw ConfigError("risk-curve needs --p");
  if (!config.estimator.empty() && config.estimator != "raw") {
    throw ConfigError("risk-curve computes the constant risk of the raw estimator; use restricted-curve for " +
                      config.estimator);
  }
  const auto p = parse_model(config.p);
  const auto q = parse_model(config.q.empty() ? config.p : config.q);
  const auto gamma = parse_loss_transform(config.gamma);
  const auto grid = grid_or(config.c_grid, "1:4:0.01", "c-grid");
  const auto points = grid.points();

  const auto curve = risk_curve(p, q, gamma, points, config.quad, config.mc.workers);
  const double r1 = constant_risk(p, q, 1.0, gamma, config.quad);
  const auto best = argmin(curve.values);

  Header h("risk-curve");
  h.flag("p", p.describe());
  h.flag("q", q.describe());
  h.flag("gamma", gamma.describe());
  h.flag("c-grid", grid.text);
  h.flag("quad-nodes", std::to_string(config.quad.nodes));
  h.flag("seed", std::to_string(config.mc.seed));
  h.note("R(1) = " + num(r1));
  h.note("grid minimum: c = " + num(points[best]) + ", risk = " + num(curve.values[best]));
  h.write(out);
  out << "c,risk,std_err,ratio_to_R1\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out << num(points[i]) << "," << num(curve.values[i]) << "," << num(curve.std_errs[i]) << ","
        << num(curve.values[i] / r1) << "\n";
  }
}

void cmd_restricted_curve(const RunConfig& config, std::ostream& out, std::ostream& log) {
  if (config.p.empty()) throw ConfigError("restricted-curve needs --p");
  if (!config.lambda_grid) throw ConfigError("restricted-curve needs --lambda-grid");
  const auto p = parse_model(config.p);
  const auto q = parse_model(config.q.empty() ? config.p : config.q);
  const auto gamma = parse_loss_transform(config.gamma);
  const std::string est_name = config.estimator.empty() ? "mle-ball" : config.estimator;
  const auto estimator = make_estimator(est_name, config.m);
  const auto c_grid = grid_or(config.c_grid, "1:4:0.01", "c-grid");
  const auto lambdas = config.lambda_grid->points();

  const auto best = optimal_c(p, q, gamma, config.quad, SearchSpec{c_grid.lo, c_grid.hi, c_grid.step, 1e-4});
  double c1 = 0.0;
  std::string c1_source;
  if (config.c1) {
    c1 = *config.c1;
    if (!(c1 > 0.0)) throw ConfigError("--c1 must be positive");
    c1_source = "given";
  } else {
    std::vector<double> inside;
    const double cap = est_name == "mle-ball" ? config.m : INFINITY;
    for (double l : lambdas) {
      if (l <= cap) inside.push_back(l);
    }
    if (inside.empty()) inside = {0.0};
    log << "searching c1 over " << inside.size() << " lambda values\n";
    const auto res = c1_inf(p, q, estimator, inside, gamma, config.mc,
                            SearchSpec{c_grid.lo, c_grid.hi, c_grid.step, 1e-4}, config.quad);
    c1 = res.c1;
    c1_source = "infimum of per-lambda minimizers, bootstrap spread " + num(res.spread) +
                (res.boundary ? ", at the grid boundary" : "");
  }
  const double raw_c1 = constant_risk(p, q, c1, gamma, config.quad);

  Header h("restricted-curve");
  h.flag("p", p.describe());
  h.flag("q", q.describe());
  h.flag("gamma", gamma.describe());
  h.flag("estimator", est_name);
  h.flag("m", num(config.m));
  h.flag("lambda-grid", config.lambda_grid->text);
  h.flag("c-grid", c_grid.text);
  h.flag("quad-nodes", std::to_string(config.quad.nodes));
  h.flag("mc-n", std::to_string(config.mc.n));
  h.flag("seed", std::to_string(config.mc.seed));
  if (config.c1) h.flag("c1", num(c1));
  h.note("c1 = " + num(c1) + " (" + c1_source + ")");
  h.note("raw-estimator optimum: c* = " + num(best.c_star) + ", risk = " + num(best.risk));
  h.write(out);
  out << "lambda,risk_c1,risk_plugin,risk_rawx_cstar,risk_rawx_c1,std_err_c1,std_err_plugin,std_err_difference\n";
  for (double lambda : lambdas) {
    const auto pair = restricted_risk_pair(p, q, c1, 1.0, estimator, lambda, gamma, config.mc, config.quad);
    out << num(lambda) << "," << num(pair.a.value) << "," << num(pair.b.value) << "," << num(best.risk) << ","
        << num(raw_c1) << "," << num(pair.a.std_err) << "," << num(pair.b.std_err) << ","
        << num(pair.difference.std_err) << "\n";
  }
}

void cmd_uniform(const RunConfig& config, std::ostream& out, std::ostream& log) {
  const auto grid = grid_or(config.c_grid, "0.2:4:0.01", "c-grid");
  const auto points = grid.points();
  if (!(config.m > 0.0)) throw ConfigError("--m must be positive");

  std::optional<RadialModel> x_override;
  std::optional<RadialModel> y_override;
  if (!config.p.empty()) x_override = parse_model(config.p);
  if (!config.q.empty()) y_override = parse_model(config.q);
  std::vector<int> dims = config.dims.empty() ? std::vector<int>{1, 2, 3, 4, 5} : config.dims;
  if (x_override) dims = {x_override->dim()};
  if (y_override) {
    if (x_override && x_override->dim() != y_override->dim()) throw ConfigError("--p and --q dimensions differ");
    dims = {y_override->dim()};
  }
  for (int d : dims) {
    if (d < 1) throw ConfigError("dimension must be positive, got " + std::to_string(d));
  }

  Header h("uniform");
  if (x_override) h.flag("p", x_override->describe());
  if (y_override) h.flag("q", y_override->describe());
  h.flag("m", num(config.m));
  h.flag("c-grid", grid.text);
  if (!x_override && !y_override) {
    std::string ds;
    for (int d : dims) ds += (ds.empty() ? "" : ",") + std::to_string(d);
    h.flag("dims", ds);
  }
  h.flag("mc-n", std::to_string(config.mc.n));
  h.flag("seed", std::to_string(config.mc.seed));

  std::ostringstream body;
  body << "d,x_law,c,risk,std_err,ratio_R1_over_Rc\n";
  for (int d : dims) {
    const RadialModel y = y_override ? *y_override : RadialModel::uniform_ball(d, config.m);
    std::vector<RadialModel> xs;
    if (x_override) {
      xs.push_back(*x_override);
    } else {
      xs.push_back(RadialModel::uniform_ball(d, config.m));
      xs.push_back(RadialModel::normal(d, 1.0));
    }
    for (const auto& x : xs) {
      std::function<std::pair<double, double>(double)> risk;
      if (is_uniform_ball(y)) {
        const double radius = y.support_radius();
        const auto law = AbsLaw::from_model(x);
        if (d == 1) {
          risk = [law, radius](double c) { return std::pair{univariate_uniform_risk(law, c, radius), 0.0}; };
        } else {
          risk = [law, d, radius](double c) { return std::pair{multivariate_uniform_risk(law, d, c, radius), 0.0}; };
        }
      } else {
        log << "warning: " << y.describe()
            << " is not a uniform ball; no closed form applies, using the Monte Carlo oracle\n";
        h.note("risk from the Monte Carlo oracle for Y ~ " + y.describe());
        const auto raw = CenterEstimator::raw();
        const Point origin(static_cast<std::size_t>(d), 0.0);
        const auto mc = config.mc;
        risk = [x, y, raw, origin, mc](double c) {
          const auto e = oracle::mc_risk(x, y, raw, c, origin, LossTransform::identity(), std::max<std::size_t>(mc.n, 1000),
                                         1000, mc.seed, mc.workers);
          return std::pair{e.value, e.std_err};
        };
      }
      const double r1 = risk(1.0).first;
      for (double c : points) {
        const auto [v, se] = risk(c);
        body << d << "," << x.describe() << "," << num(c) << "," << num(v) << "," << num(se) << "," << num(r1 / v)
             << "\n";
      }
    }
  }
  h.write(out);
  out << body.str();
}

void cmd_bayes_uniform(const RunConfig& config, std::ostream& out) {
  std::vector<double> sample = config.values;
  if (!config.values_file.empty()) {
    std::ifstream in(config.values_file);
    if (!in) throw ConfigError("cannot read sample file '" + config.values_file + "'");
    std::stringstream text;
    text << in.rdbuf();
    const auto more = parse_values(text.str(), "sample file '" + config.values_file + "'");
    sample.insert(sample.end(), more.begin(), more.end());
  }
  const auto dens = bayes_uniform_predictive(sample, config.A, config.B);
  out << "U(" << num(dens.lower()) << ", " << num(dens.upper()) << ")\n";
  out << "n = " << sample.size() << ", midrange = " << num(dens.center) << ", density = " << num(0.5 / dens.half_width)
      << " on the interval\n";
}

bool cmd_validate(const RunConfig& config, std::ostream& out) {
  validation::Options opts;
  if (config.tier == "quick") {
    opts.tier = validation::Tier::quick;
  } else if (config.tier == "full") {
    opts.tier = validation::Tier::full;
  } else {
    throw ConfigError("unknown tier '" + config.tier + "', expected quick or full");
  }
  opts.seed = config.mc.seed;
  std::vector<int> ids = config.criteria;
  if (ids.empty()) {
    for (int i = 1; i <= validation::kCriterionCount; ++i) ids.push_back(i);
  }
  out << "# l1pred validate --tier " << config.tier << " --seed " << opts.seed << "\n";
  bool all = true;
  for (int id : ids) {
    const auto res = validation::run_criterion(id, opts);
    all = all && res.passed();
    out << res.summary() << "\n";
    for (const auto& c : res.checks) {
      if (c.passed) continue;
      out << "    FAIL " << c.name << ": observed " << num(c.observed) << ", expected " << num(c.expected);
      if (c.tolerance > 0.0) out << ", tolerance " << num(c.tolerance);
      if (!c.detail.empty()) out << " [" << c.detail << "]";
      out << "\n";
    }
    out.flush();
  }
  out << (all ? "all criteria passed" : "validation FAILED") << "\n";
  return all;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  std::string c_grid;
  std::string lambda_grid;
  std::string values;
  double c1 = 0.0;

  CLI::App app{"Integrated L1 risk of scale-expanded plug-in predictive densities"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto models = [&](CLI::App* sub) {
    sub->add_option("--p", config.p, "model of X, e.g. normal:d=3,var=1");
    sub->add_option("--q", config.q, "model of Y (defaults to --p)");
    sub->add_option("--gamma", config.gamma, "loss transform: identity or power:k");
  };
  auto budgets = [&](CLI::App* sub) {
    sub->add_option("--quad-nodes", config.quad.nodes, "quadrature nodes per axis");
    sub->add_option("--mc-n", config.mc.n, "Monte Carlo draws");
    sub->add_option("--seed", config.mc.seed, "random seed");
    sub->add_option("--workers", config.mc.workers, "worker threads (0 = hardware)");
    sub->add_option("--out", config.out, "output file (default stdout)");
  };

  auto* rc = app.add_subcommand("risk-curve", "constant risk of the raw plug-in over a c grid");
  models(rc);
  budgets(rc);
  rc->add_option("--c-grid", c_grid, "lo:hi:step (default 1:4:0.01)");
  rc->add_option("--estimator", config.estimator, "raw");

  auto* rs = app.add_subcommand("restricted-curve", "risk as a function of ||theta|| for a restricted estimator");
  models(rs);
  budgets(rs);
  rs->add_option("--lambda-grid", lambda_grid, "lo:hi:step")->required();
  rs->add_option("--c-grid", c_grid, "search grid for c* and c1 (default 1:4:0.01)");
  rs->add_option("--m", config.m, "radius of the parameter ball");
  rs->add_option("--estimator", config.estimator, "raw or mle-ball (default mle-ball)");
  auto* c1_opt = rs->add_option("--c1", c1, "use this expansion instead of searching for c1");

  auto* un = app.add_subcommand("uniform", "risk ratios R(1)/R(c) for a uniform-ball Y");
  un->add_option("--p", config.p, "single X law instead of the uniform-ball and normal pair");
  un->add_option("--q", config.q, "Y law (default uniball with radius --m)");
  un->add_option("--m", config.m, "ball radius");
  un->add_option("--dims", config.dims, "dimensions (default 1 2 3 4 5)")->delimiter(',');
  un->add_option("--c-grid", c_grid, "lo:hi:step (default 0.2:4:0.01)");
  budgets(un);

  auto* by = app.add_subcommand("bayes-uniform", "posterior-median predictive density for uniform models");
  by->add_option("--values", values, "comma-separated sample");
  by->add_option("--file", config.values_file, "file of whitespace or comma separated values");
  by->add_option("--A", config.A, "half-width of the model for X")->required();
  by->add_option("--B", config.B, "half-width of the model for Y")->required();

  auto* va = app.add_subcommand("validate", "run the acceptance suite");
  va->add_option("--tier", config.tier, "quick or full");
  va->add_option("--seed", config.mc.seed, "random seed");
  va->add_option("--criterion", config.criteria, "run only these criteria")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::config_error;
  }

  try {
    if (!c_grid.empty()) config.c_grid = parse_grid(c_grid, "c-grid");
    if (!lambda_grid.empty()) config.lambda_grid = parse_grid(lambda_grid, "lambda-grid");
    if (c1_opt->count() > 0) config.c1 = c1;
    if (!values.empty()) config.values = parse_values(values, "--values");

    std::ostringstream buffer;
    std::ostream& sink = config.out.empty() ? out : static_cast<std::ostream&>(buffer);
    int code = ExitCode::ok;
    if (rc->parsed()) {
      config.command = "risk-curve";
      cmd_risk_curve(config, sink);
    } else if (rs->parsed()) {
      config.command = "restricted-curve";
      cmd_restricted_curve(config, sink, err);
    } else if (un->parsed()) {
      config.command = "uniform";
      cmd_uniform(config, sink, err);
    } else if (by->parsed()) {
      config.command = "bayes-uniform";
      cmd_bayes_uniform(config, sink);
    } else if (va->parsed()) {
      config.command = "validate";
      code = cmd_validate(config, sink) ? ExitCode::ok : ExitCode::validation_failure;
    }
    if (!config.out.empty()) {
      std::ofstream file(config.out, std::ios::binary);
      if (!file) throw ConfigError("cannot write '" + config.out + "'");
      file << buffer.str();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return ExitCode::numerical_failure;
  }
}

}  // namespace l1pred::cli

#include "heatwalk/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "heatwalk/oracle.hpp"
#include "heatwalk/sampling.hpp"
#include "heatwalk/walker.hpp"

namespace heatwalk::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " must be a number, got '" + value + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + " must be a non-negative integer, got '" + value + "'");
  }
}

std::vector<double> to_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: " + key + " has an empty entry");
    out.push_back(to_double(key, item));
  }
  if (out.empty()) throw ConfigError("config: " + key + " must list at least one value");
  return out;
}

Domain parse_domain_checked(const std::string& text) {
  try {
    return parse_domain(text);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
}

std::optional<std::string>* field_by_key(RawOptions& raw, const std::string& key) {
  if (key == "domain") return &raw.domain;
  if (key == "dim") return &raw.dim;
  if (key == "f") return &raw.f;
  if (key == "f0") return &raw.f0;
  if (key == "preset") return &raw.preset;
  if (key == "t") return &raw.t;
  if (key == "x") return &raw.x;
  if (key == "eps") return &raw.eps;
  if (key == "walks") return &raw.walks;
  if (key == "seed") return &raw.seed;
  if (key == "workers") return &raw.workers;
  if (key == "out") return &raw.out;
  if (key == "bins") return &raw.bins;
  if (key == "axis") return &raw.axis;
  if (key == "values") return &raw.values;
  return nullptr;
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RawOptions load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  RawOptions raw;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto* field = field_by_key(raw, key);
    if (!field)
      throw ConfigError("config: " + path + ":" + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    if (field->has_value())
      throw ConfigError("config: " + path + ":" + std::to_string(line_no) + ": duplicate key '" +
                        key + "'");
    *field = value;
  }
  return raw;
}

void merge_defaults_from(RawOptions& target, const RawOptions& fallback) {
  const auto fill = [](std::optional<std::string>& dst, const std::optional<std::string>& src) {
    if (!dst && src) dst = src;
  };
  fill(target.domain, fallback.domain);
  fill(target.dim, fallback.dim);
  fill(target.f, fallback.f);
  fill(target.f0, fallback.f0);
  fill(target.preset, fallback.preset);
  fill(target.t, fallback.t);
  fill(target.x, fallback.x);
  fill(target.eps, fallback.eps);
  fill(target.walks, fallback.walks);
  fill(target.seed, fallback.seed);
  fill(target.workers, fallback.workers);
  fill(target.out, fallback.out);
  fill(target.bins, fallback.bins);
  fill(target.axis, fallback.axis);
  fill(target.values, fallback.values);
}

std::pair<std::string, std::string> preset_expressions(const std::string& preset) {
  if (preset == "hyp1")
    return {"exp(t)*prod(i, x[i]*(1 - x[i]))", "prod(i, x[i]*(1 - x[i]))"};
  if (preset == "hyp2") return {"(1 + cos(2*pi*t))*norm(x)", "2*norm(x)"};
  if (preset == "eigen") return {"0", "prod(i, sin(pi*x[i]))"};
  throw ConfigError("config: unknown preset '" + preset + "' (expected hyp1, hyp2 or eigen)");
}

Options resolve_options(const RawOptions& raw) {
  Options opt;

  // Domain text plus optional dim consistency / family completion.
  std::string domain = raw.domain.value_or("");
  if (domain.empty()) {
    domain = raw.dim ? "hypercube(" + *raw.dim + ")" : "hypercube(3)";
  } else if (domain.find('(') == std::string::npos) {
    if (!raw.dim) throw ConfigError("config: domain family '" + domain + "' needs dim");
    if (domain == "hypercube")
      domain = "hypercube(" + *raw.dim + ")";
    else if (domain == "ball" || domain == "halfball")
      domain += "(" + *raw.dim + ", 1)";
    else
      throw ConfigError("config: unknown domain family '" + domain + "'");
  }
  const Domain parsed = parse_domain_checked(domain);
  if (raw.dim && raw.domain && raw.domain->find('(') != std::string::npos) {
    const std::uint64_t dim = to_u64("dim", *raw.dim);
    if (dim != parsed.dimension())
      throw ConfigError("config: dim = " + *raw.dim + " contradicts domain '" + domain + "'");
  }
  opt.domain_text = parsed.to_text();

  if (raw.preset) {
    if (raw.f || raw.f0)
      throw ConfigError("config: give either preset or explicit f/f0, not both");
    opt.preset = *raw.preset;
    preset_expressions(opt.preset);  // validate the name early
  } else if (raw.f || raw.f0) {
    if (!raw.f || !raw.f0) throw ConfigError("config: f and f0 must be given together");
    opt.f_text = *raw.f;
    opt.f0_text = *raw.f0;
  } else {
    opt.preset = "hyp1";
  }

  if (raw.t) opt.t = to_double("t", *raw.t);
  if (!(opt.t > 0.0)) throw ConfigError("config: t must be positive");
  if (raw.x) opt.x_text = *raw.x;
  if (raw.eps) opt.eps = to_double("eps", *raw.eps);
  if (!(opt.eps > 0.0)) throw ConfigError("config: eps must be positive");
  if (raw.walks) opt.walks = to_u64("walks", *raw.walks);
  if (opt.walks < 2) throw ConfigError("config: walks must be at least 2");
  if (raw.seed) {
    if (*raw.seed == "random") {
      std::random_device rd;
      opt.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    } else {
      opt.seed = to_u64("seed", *raw.seed);
    }
  }
  if (raw.workers) {
    const std::uint64_t w = to_u64("workers", *raw.workers);
    if (w == 0) throw ConfigError("config: workers must be >= 1");
    opt.workers = static_cast<int>(w);
  }
  if (raw.out) opt.out_path = *raw.out;
  if (raw.bins) {
    opt.bins = static_cast<std::size_t>(to_u64("bins", *raw.bins));
    if (opt.bins == 0) throw ConfigError("config: bins must be >= 1");
  }
  if (raw.axis) {
    opt.axis = *raw.axis;
    if (opt.axis != "eps" && opt.axis != "time" && opt.axis != "position" &&
        opt.axis != "dimension")
      throw ConfigError("config: axis must be one of eps, time, position, dimension");
  }
  if (raw.values) opt.sweep_values = to_double_list("values", *raw.values);
  return opt;
}

namespace {

Point parse_start_point(const std::string& text, const Domain& domain) {
  if (trim(text) == "center") return domain.center_point();
  Point x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) x.push_back(to_double("x", trim(item)));
  if (x.size() != domain.dimension())
    throw ConfigError("config: x has " + std::to_string(x.size()) +
                      " coordinates, domain needs " + std::to_string(domain.dimension()));
  return x;
}

BoundaryData data_from_expressions(const std::string& f_text, const std::string& f0_text,
                                   std::size_t d) {
  try {
    auto f = expr::Expr::parse(f_text, d);
    auto f0 = expr::Expr::parse(f0_text, d);
    BoundaryData data;
    data.f = [f](double t, const Point& x) { return f.eval(t, x); };
    data.f0 = [f0](const Point& x) { return f0.eval(0.0, x); };
    return data;
  } catch (const expr::ParseError& err) {
    throw ConfigError(std::string("config: bad expression: ") + err.what());
  }
}

BoundaryData make_problem_data(const Options& options, const Domain& domain) {
  std::string f_text = options.f_text, f0_text = options.f0_text;
  if (!options.preset.empty()) std::tie(f_text, f0_text) = preset_expressions(options.preset);
  BoundaryData data = data_from_expressions(f_text, f0_text, domain.dimension());
  try {
    verify_compatibility(data, domain);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("config: ") + err.what());
  }
  return data;
}

Problem build_problem_for(const Options& options, const Domain& domain) {
  Problem problem{domain, make_problem_data(options, domain), {}};
  problem.x = parse_start_point(options.x_text, problem.domain);
  if (!problem.domain.contains(problem.x))
    throw ConfigError("config: start point x lies outside the domain");
  return problem;
}

EstimateOptions estimate_options(const Options& options) {
  EstimateOptions eo;
  eo.workers = options.workers;
  return eo;
}

void write_solve_header(std::ostream& out, std::size_t d) {
  out << "t";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << i;
  out << ",mean,std_error,ci_lo,ci_hi,mean_steps,boundary_stop_fraction,n_walks,eps,seed\n";
}

void write_stats_columns(std::ostream& out, const Estimate& est, const Options& options,
                         double eps) {
  out << "," << fmt17(est.mean) << "," << fmt17(est.std_error) << "," << fmt17(est.ci_lo) << ","
      << fmt17(est.ci_hi) << "," << fmt17(est.mean_steps) << ","
      << fmt17(est.boundary_stop_fraction) << "," << est.n_samples << "," << fmt17(eps) << ","
      << options.seed << "\n";
}

std::string join_point(const Point& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out += ';';
    out += fmt17(x[i]);
  }
  return out;
}

std::vector<double> default_sweep_values(const std::string& axis) {
  std::vector<double> values;
  if (axis == "eps") {
    for (int n = 4; n <= 16; ++n) values.push_back(std::pow(0.5, n));
  } else if (axis == "time") {
    for (int k = 1; k <= 40; ++k) values.push_back(0.05 * k);
  } else if (axis == "position") {
    for (int k = 1; k <= 19; ++k) values.push_back(0.05 * k);
  } else if (axis == "dimension") {
    for (int d = 2; d <= 10; ++d) values.push_back(d);
  }
  return values;
}

Point position_for_sweep(const Domain& domain, double u) {
  Point x(domain.dimension(), 0.0);
  if (domain.kind() == ShapeKind::Hypercube) {
    for (double& v : x) v = u;
  } else {
    x[0] = u;
  }
  return x;
}

Domain domain_for_dimension(const Domain& family, std::size_t d) {
  switch (family.kind()) {
    case ShapeKind::Hypercube: return Domain::unit_hypercube(d);
    case ShapeKind::Ball: {
      const auto [lo, hi] = family.bounding_box();
      return Domain::ball(d, 0.5 * (hi[0] - lo[0]));
    }
    case ShapeKind::HalfBall: {
      const auto [lo, hi] = family.bounding_box();
      return Domain::half_ball(d, hi[0]);
    }
  }
  throw ConfigError("config: unsupported domain family for a dimension sweep");
}

}  // namespace

Problem build_problem(const Options& options) {
  return build_problem_for(options, parse_domain_checked(options.domain_text));
}

int run_solve(const Options& options, std::ostream& out) {
  const Problem problem = build_problem(options);
  const Estimate est = estimate_solution(problem.domain, problem.data, options.t, problem.x,
                                         options.eps, options.walks, options.seed,
                                         estimate_options(options));
  write_solve_header(out, problem.domain.dimension());
  out << fmt17(options.t);
  for (double xi : problem.x) out << "," << fmt17(xi);
  write_stats_columns(out, est, options, options.eps);
  return 0;
}

int run_sweep(const Options& options, std::ostream& out) {
  if (options.axis.empty())
    throw ConfigError("config: sweep needs an axis (eps, time, position or dimension)");
  std::vector<double> values =
      options.sweep_values.empty() ? default_sweep_values(options.axis) : options.sweep_values;

  out << "axis,value,t,x,mean,std_error,ci_lo,ci_hi,mean_steps,boundary_stop_fraction,"
         "n_walks,eps,seed\n";

  const Domain base_domain = parse_domain_checked(options.domain_text);

  for (double value : values) {
    Domain domain = base_domain;
    double t = options.t;
    double eps = options.eps;
    Point x;
    if (options.axis == "eps") {
      if (!(value > 0.0)) throw ConfigError("config: eps sweep values must be positive");
      eps = value;
      x = parse_start_point(options.x_text, domain);
    } else if (options.axis == "time") {
      if (!(value > 0.0)) throw ConfigError("config: time sweep values must be positive");
      t = value;
      x = parse_start_point(options.x_text, domain);
    } else if (options.axis == "position") {
      x = position_for_sweep(domain, value);
    } else {  // dimension
      if (value < 1.0 || value != std::floor(value))
        throw ConfigError("config: dimension sweep values must be positive integers");
      domain = domain_for_dimension(base_domain, static_cast<std::size_t>(value));
      x = domain.center_point();
    }
    if (!domain.contains(x))
      throw ConfigError("config: sweep start point (" + join_point(x) + ") leaves the domain");

    const BoundaryData data = make_problem_data(options, domain);
    const Estimate est = estimate_solution(domain, data, t, x, eps, options.walks, options.seed,
                                           estimate_options(options));
    out << options.axis << "," << fmt17(value) << "," << fmt17(t) << "," << join_point(x);
    write_stats_columns(out, est, options, eps);
  }
  return 0;
}

int run_histogram(const Options& options, std::ostream& out) {
  const Problem problem = build_problem(options);
  const WalkStatistics stats =
      walk_statistics(problem.domain, problem.data, options.t, problem.x, options.eps,
                      options.walks, options.seed, options.bins, estimate_options(options));

  out << "series,bin_index,bin_lo,bin_hi,value\n";
  const auto write_hist = [&](const char* name, const Histogram& h) {
    const double width =
        (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      out << name << "," << k << "," << fmt17(h.lo + width * static_cast<double>(k)) << ","
          << fmt17(k + 1 == h.counts.size() ? h.hi : h.lo + width * static_cast<double>(k + 1))
          << "," << h.counts[k] << "\n";
    }
  };
  write_hist("payoff", stats.payoffs);
  write_hist("steps", stats.step_counts);
  out << "boundary_stop_fraction,0,0,0," << fmt17(stats.boundary_stop_fraction) << "\n";
  return 0;
}

namespace {

struct CheckReport {
  bool ok = true;
  void report(std::ostream& out, const std::string& name, bool pass, const std::string& detail) {
    out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    ok = ok && pass;
  }
};

}  // namespace

int run_validate(const Options& options, std::ostream& out, bool corrupt_psi) {
  CheckReport report;
  const EstimateOptions eo = estimate_options(options);
  EstimateOptions eo_martingale = eo;
  if (corrupt_psi)
    eo_martingale.psi_override = [](std::size_t d, double s) { return 0.8 * psi(d, s); };

  // Radial sampler moments against the closed-form mean.
  for (std::size_t d : {1, 2, 3, 4, 5, 10}) {
    const std::size_t n = 200'000;
    RngStream stream(options.seed, 1000 + d);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = sample_radius(d, stream);
      sum += r;
      sum_sq += r * r;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1);
    const double se = std::sqrt(var / static_cast<double>(n));
    const double expected = expected_radius(d);
    const double gap = std::abs(mean - expected);
    report.report(out, "sampler-moment d=" + std::to_string(d), gap <= 4.0 * se,
                  "|mean - " + fmt17(expected) + "| = " + fmt17(gap) + ", 4 SE = " +
                      fmt17(4.0 * se));
  }

  // Mean value identity for two reference temperatures.
  for (std::size_t d : {2, 3}) {
    Point x0(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) x0[i] = 0.3 - 0.1 * static_cast<double>(i);
    const Temperature coordinate{[](double, const Point& x) { return x[0]; }, 1.0};
    const Temperature radial{[d](double t, const Point& x) {
                               return 2.0 * static_cast<double>(d) * t + norm2(x) * norm2(x);
                             },
                             2.0 * static_cast<double>(d)};
    try {
      const double r1 = mean_value_check(coordinate, 1.0, x0, 0.1, 1e-6);
      report.report(out, "mean-value h=x0 d=" + std::to_string(d), r1 <= 1e-8,
                    "residual = " + fmt17(r1));
      const double r2 = mean_value_check(radial, 1.0, x0, 0.1, 1e-6);
      report.report(out, "mean-value h=2dt+|x|^2 d=" + std::to_string(d), r2 <= 1e-6,
                    "residual = " + fmt17(r2));
    } catch (const QuadratureError& err) {
      report.report(out, "mean-value d=" + std::to_string(d), false, err.what());
    }
  }

  // Martingale identity on finished walks.
  for (std::size_t d : {2, 3}) {
    const Domain domain = Domain::unit_hypercube(d);
    const Point center = domain.center_point();
    const double dd = static_cast<double>(d);
    const Temperature temps[] = {
        {[](double, const Point& x) { return x[0]; }, 1.0},
        {[dd](double t, const Point& x) { return 2.0 * dd * t + norm2(x) * norm2(x); }, 2.0 * dd},
    };
    const char* names[] = {"h=x0", "h=2dt+|x|^2"};
    for (int i = 0; i < 2; ++i) {
      const MartingaleCheck check =
          martingale_check(domain, temps[i], 1.0, center, 1e-4, 20'000, options.seed,
                           eo_martingale);
      const double gap = std::abs(check.empirical_mean - check.reference);
      const double tol = 3.0 * check.std_error + check.bias_allowance;
      report.report(out,
                    std::string("martingale ") + names[i] + " d=" + std::to_string(d),
                    gap <= tol,
                    "|mean - " + fmt17(check.reference) + "| = " + fmt17(gap) + ", tol = " +
                        fmt17(tol) + ", z = " + fmt17(check.z));
    }
  }

  // Monte Carlo against the finite-difference reference (2-D only).
  {
    const Domain domain = Domain::unit_hypercube(2);
    const auto [f_text, f0_text] = preset_expressions("hyp1");
    const BoundaryData data = data_from_expressions(f_text, f0_text, 2);
    const Point center = domain.center_point();
    const std::size_t nt = 17'000;  // dt below the 6.25e-6 stability bound of the 201^2 grid
    const FdSolution fd = fd_solve_2d(0.0, 1.0, 0.0, 1.0, data, 0.1, 201, 201, nt);
    const Estimate est =
        estimate_solution(domain, data, 0.1, center, 1e-4, 20'000, options.seed, eo);
    const double gap = std::abs(est.mean - fd.value(0.5, 0.5));
    const double tol = 3.0 * est.std_error + 0.01 + 0.002;
    report.report(out, "fd-cross-check hyp1 d=2", gap <= tol,
                  "|MC - FD| = " + fmt17(gap) + ", tol = " + fmt17(tol));
  }

  out << (report.ok ? "validate: all checks passed\n" : "validate: FAILURES detected\n");
  return report.ok ? 0 : 1;
}

}  // namespace heatwalk::cli

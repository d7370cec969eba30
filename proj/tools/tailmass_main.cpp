// Command-line front end: generates networks, draws samples, fits the left
// tail, and writes the comparison curves as CSV.
//
// Exit codes: 0 success, 2 configuration or input-domain error, 3 numerical
// failure, 4 file I/O error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailmass/tailmass.hpp"

namespace {

using namespace tailmass;

struct ThresholdSpec {
  ThresholdStrategy strategy = ThresholdStrategy::OrderStatistic;
  int target_count = 50;
  double start_u = 0.005;
  std::optional<double> fixed;  // set for value:u
};

// Accepted forms: auto:N (order statistic), value:u (given threshold),
// schedule:start (halving schedule down from start). An empty string selects
// the caller's default form.
ThresholdSpec parse_threshold(std::string text, const std::string& fallback) {
  if (text.empty()) text = fallback;
  ThresholdSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  try {
    if (kind == "auto") {
      spec.target_count = std::stoi(arg);
      spec.strategy = ThresholdStrategy::OrderStatistic;
    } else if (kind == "value") {
      spec.fixed = std::stod(arg);
    } else if (kind == "schedule") {
      spec.strategy = ThresholdStrategy::HalvingSchedule;
      if (!arg.empty()) spec.start_u = std::stod(arg);
    } else {
      throw std::invalid_argument("unknown threshold kind: " + kind);
    }
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad --threshold: " + text);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("bad --threshold: " + text);
  }
  return spec;
}

double resolve_threshold(const ThresholdSpec& spec, const ProbSample& sample) {
  if (spec.fixed) return *spec.fixed;
  return select_threshold(sample, spec.target_count, spec.strategy, spec.start_u);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number in list: " + item);
    }
  }
  if (out.empty()) throw std::invalid_argument("empty number list: " + text);
  return out;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k)
    grid[k] = lo * std::pow(hi / lo, double(k) / double(n - 1));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

// auto -> 40 points log-spaced over [u/1000, u]; log:lo:hi:n; or an explicit
// comma-separated list.
std::vector<double> parse_q_grid(const std::string& text, double u) {
  if (text == "auto") return log_spaced(u / 1000.0, u, 40);
  if (text.rfind("log:", 0) == 0) {
    std::stringstream ss(text.substr(4));
    std::string lo_s, hi_s, n_s;
    if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
        !std::getline(ss, n_s, ':'))
      throw std::invalid_argument("bad --q-grid: " + text);
    try {
      return log_spaced(std::stod(lo_s), std::stod(hi_s), std::stoi(n_s));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("bad --q-grid: " + text);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("bad --q-grid: " + text);
    }
  }
  return parse_double_list(text);
}

CptRegime parse_regime(const std::string& text) {
  if (text == "uniform") return CptRegime::UnitUniform;
  if (text == "extreme") return CptRegime::Extreme;
  throw std::invalid_argument("bad --regime: " + text);
}

RobustMethod parse_robust(const std::string& text) {
  if (text == "median") return RobustMethod::Median;
  if (text == "lms") return RobustMethod::Lms;
  throw std::invalid_argument("bad --robust: " + text);
}

void require_nondecreasing(const std::vector<double>& values,
                           const std::string& what) {
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] < values[k - 1])
      throw NumericalError(what + " is not nondecreasing over the grid");
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError(what + " is not finite");
}

std::ostream& output_stream(const std::string& out, std::ofstream& file) {
  if (out.empty() || out == "-") return std::cout;
  file = open_output(out);
  return file;
}

// Values CSV: one column, optional header row, one value per line.
std::vector<double> read_value_column(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open sample file: " + path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(line, &used);
      while (used < line.size() && std::isspace(static_cast<unsigned char>(line[used])))
        ++used;
      if (used != line.size()) throw std::invalid_argument(line);
      values.push_back(v);
    } catch (const std::exception&) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw IoError(path + ": not a numeric value: " + line);
    }
    first = false;
  }
  if (values.empty()) throw IoError(path + ": no values");
  return values;
}

struct NetOptions {
  int nodes = 15;
  int cardinality = 2;
  int max_parents = 3;
  std::string regime = "uniform";
  std::string net_path;  // when set, load instead of generating
};

void add_net_options(CLI::App* cmd, NetOptions& opt) {
  cmd->add_option("--nodes", opt.nodes, "variables in a generated network")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cardinality", opt.cardinality, "states per variable")
      ->check(CLI::Range(2, 64));
  cmd->add_option("--max-parents", opt.max_parents, "parent cap per variable")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--regime", opt.regime, "CPT entry distribution: uniform|extreme");
  cmd->add_option("--net", opt.net_path, "network JSON file to use instead of generating");
}

BayesNet make_net(const NetOptions& opt, std::uint64_t net_seed) {
  if (!opt.net_path.empty()) return load_network(opt.net_path);
  return random_network(opt.nodes, opt.cardinality, opt.max_parents,
                        parse_regime(opt.regime), net_seed);
}

int run_gen_net(const NetOptions& net_opt, std::uint64_t seed,
                const std::string& out) {
  const BayesNet net = make_net(net_opt, DerivedSeeds(seed).net);
  std::ofstream file;
  write_network(output_stream(out, file), net);
  return 0;
}

int run_sample(const NetOptions& net_opt, std::uint64_t seed, int n,
               const std::string& out) {
  const BayesNet net = make_net(net_opt, DerivedSeeds(seed).net);
  const ProbSample sample = logic_sample(net, n, DerivedSeeds(seed).sample);
  std::ofstream file;
  CsvWriter w(output_stream(out, file));
  w.header({"p"});
  for (double p : sample.values()) w.raw_row({format_double(p)});
  return 0;
}

int run_fit(const std::string& input, const std::string& mode_text,
            const std::string& threshold_text, const std::string& robust_text,
            const std::string& out) {
  const WeightMode mode = [&] {
    if (mode_text == "discrete") return WeightMode::Discrete;
    if (mode_text == "continuous") return WeightMode::Continuous;
    throw std::invalid_argument("bad --mode: " + mode_text);
  }();
  const ProbSample sample(read_value_column(input), mode);
  const double u =
      resolve_threshold(parse_threshold(threshold_text, "auto:50"), sample);
  FitConfig config;
  config.robust = parse_robust(robust_text);
  const FitResult fit = fit_tail(sample, u, config);
  if (!fit.params.is_valid())
    throw NumericalError("aggregated parameters have invalid signs");

  std::ofstream file;
  CsvWriter w(output_stream(out, file));
  w.header({"i", "j", "delta", "alpha", "status"});
  for (const PairEstimate& est : fit.pairs)
    w.raw_row({std::to_string(est.i), std::to_string(est.j),
               format_double(est.delta), format_double(est.alpha),
               pair_status_label(est.status)});
  w.header({"u", "m", "robust", "delta_hat", "alpha_hat"});
  w.raw_row({format_double(fit.u), std::to_string(fit.m),
             fit.robust == RobustMethod::Lms ? "lms" : "median",
             format_double(fit.params.delta), format_double(fit.params.alpha)});
  return 0;
}

int run_discrete_experiment(const NetOptions& net_opt, std::uint64_t seed, int n,
                            const std::string& threshold_text,
                            const std::string& robust_text,
                            const std::string& q_grid_text,
                            const std::string& out) {
  const DerivedSeeds seeds(seed);
  const BayesNet net = make_net(net_opt, seeds.net);
  const ProbSample sample = logic_sample(net, n, seeds.sample);

  const double u =
      resolve_threshold(parse_threshold(threshold_text, "auto:50"), sample);
  FitConfig config;
  config.robust = parse_robust(robust_text);
  const FitResult fit = fit_tail(sample, u, config);
  if (!fit.params.is_valid())
    throw NumericalError("aggregated parameters have invalid signs");

  const MassCurve exact = exact_mass_curve(net);
  const MassCurve empirical = empirical_mass_curve(sample);
  const TailModel model(u, empirical(u), fit.params);
  const MassCurve rgpd = tail_mass_curve(model);
  const MassCurve lognormal = log_normal_mass_curve(exact_log_normal_params(net));

  const std::vector<double> grid = parse_q_grid(q_grid_text, u);
  std::vector<double> rgpd_vals(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) rgpd_vals[k] = rgpd(grid[k]);
  require_nondecreasing(rgpd_vals, "fitted tail curve");

  std::ofstream file;
  CsvWriter w(output_stream(out, file));
  w.header({"q", "exact_G", "empirical_G", "rgpd_G", "lognormal_G"});
  for (std::size_t k = 0; k < grid.size(); ++k)
    w.raw_row({format_double(grid[k]), format_double(exact(grid[k])),
               format_double(empirical(grid[k])), format_double(rgpd_vals[k]),
               format_double(lognormal(grid[k]))});
  return 0;
}

int run_continuous_experiment(std::uint64_t seed, int n, double lambda,
                              const std::string& threshold_text,
                              const std::string& robust_text,
                              const std::string& q_grid_text,
                              const std::string& p_list_text,
                              const std::string& prefix) {
  const ContinuousExemplar model(lambda);
  const auto [draws, sample] = sample_continuous(model, n, seed);

  const double u =
      resolve_threshold(parse_threshold(threshold_text, "auto:320"), sample);
  FitConfig config;
  config.robust = parse_robust(robust_text);
  const FitResult fit = fit_tail(sample, u, config);
  if (!fit.params.is_valid())
    throw NumericalError("aggregated parameters have invalid signs");

  const MassCurve empirical = empirical_mass_curve(sample);
  const TailModel tail(u, empirical(u), fit.params);
  const MassCurve rgpd = tail_mass_curve(tail);

  {
    auto os = open_output(prefix + "_draws.csv");
    CsvWriter w(os);
    w.header({"x1", "x2", "x3", "p"});
    for (const ContinuousDraw& d : draws)
      w.raw_row({format_double(d.x1), format_double(d.x2), format_double(d.x3),
                 format_double(d.p)});
  }
  {
    const std::vector<double> grid = parse_q_grid(q_grid_text, u);
    std::vector<double> rgpd_vals(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) rgpd_vals[k] = rgpd(grid[k]);
    require_nondecreasing(rgpd_vals, "fitted tail curve");
    auto os = open_output(prefix + "_curve.csv");
    CsvWriter w(os);
    w.header({"q", "exact_G", "empirical_G", "rgpd_G"});
    for (std::size_t k = 0; k < grid.size(); ++k)
      w.raw_row({format_double(grid[k]), format_double(model.mass_below(grid[k])),
                 format_double(empirical(grid[k])), format_double(rgpd_vals[k])});
  }
  {
    auto os = open_output(prefix + "_table.csv");
    CsvWriter w(os);
    w.header({"p", "F", "G", "G_hat"});
    for (double p : parse_double_list(p_list_text)) {
      if (!(p > 0.0) || p > u)
        throw std::domain_error("table point outside fitted range (0, u]: " +
                                format_double(p));
      w.raw_row({format_double(p), format_double(model.cdf(p)),
                 format_double(model.mass_below(p)),
                 format_double(tail.mass_below(p))});
    }
  }
  return 0;
}

int run_marginal_bound(const NetOptions& net_opt, std::uint64_t seed,
                       const std::string& p0_list_text, const std::string& out) {
  const BayesNet net = make_net(net_opt, DerivedSeeds(seed).net);
  const std::vector<std::vector<double>> exact = exact_marginals(net);

  std::ofstream file;
  CsvWriter w(output_stream(out, file));
  w.header({"p0", "exact_G", "max_marginal_error", "bound_satisfied"});
  for (double p0 : parse_double_list(p0_list_text)) {
    const TruncatedMarginals trunc = truncated_marginals(net, p0);
    double max_err = 0.0;
    for (std::size_t v = 0; v < exact.size(); ++v)
      for (std::size_t s = 0; s < exact[v].size(); ++s)
        max_err = std::max(max_err, std::abs(exact[v][s] - trunc.marginals[v][s]));
    const double g = exact_mass_below(net, p0);
    const bool ok = max_err <= g + 1e-12;
    w.raw_row({format_double(p0), format_double(g), format_double(max_err),
               ok ? "1" : "0"});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Left-tail mass estimation for belief network instantiations"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int n = 1000;
  double lambda = 1.0;
  std::string threshold_text;  // empty: per-command default
  std::string robust_text = "median";
  std::string q_grid_text = "auto";
  std::string out;
  std::string mode_text = "discrete";
  std::string p_list_text = "0.05,0.01,0.005,0.002";
  std::string p0_list_text = "1e-6,1e-5,1e-4,1e-3,1e-2,1e-1";
  std::string input;
  std::string prefix = "continuous";
  NetOptions net_opt;

  auto* gen = app.add_subcommand("gen-net", "generate a random network as JSON");
  add_net_options(gen, net_opt);
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--out", out, "output path (default stdout)");

  auto* smp = app.add_subcommand("sample", "draw joint probabilities by logic sampling");
  add_net_options(smp, net_opt);
  smp->add_option("--seed", seed, "RNG seed")->required();
  smp->add_option("--n", n, "sample size")->check(CLI::PositiveNumber);
  smp->add_option("--out", out, "output path (default stdout)");

  auto* fit = app.add_subcommand("fit", "fit tail parameters to a value column");
  fit->add_option("--input", input, "CSV with one value column")->required();
  fit->add_option("--mode", mode_text, "weighting: discrete|continuous");
  fit->add_option("--threshold", threshold_text,
                  "auto:N | value:u | schedule:start (default auto:50)");
  fit->add_option("--robust", robust_text, "aggregation: median|lms");
  fit->add_option("--out", out, "output path (default stdout)");

  auto* dis = app.add_subcommand(
      "discrete-experiment",
      "sample a network and compare exact, empirical, fitted, and lognormal curves");
  add_net_options(dis, net_opt);
  dis->add_option("--seed", seed, "RNG seed")->required();
  dis->add_option("--n", n, "sample size")->check(CLI::PositiveNumber);
  dis->add_option("--threshold", threshold_text,
                  "auto:N | value:u | schedule:start (default auto:50)");
  dis->add_option("--robust", robust_text, "aggregation: median|lms");
  dis->add_option("--q-grid", q_grid_text, "auto | log:lo:hi:n | q1,q2,...");
  dis->add_option("--out", out, "output path (default stdout)");

  auto* con = app.add_subcommand(
      "continuous-experiment",
      "sample the closed-form model and compare exact and fitted curves");
  con->add_option("--seed", seed, "RNG seed")->required();
  con->add_option("--n", n, "sample size")->check(CLI::PositiveNumber);
  con->add_option("--lambda", lambda, "rate of the first stage")
      ->check(CLI::PositiveNumber);
  con->add_option("--threshold", threshold_text,
                  "auto:N | value:u | schedule:start (default auto:320)");
  con->add_option("--robust", robust_text, "aggregation: median|lms");
  con->add_option("--q-grid", q_grid_text, "auto | log:lo:hi:n | q1,q2,...");
  con->add_option("--p-list", p_list_text, "table evaluation points");
  con->add_option("--out-prefix", prefix, "prefix for the three output files");

  auto* mb = app.add_subcommand(
      "marginal-bound",
      "check truncated-marginal errors against the dropped-mass bound");
  add_net_options(mb, net_opt);
  mb->add_option("--seed", seed, "RNG seed")->required();
  mb->add_option("--p0-list", p0_list_text, "truncation thresholds");
  mb->add_option("--out", out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen_net(net_opt, seed, out);
    if (smp->parsed()) return run_sample(net_opt, seed, n, out);
    if (fit->parsed())
      return run_fit(input, mode_text, threshold_text, robust_text, out);
    if (dis->parsed())
      return run_discrete_experiment(net_opt, seed, n, threshold_text,
                                     robust_text, q_grid_text, out);
    if (con->parsed())
      return run_continuous_experiment(seed, n, lambda, threshold_text,
                                       robust_text, q_grid_text, p_list_text,
                                       prefix);
    if (mb->parsed()) return run_marginal_bound(net_opt, seed, p0_list_text, out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

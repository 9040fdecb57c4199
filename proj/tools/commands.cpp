#include "commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crn/bounds.hpp"
#include "crn/chains.hpp"
#include "crn/errors.hpp"
#include "crn/estimators.hpp"
#include "crn/gibbs.hpp"
#include "crn/ifs.hpp"
#include "crn/output.hpp"
#include "json.hpp"

#ifndef CRN_DATA_DIR
#define CRN_DATA_DIR "data"
#endif
#ifndef CRN_VERSION
#define CRN_VERSION "0.0.0"
#endif

namespace crnconv {

using nlohmann::ordered_json;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw crn::UsageError("cannot write '" + path.string() + "'");
  os << content;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + 16, v, 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

void prepare(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw crn::UsageError("cannot create output directory '" + out.string() + "'");
}

void write_manifest(const std::filesystem::path& out, const std::string& command,
                    const ordered_json& config, std::uint64_t seed) {
  ordered_json m;
  m["command"] = command;
  m["config_hash"] = hex64(crn::fnv1a64(config.dump()));
  m["seed"] = seed;
  m["version"] = CRN_VERSION;
  m["config"] = config;
  write_file(out / "manifest.json", m.dump(2) + "\n");
}

crn::State initial_or(const std::vector<double>& given, const crn::State& fallback) {
  return given.empty() ? fallback : crn::State(given.begin(), given.end());
}

std::vector<double> iota_x(std::size_t count) {
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) x[i] = static_cast<double>(i);
  return x;
}

ordered_json intervals_json(const std::vector<crn::Interval>& ivs) {
  auto a = ordered_json::array();
  for (const auto& iv : ivs) a.push_back({iv.lo, iv.hi});
  return a;
}

ordered_json mean_se_json(const crn::MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}}; }

crn::chains::ParamFunction find_function(const std::string& name) {
  if (name == "cos") return crn::chains::cos_family();
  if (name == "linear") return crn::chains::linear_family();
  if (name == "logistic") return crn::chains::update_map(crn::chains::random_logistic(1.0));
  if (name == "trig") return crn::chains::update_map(crn::chains::trig_chain());
  throw crn::UsageError("unknown function '" + name + "'; available: cos, linear, logistic, trig");
}

}  // namespace

std::uint64_t resolve_seed(std::uint64_t seed) {
  const char* env = std::getenv("CRN_SEED");
  if (env == nullptr || *env == '\0') return seed;
  std::uint64_t v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw crn::UsageError("CRN_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

int run_simulate(SimulateArgs args, std::ostream& log) {
  const auto& entry = crn::chains::find_chain(args.chain);
  args.seed = resolve_seed(args.seed);
  const crn::State x0 = initial_or(args.x0, entry.x0);
  entry.chain.check_initial(x0);
  prepare(args.out);

  auto stream = crn::substream(args.seed, 0, crn::Lane::theta);
  const auto traj = args.backward ? crn::simulate_backward(entry.chain, x0, stream, args.n)
                                  : crn::simulate_forward(entry.chain, x0, stream, args.n);
  std::ostringstream csv;
  crn::write_trajectory_csv(csv, traj);
  write_file(args.out / "trajectory.csv", csv.str());

  if (args.plot) {
    crn::LinePlot plot;
    plot.title = entry.chain.name() + (args.backward ? " backward process" : " forward process");
    plot.x_label = "iteration";
    plot.y_label = "state";
    for (std::size_t c = 0; c < entry.chain.state_dim(); ++c) {
      crn::Series s{"x[" + std::to_string(c) + "]", iota_x(traj.states.size()), {}};
      for (const auto& st : traj.states) s.y.push_back(st[c]);
      plot.series.push_back(std::move(s));
    }
    write_file(args.out / "trajectory.svg", crn::render_line_svg(plot));
  }

  ordered_json config{{"chain", args.chain}, {"n", args.n},  {"seed", args.seed},
                      {"x0", x0},            {"backward", args.backward}, {"plot", args.plot}};
  write_manifest(args.out, "simulate", config, args.seed);
  log << entry.chain.name() << ": " << args.n << " steps, x_N = "
      << crn::format_double(traj.states.back()[0]) << "\n";
  return 0;
}

int run_couple(CoupleArgs args, std::ostream& log) {
  const auto& entry = crn::chains::find_chain(args.chain);
  args.seed = resolve_seed(args.seed);
  if (args.replicates == 0) throw crn::UsageError("--replicates must be >= 1");
  if (args.n == 0) throw crn::UsageError("--n must be >= 1");
  if (args.workers == 0) throw crn::UsageError("--workers must be >= 1");
  const auto mode = crn::parse_coupling(args.coupling);
  const crn::State x0 = initial_or(args.x0, entry.x0);
  const crn::State y0 = initial_or(args.y0, entry.y0);
  entry.chain.check_initial(x0);
  entry.chain.check_initial(y0);
  prepare(args.out);

  crn::Algorithm1Options opts;
  opts.horizon = args.n;
  opts.replicates = args.replicates;
  opts.p = args.p;
  opts.coupling = mode;
  opts.seed = args.seed;
  opts.workers = args.workers;
  const auto result = crn::algorithm1(entry.chain, crn::point_mass(x0), crn::point_mass(y0), opts);
  const auto& report = result.report;

  write_file(args.out / "estimate.json", crn::estimate_report_json(report));
  std::ostringstream csv;
  crn::write_estimate_csv(csv, report);
  write_file(args.out / "estimate.csv", csv.str());
  crn::LinePlot plot;
  plot.title = entry.chain.name() + ": mean |x_n - y_n|^p (" + std::string(crn::to_string(mode)) + ")";
  plot.x_label = "iteration n";
  plot.y_label = "mean distance^p";
  plot.series.push_back({"mean", iota_x(report.mean.size()), report.mean});
  write_file(args.out / "estimate.svg", crn::render_line_svg(plot));

  ordered_json config{{"chain", args.chain},
                      {"n", args.n},
                      {"replicates", args.replicates},
                      {"p", args.p},
                      {"coupling", std::string(crn::to_string(mode))},
                      {"x0", x0},
                      {"y0", y0},
                      {"seed", args.seed}};
  write_manifest(args.out, "couple", config, args.seed);
  log << "n,mean,se\n";
  for (std::size_t n = 0; n < report.mean.size(); ++n) {
    log << n << ',' << crn::format_double(report.mean[n]) << ',' << crn::format_double(report.se[n])
        << '\n';
  }
  return 0;
}

int run_monotonicity(MonotonicityArgs args, std::ostream& log) {
  const auto f = find_function(args.function);
  args.seed = resolve_seed(args.seed);
  if (args.samples == 0) throw crn::UsageError("--samples must be >= 1");
  prepare(args.out);

  const auto px = crn::classify_monotonicity(f, args.x, args.grid);
  const auto py = crn::classify_monotonicity(f, args.y, args.grid);
  const auto region = crn::common_region(px, py, f.theta_law);
  const auto one = crn::one_step_w2(f, args.x, args.y, args.samples, args.seed, args.grid);

  ordered_json j;
  j["function"] = f.name;
  j["theta_law"] = f.theta_law.describe();
  j["x"] = args.x;
  j["y"] = args.y;
  j["grid"] = args.grid;
  j["increasing_x"] = intervals_json(px.increasing);
  j["decreasing_x"] = intervals_json(px.decreasing);
  j["increasing_y"] = intervals_json(py.increasing);
  j["decreasing_y"] = intervals_json(py.decreasing);
  j["A"] = intervals_json(region.intervals);
  j["prob_A"] = region.prob;
  j["case"] = std::string(crn::to_string(one.regime));
  j["one_step_w2"] = {{"samples", args.samples},
                      {"crn", mean_se_json(one.crn)},
                      {"antithetic", mean_se_json(one.antithetic)},
                      {"error_term", mean_se_json(one.error_term)},
                      {"lower", one.lower},
                      {"upper", one.upper},
                      {"negative_error_term", one.negative_error_term}};
  write_file(args.out / "monotonicity.json", j.dump(2) + "\n");

  ordered_json config{{"function", args.function}, {"x", args.x},          {"y", args.y},
                      {"grid", args.grid},         {"samples", args.samples}, {"seed", args.seed}};
  write_manifest(args.out, "monotonicity", config, args.seed);
  log << "P(A) = " << crn::format_double(region.prob) << " (" << crn::to_string(one.regime)
      << "), W2^2 in [" << crn::format_double(one.lower) << ", " << crn::format_double(one.upper)
      << "]\n";
  return 0;
}

int run_bound(BoundArgs args, std::ostream& log) {
  crn::gibbs::ExampleConfig config;
  if (args.config) {
    std::ifstream in(*args.config);
    if (!in) throw crn::FileNotFound("cannot open config '" + args.config->string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    config = crn::gibbs::parse_example_config(text.str(), args.config->parent_path());
  } else if (args.example != "gibbs-regression") {
    throw crn::UsageError("bound: pass --config FILE or --example gibbs-regression");
  }
  if (config.dataset.empty()) config.dataset = std::filesystem::path(CRN_DATA_DIR) / "carbs.csv";
  if (args.seed) config.seed = *args.seed;
  config.seed = resolve_seed(config.seed);
  if (args.workers == 0) throw crn::UsageError("--workers must be >= 1");
  config.workers = args.workers;
  if (!std::filesystem::exists(config.dataset)) {
    throw crn::FileNotFound("dataset not found: '" + config.dataset.string() + "'");
  }
  prepare(args.out);

  const auto r = crn::gibbs::run_example(config);
  write_file(args.out / "bound.json", crn::gibbs::example_report_json(r));
  std::ostringstream table;
  crn::write_bound_table(table, r.bound);
  write_file(args.out / "bound.csv", table.str());
  std::ostringstream hist;
  hist << "replicate,abs_diff\n";
  for (std::size_t i = 0; i < r.histogram.size(); ++i) {
    hist << i << ',' << crn::format_double(r.histogram[i]) << '\n';
  }
  write_file(args.out / "histogram.csv", hist.str());

  crn::LinePlot plot;
  plot.title = "sigma^2 chain: coupled distance and bound";
  plot.x_label = "iteration n";
  plot.y_label = "value";
  plot.log_y = true;
  const auto xs = iota_x(r.bound.mean.size());
  plot.series.push_back({"mean |diff|", xs, r.bound.mean});
  plot.series.push_back({"median |diff|", xs, r.median_abs_diff});
  plot.series.push_back({"Wasserstein bound", xs, r.bound.bound});
  write_file(args.out / "bound.svg", crn::render_line_svg(plot));
  write_file(args.out / "histogram.svg",
             crn::render_histogram_svg(r.histogram, 40,
                                       "|sigma^2 difference| at n = " +
                                           std::to_string(r.histogram_iteration),
                                       "absolute difference"));

  ordered_json cfg{{"dataset", config.dataset.filename().string()},
                   {"intercept", config.intercept},
                   {"beta0", config.beta0},
                   {"sigma_beta_diag", config.sigma_beta_diag},
                   {"nu0", config.nu0},
                   {"c0sq", config.c0sq},
                   {"I", config.I},
                   {"N", config.N},
                   {"seed", config.seed},
                   {"sigma2_init", config.sigma2_init},
                   {"B_low", config.B_low},
                   {"B_high", config.B_high}};
  write_manifest(args.out, "bound", cfg, config.seed);

  log << "K = " << crn::format_double(r.K) << ", L = " << crn::format_double(r.L.L)
      << ", TV constant = " << crn::format_double(r.tv_constant) << "\n";
  log << "iteration,mean,bound,se\n";
  for (std::size_t n = 0; n < r.bound.mean.size(); ++n) {
    log << n << ',' << crn::format_double(r.bound.mean[n]) << ','
        << crn::format_double(r.bound.bound[n]) << ',' << crn::format_double(r.bound.bound_se[n])
        << '\n';
  }
  return 0;
}

int run_chains(std::ostream& log) {
  for (const auto& e : crn::chains::registry()) {
    log << e.chain.name() << "\t" << e.description << "\n";
  }
  return 0;
}

}  // namespace crnconv

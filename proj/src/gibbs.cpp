#include "crn/gibbs.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>

#include "crn/errors.hpp"
#include "crn/estimators.hpp"
#include "crn/output.hpp"
#include "json.hpp"

namespace crn::gibbs {

using numerics::Matrix;
using numerics::SpdMatrix;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v)) {
    throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
  }
  return v;
}

}  // namespace

RegressionData load_design(const std::filesystem::path& csv_path, bool intercept) {
  std::ifstream in(csv_path);
  if (!in) throw FileNotFound("cannot open dataset '" + csv_path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_line = line;
      header = split(header_line);
      break;
    }
  }
  if (header.empty()) throw ParseError("missing header", line_no);

  RegressionData data;
  for (std::size_t c = 1; c < header.size(); ++c) data.predictors.emplace_back(header[c]);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto cell : cells) row.push_back(parse_cell(cell, line_no));
    rows.push_back(std::move(row));
  }

  const std::size_t q = header.size() - 1 + (intercept ? 1 : 0);
  if (q == 0) throw UsageError("design has no predictors and no intercept");
  if (rows.size() < q) {
    throw UsageError("design needs at least q = " + std::to_string(q) + " rows, found " +
                     std::to_string(rows.size()));
  }
  data.X = Matrix(rows.size(), q);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.Y.push_back(rows[i][0]);
    std::size_t c = 0;
    if (intercept) data.X(i, c++) = 1.0;
    for (std::size_t j = 1; j < rows[i].size(); ++j) data.X(i, c++) = rows[i][j];
  }
  if (intercept) data.predictors.insert(data.predictors.begin(), "(intercept)");
  return data;
}

Priors make_priors(std::vector<double> beta0, std::span<const double> sigma_beta_diag, double nu0,
                   double c0sq) {
  if (beta0.size() != sigma_beta_diag.size() || beta0.empty()) {
    throw ParameterError("priors: beta0 and sigma_beta_diag must have the same nonzero length");
  }
  if (!(nu0 > 0.0) || !(c0sq > 0.0)) throw ParameterError("priors: nu0 and c0sq must be > 0");
  Matrix s(beta0.size(), beta0.size());
  for (std::size_t i = 0; i < beta0.size(); ++i) {
    if (!(sigma_beta_diag[i] > 0.0)) throw ParameterError("priors: sigma_beta_diag must be > 0");
    s(i, i) = sigma_beta_diag[i];
  }
  return Priors{std::move(beta0), SpdMatrix(std::move(s)), nu0, c0sq};
}

namespace {

void check_dims(const RegressionData& data, const Priors& priors) {
  if (priors.beta0.size() != data.q() || priors.sigma_beta.dim() != data.q()) {
    throw UsageError("priors have dimension " + std::to_string(priors.beta0.size()) +
                     " but the design has q = " + std::to_string(data.q()));
  }
}

void check_sigma2(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("sigma^2 must be positive and finite, got " + format_double(sigma2));
  }
}

// Precision P = XᵀX/σ² + Σ_β⁻¹ and b = XᵀY/σ² + Σ_β⁻¹β₀.
std::pair<SpdMatrix, std::vector<double>> precision(double sigma2, const RegressionData& data,
                                                   const Priors& priors) {
  check_dims(data, priors);
  check_sigma2(sigma2);
  const Matrix prior_precision = priors.sigma_beta.inverse();
  const Matrix xt = data.X.transpose();
  Matrix p = (xt * data.X).scaled(1.0 / sigma2) + prior_precision;
  auto b = xt.apply(data.Y);
  const auto prior_term = prior_precision.apply(priors.beta0);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = b[i] / sigma2 + prior_term[i];
  return {SpdMatrix(std::move(p)), std::move(b)};
}

double residual_sq(std::span<const double> beta, const RegressionData& data) {
  const auto fit = data.X.apply(beta);
  double s = 0.0;
  for (std::size_t i = 0; i < fit.size(); ++i) s += (data.Y[i] - fit[i]) * (data.Y[i] - fit[i]);
  return s;
}

}  // namespace

BetaConditional beta_conditional(double sigma2, const RegressionData& data, const Priors& priors) {
  auto [p, b] = precision(sigma2, data, priors);
  BetaConditional out;
  out.mean = p.solve(b);
  out.cov = p.inverse();
  out.chol = numerics::cholesky(out.cov);
  return out;
}

std::vector<double> beta_update(double sigma2_prev, const RegressionData& data,
                                const Priors& priors, std::span<const double> z) {
  if (z.size() != data.q()) throw UsageError("beta_update: z must have length q");
  const auto cond = beta_conditional(sigma2_prev, data, priors);
  auto beta = cond.chol.apply(z);
  for (std::size_t i = 0; i < beta.size(); ++i) beta[i] += cond.mean[i];
  return beta;
}

double sigma2_conditional(std::span<const double> beta, const RegressionData& data,
                          const Priors& priors, double g) {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw NumericError("sigma^2 update: gamma draw must be positive and finite, got " + format_double(g));
  }
  return (priors.nu0 * priors.c0sq / 2.0 + residual_sq(beta, data) / 2.0) / g;
}

double sigma_marginal_numerator(double sigma2_prev, const RegressionData& data,
                                const Priors& priors, std::span<const double> z) {
  const auto beta = beta_update(sigma2_prev, data, priors, z);
  return priors.nu0 * priors.c0sq / 2.0 + residual_sq(beta, data) / 2.0;
}

double sigma_marginal_step(double sigma2_prev, const RegressionData& data, const Priors& priors,
                           std::span<const double> z, double g) {
  const auto beta = beta_update(sigma2_prev, data, priors, z);
  return sigma2_conditional(beta, data, priors, g);
}

GibbsState gibbs_step(double sigma2_prev, const RegressionData& data, const Priors& priors,
                      std::span<const double> z, double g) {
  GibbsState s;
  s.beta = beta_update(sigma2_prev, data, priors, z);
  s.sigma2 = sigma2_conditional(s.beta, data, priors, g);
  return s;
}

double tv_constant(double k, double nu0, double c0sq) {
  if (!(nu0 > 0.0) || !(c0sq > 0.0) || k < 0.0) {
    throw ParameterError("tv_constant: need k >= 0, nu0 > 0, c0sq > 0");
  }
  return (k + nu0) * (k + nu0) / (2.0 * nu0 * c0sq);
}

double log_marginal_sigma_unnormalized(double sigma2, const RegressionData& data,
                                       const Priors& priors) {
  auto [p, b] = precision(sigma2, data, priors);
  const auto mean = p.solve(b);
  std::vector<double> offset(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) offset[i] = mean[i] - priors.beta0[i];
  const double prior_quad = numerics::dot(offset, priors.sigma_beta.solve(offset));
  const double quad = residual_sq(mean, data) / sigma2 + prior_quad;
  const double q = static_cast<double>(data.q());
  const double k = static_cast<double>(data.k());
  return 0.5 * q * std::log(2.0 * std::numbers::pi) - 0.5 * p.log_determinant() - 0.5 * quad -
         (0.5 * (k + priors.nu0) + 1.0) * std::log(sigma2) -
         priors.nu0 * priors.c0sq / (2.0 * sigma2);
}

double marginal_sigma_unnormalized(double sigma2, const RegressionData& data, const Priors& priors) {
  return std::exp(log_marginal_sigma_unnormalized(sigma2, data, priors));
}

double alpha_prime(std::size_t k, const Priors& priors) {
  return 0.5 * (static_cast<double>(k) + priors.nu0);
}

double beta_prime(const Priors& priors) { return priors.nu0 * priors.c0sq / 2.0; }

double marginal_envelope(double sigma2, std::size_t k, const Priors& priors) {
  check_sigma2(sigma2);
  const double q = static_cast<double>(priors.beta0.size());
  return std::exp(0.5 * q * std::log(2.0 * std::numbers::pi) +
                  0.5 * priors.sigma_beta.log_determinant() -
                  (alpha_prime(k, priors) + 1.0) * std::log(sigma2) - beta_prime(priors) / sigma2);
}

LResult compute_L(const RegressionData& data, const Priors& priors, double sigma2_lo,
                  double sigma2_hi, double rel_tol, std::size_t max_intervals) {
  if (!(sigma2_lo > 0.0) || !(sigma2_hi > sigma2_lo) || !std::isfinite(sigma2_hi)) {
    throw UsageError("compute_L: need 0 < B_low < B_high < inf");
  }
  check_dims(data, priors);
  const auto r = numerics::integrate(
      [&](double s) { return marginal_sigma_unnormalized(s, data, priors); }, sigma2_lo, sigma2_hi,
      rel_tol, max_intervals);
  return {r.value, r.abs_error, r.intervals};
}

double k_numerator(std::size_t k, const Priors& priors) {
  const double q = static_cast<double>(priors.beta0.size());
  const double a = alpha_prime(k, priors);
  return std::exp(0.5 * q * std::log(2.0 * std::numbers::pi) +
                  0.5 * priors.sigma_beta.log_determinant() + numerics::log_gamma(a) -
                  a * std::log(beta_prime(priors)));
}

double compute_K_gibbs(double L, std::size_t k, const Priors& priors) {
  if (!(L > 0.0)) throw UsageError("compute_K_gibbs: L must be > 0, got " + format_double(L));
  return k_numerator(k, priors) / L;
}

ChainModel sigma2_chain(const RegressionData& data, const Priors& priors) {
  check_dims(data, priors);
  auto shared = std::make_shared<const std::pair<RegressionData, Priors>>(data, priors);
  const std::size_t q = data.q();
  std::vector<DistributionSpec> specs(q, DistributionSpec::normal(0.0, 1.0));
  specs.push_back(DistributionSpec::gamma(alpha_prime(data.k(), priors), 1.0));
  ChainModel::Traits traits;
  traits.domain = Box{{0.0}, {std::numeric_limits<double>::infinity()}};
  return ChainModel("gibbs-sigma2", 1, std::move(specs),
                    [shared, q](std::span<const double> theta, const State& x) {
                      return State{sigma_marginal_step(x[0], shared->first, shared->second,
                                                       theta.first(q), theta[q])};
                    },
                    std::move(traits));
}

// --- Example pipeline ---------------------------------------------------------------------

namespace {

template <class T>
T get_as(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw UsageError("config: key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw UsageError("config: key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

ExampleConfig parse_example_config(const std::string& json_text,
                                   const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  ExampleConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "dataset") {
      c.dataset = get_as<std::string>(v, key);
      if (c.dataset.is_relative()) c.dataset = base_dir / c.dataset;
    } else if (key == "intercept") {
      c.intercept = get_as<bool>(v, key);
    } else if (key == "beta0") {
      c.beta0 = get_as<std::vector<double>>(v, key);
    } else if (key == "sigma_beta_diag") {
      c.sigma_beta_diag = get_as<std::vector<double>>(v, key);
    } else if (key == "nu0") {
      c.nu0 = get_as<double>(v, key);
    } else if (key == "c0sq") {
      c.c0sq = get_as<double>(v, key);
    } else if (key == "I") {
      c.I = get_count(v, key);
    } else if (key == "N") {
      c.N = get_count(v, key);
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw UsageError("config: key 'seed' must be a non-negative integer");
      c.seed = v.get<std::uint64_t>();
    } else if (key == "sigma2_init") {
      c.sigma2_init = get_as<double>(v, key);
    } else if (key == "B_low") {
      c.B_low = get_as<double>(v, key);
    } else if (key == "B_high") {
      c.B_high = get_as<double>(v, key);
    } else {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

ExampleReport run_example(const ExampleConfig& config) {
  if (config.I == 0 || config.N == 0) throw UsageError("example: I and N must be >= 1");
  if (!(config.sigma2_init > 0.0)) throw UsageError("example: sigma2_init must be > 0");
  const auto data = load_design(config.dataset, config.intercept);
  const std::size_t q = data.q();
  auto beta0 = config.beta0.empty() ? std::vector<double>(q, 0.0) : config.beta0;
  auto diag = config.sigma_beta_diag.empty() ? std::vector<double>(q, 1.0) : config.sigma_beta_diag;
  if (beta0.size() != q || diag.size() != q) {
    throw UsageError("example: beta0 and sigma_beta_diag must have length q = " + std::to_string(q));
  }
  const auto priors = make_priors(std::move(beta0), diag, config.nu0, config.c0sq);

  ExampleReport out;
  out.config = config;
  out.k = data.k();
  out.q = q;
  out.L = compute_L(data, priors, config.B_low, config.B_high);
  out.K_numerator = k_numerator(data.k(), priors);
  const auto k_const = k_from_unnormalized(out.K_numerator, out.L.L);
  out.K = k_const.K;
  out.tv_constant = tv_constant(static_cast<double>(data.k()), priors.nu0, priors.c0sq);

  const auto chain = sigma2_chain(data, priors);
  Algorithm1Options opts;
  opts.horizon = config.N;
  opts.replicates = config.I;
  opts.p = 1.0;
  opts.coupling = Coupling::crn;
  opts.seed = config.seed;
  opts.workers = config.workers;
  opts.keep_distances = true;
  const auto nu = from_distribution(
      DistributionSpec::inverse_gamma(alpha_prime(data.k(), priors), beta_prime(priors)));
  const auto result = algorithm1(chain, point_mass({config.sigma2_init}), nu, opts);

  out.bound = stationarity_bound(k_const, result.report, out.L.L);
  out.tv_bound.resize(out.bound.bound.size());
  for (std::size_t n = 0; n < out.tv_bound.size(); ++n) {
    out.tv_bound[n] = out.tv_constant * out.bound.bound[n];
  }
  out.median_abs_diff.resize(config.N + 1);
  std::vector<double> column(config.I);
  for (std::size_t n = 0; n <= config.N; ++n) {
    for (std::size_t i = 0; i < config.I; ++i) column[i] = result.distances[i][n];
    out.median_abs_diff[n] = median(column);
  }
  out.histogram_iteration = std::min(config.histogram_iteration, config.N);
  out.histogram.resize(config.I);
  for (std::size_t i = 0; i < config.I; ++i) {
    out.histogram[i] = result.distances[i][out.histogram_iteration];
  }
  return out;
}

std::string example_report_json(const ExampleReport& r) {
  nlohmann::ordered_json j;
  j["K"] = r.K;
  j["L"] = r.L.L;
  j["tv_constant"] = r.tv_constant;
  j["K_numerator"] = r.K_numerator;
  j["K_provenance"] = std::string(to_string(r.bound.provenance));
  j["L_abs_error"] = r.L.abs_error;
  j["B"] = {r.config.B_low, r.config.B_high};
  j["alpha_prime"] = 0.5 * (static_cast<double>(r.k) + r.config.nu0);
  j["beta_prime"] = r.config.nu0 * r.config.c0sq / 2.0;
  j["k"] = r.k;
  j["q"] = r.q;
  j["I"] = r.config.I;
  j["N"] = r.config.N;
  j["seed"] = r.config.seed;
  j["separation"] = r.bound.separation;
  auto& its = j["iterations"] = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < r.bound.mean.size(); ++n) {
    its.push_back({{"n", n},
                   {"mean_abs_diff", r.bound.mean[n]},
                   {"se", r.bound.mean_se[n]},
                   {"w_bound", r.bound.bound[n]},
                   {"tv_bound", r.tv_bound[n]},
                   {"median_abs_diff", r.median_abs_diff[n]}});
  }
  return j.dump(2) + "\n";
}

}  // namespace crn::gibbs

#pragma once

// Bayesian linear regression Gibbs sampler with semi-conjugate priors
//   Y | β, σ² ~ N_k(Xβ, σ² I),  β ~ N_q(β₀, Σ_β),  σ² ~ Inv-χ²(υ₀, c₀²),
// its marginal σ² recursion, and the constants behind the coupled convergence bound.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "crn/bounds.hpp"
#include "crn/ifs.hpp"
#include "crn/numerics.hpp"

namespace crn::gibbs {

struct RegressionData {
  std::vector<double> Y;
  numerics::Matrix X;  ///< k × q, leading column of ones when an intercept was requested
  std::vector<std::string> predictors;
  std::size_t k() const { return Y.size(); }
  std::size_t q() const { return X.cols(); }
};

/// Reads a headed CSV: first column is Y, remaining columns are predictors.
/// Throws FileNotFound, or ParseError carrying the 1-based line number.
RegressionData load_design(const std::filesystem::path& csv_path, bool intercept);

struct Priors {
  std::vector<double> beta0;
  numerics::SpdMatrix sigma_beta;
  double nu0 = 1.0;
  double c0sq = 1.0;
};

/// Σ_β = diag(sigma_beta_diag). Throws ParameterError on non-positive entries or mismatched
/// lengths.
Priors make_priors(std::vector<double> beta0, std::span<const double> sigma_beta_diag, double nu0,
                   double c0sq);

struct GibbsState {
  std::vector<double> beta;
  double sigma2 = 1.0;
};

/// β | σ² ~ N(β̃, V): V = (XᵀX/σ² + Σ_β⁻¹)⁻¹, β̃ = V(XᵀY/σ² + Σ_β⁻¹β₀).
struct BetaConditional {
  std::vector<double> mean;  ///< β̃
  numerics::Matrix cov;      ///< V
  numerics::Matrix chol;     ///< lower Cholesky factor of V
};

BetaConditional beta_conditional(double sigma2, const RegressionData& data, const Priors& priors);

/// β = β̃ + chol(V) z.
std::vector<double> beta_update(double sigma2_prev, const RegressionData& data,
                                const Priors& priors, std::span<const double> z);

/// σ² | β = [υ₀c₀²/2 + ‖Y - Xβ‖²/2] / G.
double sigma2_conditional(std::span<const double> beta, const RegressionData& data,
                          const Priors& priors, double g);

/// W = υ₀c₀²/2 + ‖Xβ̃ - Y + X chol(V) z‖²/2, the numerator of the marginal σ² step.
double sigma_marginal_numerator(double sigma2_prev, const RegressionData& data,
                                const Priors& priors, std::span<const double> z);

/// σ²_n = W / G. Throws NumericError when G is not positive and finite.
double sigma_marginal_step(double sigma2_prev, const RegressionData& data, const Priors& priors,
                           std::span<const double> z, double g);

/// One full Gibbs sweep (β then σ²) driven by (z, G).
GibbsState gibbs_step(double sigma2_prev, const RegressionData& data, const Priors& priors,
                      std::span<const double> z, double g);

/// (k + υ₀)² / (2 υ₀ c₀²).
double tv_constant(double k, double nu0, double c0sq);

/// ∫ g(β, σ²) dβ for g = likelihood × prior kernels, in closed form (log scale).
double log_marginal_sigma_unnormalized(double sigma2, const RegressionData& data,
                                       const Priors& priors);
double marginal_sigma_unnormalized(double sigma2, const RegressionData& data, const Priors& priors);

/// (2π)^{q/2} det(Σ_β)^{1/2} σ²^{-(k+υ₀)/2-1} exp(-υ₀c₀²/(2σ²)), which dominates the marginal.
double marginal_envelope(double sigma2, std::size_t k, const Priors& priors);

struct LResult {
  double L = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
};

/// L = ∫_{lo}^{hi} marginal_sigma_unnormalized, a lower bound on the total mass of g.
LResult compute_L(const RegressionData& data, const Priors& priors, double sigma2_lo,
                  double sigma2_hi, double rel_tol = 1e-8, std::size_t max_intervals = 4000);

/// Inverse-gamma envelope parameters α′ = (k+υ₀)/2 and β′ = υ₀c₀²/2.
double alpha_prime(std::size_t k, const Priors& priors);
double beta_prime(const Priors& priors);

/// (2π)^{q/2} det(Σ_β)^{1/2} Γ(α′) / β′^{α′}.
double k_numerator(std::size_t k, const Priors& priors);

/// K ≤ k_numerator / L. Throws UsageError for L <= 0.
double compute_K_gibbs(double L, std::size_t k, const Priors& priors);

/// The marginal σ² chain: θ = (z_1 … z_q, G), G ~ Gamma((k+υ₀)/2, 1).
ChainModel sigma2_chain(const RegressionData& data, const Priors& priors);

struct ExampleConfig {
  std::filesystem::path dataset;
  bool intercept = true;
  std::vector<double> beta0;            ///< empty: zeros
  std::vector<double> sigma_beta_diag;  ///< empty: ones
  double nu0 = 1.0;
  double c0sq = 10.0;
  std::size_t I = 1000;
  std::size_t N = 100;
  std::uint64_t seed = 20240101;
  double sigma2_init = 1.0;
  double B_low = 0.1;
  double B_high = 1e4;
  std::size_t histogram_iteration = 25;
  std::size_t workers = 1;
};

/// Parses the JSON config; relative dataset paths resolve against `base_dir`.
/// Throws UsageError on unknown keys or ill-typed values.
ExampleConfig parse_example_config(const std::string& json_text,
                                   const std::filesystem::path& base_dir);

struct ExampleReport {
  ExampleConfig config;
  std::size_t k = 0;
  std::size_t q = 0;
  LResult L;
  double K_numerator = 0.0;
  double K = 0.0;
  double tv_constant = 0.0;
  BoundReport bound;
  std::vector<double> tv_bound;
  std::vector<double> median_abs_diff;
  std::size_t histogram_iteration = 0;
  std::vector<double> histogram;  ///< per-replicate |σ²_n - σ′²_n| at histogram_iteration
};

/// The bounded chain starts from the point mass sigma2_init, its companion from the proposal
/// inverse-gamma(α′, β′); both run under CRN on (z, G) for N steps.
ExampleReport run_example(const ExampleConfig& config);

/// {K, L, tv_constant, iterations: [{n, mean_abs_diff, se, w_bound, tv_bound}], …}.
std::string example_report_json(const ExampleReport& report);

}  // namespace crn::gibbs

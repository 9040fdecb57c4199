#pragma once

// Coupled-chain estimators: the CRN average of |X_N - Y_N|^p, the sorted-sample Wasserstein
// oracle, monotonicity regions of θ ↦ f(θ, z), the one-step W₂² estimator with its three
// cases, and the average-contraction estimate.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crn/chains.hpp"
#include "crn/ifs.hpp"
#include "crn/rng.hpp"

namespace crn {

/// Per-iteration Monte Carlo average of |x_n - y_n|^p over independent replicates.
struct EstimateReport {
  std::vector<double> mean;  ///< index n = 0 … horizon
  std::vector<double> se;    ///< sample standard deviation / √replicates
  std::size_t replicates = 0;
  std::size_t horizon = 0;
  double p = 1.0;
  Coupling coupling = Coupling::crn;
  std::uint64_t seed = 0;
};

/// Draws an initial state from the given uniforms.
using InitSampler = std::function<State(UniformSource&)>;

InitSampler point_mass(State x);
/// Scalar state drawn by inverse CDF.
InitSampler from_distribution(DistributionSpec spec);

struct Algorithm1Options {
  std::size_t horizon = 1;
  std::size_t replicates = 1;
  double p = 1.0;
  Coupling coupling = Coupling::crn;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Feed both initial samplers the same uniforms (x₀ and y₀ are then dependent).
  bool shared_init_stream = false;
  bool keep_distances = false;
  bool keep_states = false;
};

struct Algorithm1Result {
  EstimateReport report;
  /// distances[i][n] = |x_{n,i} - y_{n,i}|, when keep_distances.
  std::vector<std::vector<double>> distances;
  /// x_states[i][n], y_states[i][n], when keep_states.
  std::vector<std::vector<State>> x_states;
  std::vector<std::vector<State>> y_states;
};

/// Replicate i draws x₀ from `mu` and y₀ from `nu` on separate substreams, then runs the pair
/// for `horizon` steps with θ from its own substream. Aggregation is in replicate order, so
/// the result is bit-identical for every worker count.
/// Throws NumericOverflow tagged with replicate and iteration on a non-finite state.
Algorithm1Result algorithm1(const ChainModel& chain, const InitSampler& mu,
                            const InitSampler& nu, const Algorithm1Options& options);

/// ((1/n) Σ |a_(i) - b_(i)|^p)^{1/p} over sorted samples. Throws UsageError on length
/// mismatch or empty input.
double empirical_wasserstein(std::span<const double> a, std::span<const double> b, double p);

struct OracleEstimate {
  double value = 0.0;  ///< W_p^p of the two empirical laws
  double se = 0.0;     ///< bootstrap standard error
};

/// Sorted-sample W_p^p with a bootstrap standard error (both samples resampled).
OracleEstimate wasserstein_oracle(std::span<const double> a, std::span<const double> b, double p,
                                  std::uint64_t seed, std::size_t bootstrap_reps = 100);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Regions where θ ↦ f(θ, z) is non-decreasing (increasing) or non-increasing (decreasing),
/// resolved to cells of an m-cell grid over [lo, hi]. Cells with zero difference count as
/// non-decreasing. Both lists are sorted, disjoint, and together tile [lo, hi].
struct MonotonicityPartition {
  std::vector<Interval> increasing;
  std::vector<Interval> decreasing;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t grid = 0;
  double cell_width() const { return (hi - lo) / static_cast<double>(grid); }
};

inline constexpr std::size_t kDefaultGrid = 4096;
inline constexpr double kQuantileTruncation = 1e-6;

/// θ range used for classification: the support when finite, otherwise the
/// (ε, 1 - ε) quantile range.
std::pair<double, double> theta_domain(const DistributionSpec& law,
                                       double eps = kQuantileTruncation);

/// Throws UsageError for m < 2 and DomainError when g is non-finite on the grid.
MonotonicityPartition classify_monotonicity(const std::function<double(double)>& g, double lo,
                                            double hi, std::size_t m = kDefaultGrid);
MonotonicityPartition classify_monotonicity(const chains::ParamFunction& f, double z,
                                            std::size_t m = kDefaultGrid);

/// A = (I_x ∩ I_y) ∪ (D_x ∩ D_y) with its probability under the θ law.
struct CommonRegion {
  std::vector<Interval> intervals;
  double prob = 0.0;
  bool contains(double theta) const;
};

/// Intervals that reach an end of the partition range are integrated out to the
/// corresponding end of the law's support.
CommonRegion common_region(const MonotonicityPartition& px, const MonotonicityPartition& py,
                           const DistributionSpec& law);

enum class MonotonicityCase {
  same_direction,      ///< P(A) = 1: CRN is optimal
  opposite_direction,  ///< P(A) = 0: antithetic pairing is optimal
  mixed,               ///< 0 < P(A) < 1: W₂² is only bracketed
};

std::string_view to_string(MonotonicityCase c);
MonotonicityCase classify_case(double prob_a);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Summary of n samples: mean and sample-sd/√n.
MeanSe mean_se(std::span<const double> samples);

struct OneStepResult {
  MonotonicityCase regime = MonotonicityCase::same_direction;
  double prob_a = 0.0;
  MeanSe crn;           ///< E[(f(θ_U,x) - f(θ_U,y))²]
  MeanSe antithetic;    ///< E[(f(θ_{1-U},x) - f(θ_U,y))²]
  MeanSe error_term;    ///< ê = 2 E[(f(θ_{1-U},x) - f(θ_U,x)) f(θ_U,y) 1_{Aᶜ}(θ_U)]
  double lower = 0.0;   ///< W₂² bracket
  double upper = 0.0;
  bool negative_error_term = false;
};

/// One-step W₂² between the laws of f(θ, x) and f(θ, y), θ ~ f.theta_law, from I uniforms.
OneStepResult one_step_w2(const chains::ParamFunction& f, double x, double y,
                          std::size_t samples, std::uint64_t seed,
                          std::size_t grid = kDefaultGrid);

struct PairRatio {
  State x;
  State x_prime;
  MeanSe ratio;  ///< mean over θ of d(f(θ,x), f(θ,x')) / d(x,x')
};

struct ContractionEstimate {
  double d_hat = 0.0;  ///< max over sampled pairs of the mean ratio
  std::vector<PairRatio> pairs;
  std::size_t skipped = 0;  ///< pairs with d(x, x') = 0
};

using PairSampler = std::function<std::pair<State, State>(UniformSource&)>;

ContractionEstimate contraction_estimate(const ChainModel& chain, const PairSampler& pairs,
                                         std::size_t pair_count, std::size_t theta_count,
                                         std::uint64_t seed);

struct KsResult {
  double statistic = 0.0;
  double critical_1pct = 0.0;  ///< asymptotic two-sample critical value at α = 0.01
  bool rejects() const { return statistic >= critical_1pct; }
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

std::string estimate_report_json(const EstimateReport& report);
/// CSV with header `iteration,mean,se`.
void write_estimate_csv(std::ostream& os, const EstimateReport& report);

}  // namespace crn

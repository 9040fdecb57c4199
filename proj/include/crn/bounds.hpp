#pragma once

// Rejection constant K = ess sup π/ν, separation distance, and the stationarity bound
// (K · E|X_n - Y_n|^p)^{1/p}.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crn/estimators.hpp"
#include "crn/rng.hpp"

namespace crn {

/// A one-dimensional density on [lower, upper] (either end may be infinite).
struct Density1D {
  std::string name;
  std::function<double(double)> pdf;
  double lower = 0.0;
  double upper = 0.0;
};

Density1D density_of(const DistributionSpec& spec);

/// Target π and proposal ν. When `target_normalized` is false, π is an unnormalized g.
struct DensityPair {
  Density1D target;
  Density1D proposal;
  bool target_normalized = true;
};

enum class KProvenance { analytic, grid, l_based };
std::string_view to_string(KProvenance p);

struct RejectionConstant {
  double K = 1.0;
  bool infinite = false;
  KProvenance provenance = KProvenance::analytic;
  /// Grid search only sees finitely many points, so its K is a lower estimate.
  bool lower_estimate = false;
  double argmax = 0.0;
};

/// A user-supplied sup π/ν. Throws UsageError unless sup >= 1 (or +∞).
RejectionConstant rejection_constant_analytic(double sup_ratio);

struct GridSearch {
  std::size_t cells = 4096;
  double lo = 0.0;
  double hi = 1.0;
};

/// Evaluates π/ν on the grid, refines the best cell by golden section, and probes outward
/// when the maximum sits on a box edge facing an unbounded support end. A ratio that keeps
/// growing there, or is non-finite, yields K = +∞.
RejectionConstant rejection_constant(const DensityPair& pair, const GridSearch& grid);

/// s = 1 - 1/K (1 when K is infinite).
double separation_distance(const RejectionConstant& k);

/// K ≤ sup(g/ν)/L. Throws UsageError for L <= 0.
RejectionConstant k_from_unnormalized(double sup_ratio, double L);
RejectionConstant k_from_unnormalized(const DensityPair& pair, const GridSearch& grid, double L);

struct AcceptanceRate {
  std::size_t trials = 0;
  std::size_t accepted = 0;
  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(accepted) / trials; }
};

/// Runs a rejection sampler with proposals from `proposal_law`, accepting when
/// U < π(x) / (K ν(x)).
AcceptanceRate rejection_sample(const DensityPair& pair, const DistributionSpec& proposal_law,
                                double K, std::size_t trials, std::uint64_t seed);

struct BoundReport {
  double K = 1.0;
  bool infinite = false;
  double separation = 0.0;
  KProvenance provenance = KProvenance::analytic;
  bool lower_estimate = false;
  std::optional<double> L;
  double p = 1.0;
  std::vector<double> mean;
  std::vector<double> mean_se;
  std::vector<double> bound;  ///< (K · mean_n)^{1/p}; +∞ when vacuous
  std::vector<double> bound_se;
  bool vacuous() const { return infinite; }
};

/// Per-iteration bound on E|X_n - X_∞|^p for the copy X started from an arbitrary law, when the
/// report pairs it under CRN with a copy started from the proposal ν that K refers to.
/// Standard errors are propagated by the delta method.
BoundReport stationarity_bound(const RejectionConstant& k, const EstimateReport& report,
                               std::optional<double> L = std::nullopt);

std::string bound_report_json(const BoundReport& report);
/// Table with header `iteration,mean,bound,se`.
void write_bound_table(std::ostream& os, const BoundReport& report);

}  // namespace crn

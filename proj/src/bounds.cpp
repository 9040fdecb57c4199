#include "crn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "crn/errors.hpp"
#include "crn/numerics.hpp"
#include "crn/output.hpp"
#include "json.hpp"

namespace crn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_at(const DensityPair& pair, double x) {
  const double t = pair.target.pdf(x);
  if (!(t > 0.0)) return std::isnan(t) ? kInf : 0.0;
  const double n = pair.proposal.pdf(x);
  if (!(n > 0.0)) return kInf;
  return t / n;
}

RejectionConstant infinite_k(KProvenance provenance, double at) {
  RejectionConstant k;
  k.K = kInf;
  k.infinite = true;
  k.provenance = provenance;
  k.argmax = at;
  return k;
}

// True when the ratio keeps increasing along probes at growing distances from the box.
bool grows_outward(const DensityPair& pair, double anchor, double width, double direction,
                   double edge_value) {
  double prev = edge_value;
  for (double factor : {1.0, 3.0, 7.0}) {
    const double r = ratio_at(pair, anchor + direction * width * factor);
    if (!std::isfinite(r)) return true;
    if (!(r > prev)) return false;
    prev = r;
  }
  return true;
}

}  // namespace

Density1D density_of(const DistributionSpec& spec) {
  return {spec.describe(), [spec](double x) { return pdf(spec, x); }, spec.support_lower(),
          spec.support_upper()};
}

std::string_view to_string(KProvenance p) {
  switch (p) {
    case KProvenance::analytic: return "analytic";
    case KProvenance::grid: return "grid";
    case KProvenance::l_based: return "L-based";
  }
  return "unknown";
}

RejectionConstant rejection_constant_analytic(double sup_ratio) {
  if (std::isnan(sup_ratio) || sup_ratio < 1.0) {
    throw UsageError("rejection constant: sup pi/nu must be >= 1, got " + format_double(sup_ratio));
  }
  if (std::isinf(sup_ratio)) return infinite_k(KProvenance::analytic, 0.0);
  RejectionConstant k;
  k.K = sup_ratio;
  return k;
}

RejectionConstant rejection_constant(const DensityPair& pair, const GridSearch& grid) {
  if (!pair.target.pdf || !pair.proposal.pdf) throw UsageError("rejection constant: missing density");
  if (grid.cells < 2 || !(grid.hi > grid.lo) || !std::isfinite(grid.lo) || !std::isfinite(grid.hi)) {
    throw UsageError("rejection constant: grid needs >= 2 cells on a finite box lo < hi");
  }
  const std::size_t m = grid.cells;
  auto node = [&](std::size_t j) {
    return j == m ? grid.hi : grid.lo + (grid.hi - grid.lo) * static_cast<double>(j) / static_cast<double>(m);
  };
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double r = ratio_at(pair, node(j));
    if (!std::isfinite(r)) return infinite_k(KProvenance::grid, node(j));
    if (r > best_value) {
      best_value = r;
      best = j;
    }
  }

  const double width = grid.hi - grid.lo;
  if (best == m && pair.target.upper > grid.hi &&
      grows_outward(pair, grid.hi, width, 1.0, best_value)) {
    return infinite_k(KProvenance::grid, grid.hi);
  }
  if (best == 0 && pair.target.lower < grid.lo &&
      grows_outward(pair, grid.lo, width, -1.0, best_value)) {
    return infinite_k(KProvenance::grid, grid.lo);
  }

  RejectionConstant k;
  k.provenance = KProvenance::grid;
  k.lower_estimate = true;
  k.argmax = node(best);
  k.K = best_value;
  const double a = node(best == 0 ? 0 : best - 1);
  const double b = node(std::min(best + 1, m));
  const auto refined = numerics::golden_section_max([&](double x) { return ratio_at(pair, x); }, a, b);
  if (!std::isfinite(refined.value)) return infinite_k(KProvenance::grid, refined.argmax);
  if (refined.value > k.K) {
    k.K = refined.value;
    k.argmax = refined.argmax;
  }
  if (pair.target_normalized) k.K = std::max(k.K, 1.0);
  return k;
}

double separation_distance(const RejectionConstant& k) {
  return k.infinite ? 1.0 : 1.0 - 1.0 / k.K;
}

RejectionConstant k_from_unnormalized(double sup_ratio, double L) {
  if (!(L > 0.0)) throw UsageError("k_from_unnormalized: L must be > 0, got " + format_double(L));
  if (!(sup_ratio >= 0.0)) throw UsageError("k_from_unnormalized: sup g/nu must be >= 0");
  if (std::isinf(sup_ratio)) return infinite_k(KProvenance::l_based, 0.0);
  RejectionConstant k;
  k.K = sup_ratio / L;
  k.provenance = KProvenance::l_based;
  return k;
}

RejectionConstant k_from_unnormalized(const DensityPair& pair, const GridSearch& grid, double L) {
  if (!(L > 0.0)) throw UsageError("k_from_unnormalized: L must be > 0, got " + format_double(L));
  DensityPair raw = pair;
  raw.target_normalized = false;
  const auto sup = rejection_constant(raw, grid);
  auto k = k_from_unnormalized(sup.infinite ? kInf : sup.K, L);
  k.lower_estimate = sup.lower_estimate;
  k.argmax = sup.argmax;
  return k;
}

AcceptanceRate rejection_sample(const DensityPair& pair, const DistributionSpec& proposal_law,
                                double K, std::size_t trials, std::uint64_t seed) {
  if (!(K >= 1.0) || std::isinf(K)) throw UsageError("rejection_sample: need finite K >= 1");
  AcceptanceRate out;
  out.trials = trials;
  auto proposals = substream(seed, 0, Lane::theta);
  auto coins = substream(seed, 0, Lane::partner);
  for (std::size_t t = 0; t < trials; ++t) {
    const double x = inv_cdf(proposal_law, proposals.next());
    const double u = coins.next();
    if (u * K * pair.proposal.pdf(x) < pair.target.pdf(x)) ++out.accepted;
  }
  return out;
}

BoundReport stationarity_bound(const RejectionConstant& k, const EstimateReport& report,
                               std::optional<double> L) {
  BoundReport out;
  out.K = k.K;
  out.infinite = k.infinite;
  out.separation = separation_distance(k);
  out.provenance = k.provenance;
  out.lower_estimate = k.lower_estimate;
  out.L = L;
  out.p = report.p;
  out.mean = report.mean;
  out.mean_se = report.se;
  const double inv_p = 1.0 / report.p;
  const std::size_t count = report.mean.size();
  out.bound.resize(count);
  out.bound_se.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    if (k.infinite) {
      out.bound[n] = kInf;
      out.bound_se[n] = kInf;
      continue;
    }
    const double m = report.mean[n];
    const double se = report.se[n];
    out.bound[n] = report.p == 1.0 ? k.K * m : std::pow(k.K * m, inv_p);
    if (report.p == 1.0) {
      out.bound_se[n] = k.K * se;
    } else if (m > 0.0) {
      out.bound_se[n] = inv_p * std::pow(k.K, inv_p) * std::pow(m, inv_p - 1.0) * se;
    } else {
      out.bound_se[n] = std::pow(k.K * se, inv_p);
    }
  }
  return out;
}

namespace {

nlohmann::ordered_json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

std::string bound_report_json(const BoundReport& report) {
  nlohmann::ordered_json j;
  j["K"] = number_or_string(report.K);
  j["K_infinite"] = report.infinite;
  j["K_provenance"] = std::string(to_string(report.provenance));
  j["K_lower_estimate"] = report.lower_estimate;
  j["separation"] = report.separation;
  if (report.L) j["L"] = *report.L;
  j["p"] = report.p;
  j["vacuous"] = report.vacuous();
  auto& its = j["iterations"] = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < report.mean.size(); ++n) {
    its.push_back({{"n", n},
                   {"mean", report.mean[n]},
                   {"mean_se", report.mean_se[n]},
                   {"bound", number_or_string(report.bound[n])},
                   {"bound_se", number_or_string(report.bound_se[n])}});
  }
  return j.dump(2) + "\n";
}

void write_bound_table(std::ostream& os, const BoundReport& report) {
  os << "iteration,mean,bound,se\n";
  for (std::size_t n = 0; n < report.mean.size(); ++n) {
    os << n << ',' << format_double(report.mean[n]) << ',' << format_double(report.bound[n]) << ','
       << format_double(report.bound_se[n]) << '\n';
  }
}

}  // namespace crn

#include "crn/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "crn/errors.hpp"
#include "crn/output.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace crn {

namespace {

double power(double d, double p) {
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  return std::pow(d, p);
}

}  // namespace

MeanSe mean_se(std::span<const double> samples) {
  MeanSe out;
  const std::size_t n = samples.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (n > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  }
  return out;
}

InitSampler point_mass(State x) {
  return [x = std::move(x)](UniformSource&) { return x; };
}

InitSampler from_distribution(DistributionSpec spec) {
  return [spec](UniformSource& s) { return State{inv_cdf(spec, s.next())}; };
}

// --- Algorithm 1 -------------------------------------------------------------------

Algorithm1Result algorithm1(const ChainModel& chain, const InitSampler& mu,
                            const InitSampler& nu, const Algorithm1Options& options) {
  if (options.replicates == 0) throw UsageError("algorithm1: replicates must be >= 1");
  if (options.horizon == 0) throw UsageError("algorithm1: horizon must be >= 1");
  if (!(options.p >= 1.0)) throw UsageError("algorithm1: p must be >= 1");
  if (!mu || !nu) throw UsageError("algorithm1: missing initial sampler");

  const std::size_t replicates = options.replicates;
  const std::size_t width = options.horizon + 1;
  std::vector<double> powered(replicates * width);

  Algorithm1Result result;
  if (options.keep_distances) result.distances.resize(replicates);
  if (options.keep_states) {
    result.x_states.resize(replicates);
    result.y_states.resize(replicates);
  }

  detail::parallel_for(replicates, options.workers, [&](std::size_t i) {
    auto init_x = substream(options.seed, i, Lane::init_x);
    auto init_y = substream(options.seed, i, options.shared_init_stream ? Lane::init_x : Lane::init_y);
    const State x0 = mu(init_x);
    const State y0 = nu(init_y);
    auto theta = substream(options.seed, i, Lane::theta);
    auto partner = substream(options.seed, i, Lane::partner);
    CoupledRun run;
    try {
      run = simulate_coupled(chain, x0, y0, theta, &partner, options.horizon, options.coupling);
    } catch (const NumericOverflow& e) {
      throw NumericOverflow(e.iteration(), i);
    }
    for (std::size_t n = 0; n < width; ++n) powered[i * width + n] = power(run.distances[n], options.p);
    if (options.keep_distances) result.distances[i] = std::move(run.distances);
    if (options.keep_states) {
      result.x_states[i] = std::move(run.x.states);
      result.y_states[i] = std::move(run.y.states);
    }
  });

  EstimateReport& report = result.report;
  report.replicates = replicates;
  report.horizon = options.horizon;
  report.p = options.p;
  report.coupling = options.coupling;
  report.seed = options.seed;
  report.mean.resize(width);
  report.se.resize(width);
  std::vector<double> column(replicates);
  for (std::size_t n = 0; n < width; ++n) {
    for (std::size_t i = 0; i < replicates; ++i) column[i] = powered[i * width + n];
    const MeanSe m = mean_se(column);
    report.mean[n] = m.mean;
    report.se[n] = m.se;
  }
  return result;
}

// --- Wasserstein oracle ------------------------------------------------------------

namespace {

double sorted_mean_power(std::span<const double> a, std::span<const double> b, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += power(std::abs(a[i] - b[i]), p);
  return s / static_cast<double>(a.size());
}

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("Wasserstein: samples must have equal length");
  if (a.empty()) throw UsageError("Wasserstein: samples must be nonempty");
}

// Sorted bootstrap resample of an already sorted sample, via index counts.
void resample_sorted(std::span<const double> sorted, UniformSource& s, std::vector<std::size_t>& counts,
                     std::vector<double>& out) {
  const std::size_t n = sorted.size();
  std::fill(counts.begin(), counts.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto idx = std::min(n - 1, static_cast<std::size_t>(s.next() * static_cast<double>(n)));
    ++counts[idx];
  }
  out.clear();
  for (std::size_t k = 0; k < n; ++k) out.insert(out.end(), counts[k], sorted[k]);
}

}  // namespace

double empirical_wasserstein(std::span<const double> a, std::span<const double> b, double p) {
  check_pair(a, b);
  if (!(p >= 1.0)) throw UsageError("Wasserstein: p must be >= 1");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return std::pow(sorted_mean_power(sa, sb, p), 1.0 / p);
}

OracleEstimate wasserstein_oracle(std::span<const double> a, std::span<const double> b, double p,
                                  std::uint64_t seed, std::size_t bootstrap_reps) {
  check_pair(a, b);
  if (!(p >= 1.0)) throw UsageError("Wasserstein: p must be >= 1");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  OracleEstimate out;
  out.value = sorted_mean_power(sa, sb, p);
  if (bootstrap_reps < 2) return out;

  std::vector<double> boot(bootstrap_reps);
  std::vector<std::size_t> counts(sa.size());
  std::vector<double> ra, rb;
  ra.reserve(sa.size());
  rb.reserve(sb.size());
  for (std::size_t r = 0; r < bootstrap_reps; ++r) {
    auto stream = substream(seed, r, Lane::theta);
    resample_sorted(sa, stream, counts, ra);
    resample_sorted(sb, stream, counts, rb);
    boot[r] = sorted_mean_power(ra, rb, p);
  }
  out.se = mean_se(boot).se * std::sqrt(static_cast<double>(bootstrap_reps));
  return out;
}

// --- Monotonicity --------------------------------------------------------------------

std::pair<double, double> theta_domain(const DistributionSpec& law, double eps) {
  double lo = law.support_lower();
  double hi = law.support_upper();
  if (!std::isfinite(lo)) lo = inv_cdf(law, eps);
  if (!std::isfinite(hi)) hi = inv_cdf(law, 1.0 - eps);
  return {lo, hi};
}

MonotonicityPartition classify_monotonicity(const std::function<double(double)>& g, double lo,
                                            double hi, std::size_t m) {
  if (m < 2) throw UsageError("classify_monotonicity: grid must have at least 2 cells");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw UsageError("classify_monotonicity: need a finite range lo < hi");
  }
  MonotonicityPartition part;
  part.lo = lo;
  part.hi = hi;
  part.grid = m;
  auto node = [&](std::size_t j) {
    return j == m ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(m);
  };
  std::vector<double> values(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    values[j] = g(node(j));
    if (!std::isfinite(values[j])) {
      throw DomainError("classify_monotonicity: non-finite value at theta = " +
                        format_double(node(j)));
    }
  }
  std::size_t start = 0;
  bool rising = values[1] - values[0] >= 0.0;
  for (std::size_t j = 1; j <= m; ++j) {
    const bool at_end = j == m;
    const bool next_rising = at_end ? rising : values[j + 1] - values[j] >= 0.0;
    if (at_end || next_rising != rising) {
      (rising ? part.increasing : part.decreasing).push_back({node(start), node(j)});
      start = j;
      rising = next_rising;
    }
  }
  return part;
}

MonotonicityPartition classify_monotonicity(const chains::ParamFunction& f, double z,
                                            std::size_t m) {
  const auto [lo, hi] = theta_domain(f.theta_law);
  return classify_monotonicity(f.at(z), lo, hi, m);
}

namespace {

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].lo, b[j].lo);
    const double hi = std::min(a[i].hi, b[j].hi);
    if (hi > lo) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

}  // namespace

bool CommonRegion::contains(double theta) const {
  const auto it = std::upper_bound(intervals.begin(), intervals.end(), theta,
                                   [](double t, const Interval& iv) { return t < iv.lo; });
  if (it == intervals.begin()) return false;
  return theta <= std::prev(it)->hi;
}

CommonRegion common_region(const MonotonicityPartition& px, const MonotonicityPartition& py,
                           const DistributionSpec& law) {
  CommonRegion region;
  auto both_up = intersect(px.increasing, py.increasing);
  auto both_down = intersect(px.decreasing, py.decreasing);
  std::vector<Interval> all;
  all.reserve(both_up.size() + both_down.size());
  all.insert(all.end(), both_up.begin(), both_up.end());
  all.insert(all.end(), both_down.begin(), both_down.end());
  std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : all) {
    if (!region.intervals.empty() && region.intervals.back().hi >= iv.lo) {
      region.intervals.back().hi = std::max(region.intervals.back().hi, iv.hi);
    } else {
      region.intervals.push_back(iv);
    }
  }
  const double lo_edge = std::max(px.lo, py.lo);
  const double hi_edge = std::min(px.hi, py.hi);
  double prob = 0.0;
  for (const auto& iv : region.intervals) {
    const double f_lo = iv.lo <= lo_edge ? 0.0 : cdf(law, iv.lo);
    const double f_hi = iv.hi >= hi_edge ? 1.0 : cdf(law, iv.hi);
    prob += f_hi - f_lo;
  }
  region.prob = std::clamp(prob, 0.0, 1.0);
  return region;
}

std::string_view to_string(MonotonicityCase c) {
  switch (c) {
    case MonotonicityCase::same_direction: return "P(A)=1";
    case MonotonicityCase::opposite_direction: return "P(A)=0";
    case MonotonicityCase::mixed: return "0<P(A)<1";
  }
  return "unknown";
}

MonotonicityCase classify_case(double prob_a) {
  constexpr double tol = 1e-9;
  if (prob_a >= 1.0 - tol) return MonotonicityCase::same_direction;
  if (prob_a <= tol) return MonotonicityCase::opposite_direction;
  return MonotonicityCase::mixed;
}

OneStepResult one_step_w2(const chains::ParamFunction& f, double x, double y,
                          std::size_t samples, std::uint64_t seed, std::size_t grid) {
  if (samples == 0) throw UsageError("one_step_w2: need at least one sample");
  const auto region = common_region(classify_monotonicity(f, x, grid),
                                    classify_monotonicity(f, y, grid), f.theta_law);
  OneStepResult out;
  out.prob_a = region.prob;
  out.regime = classify_case(region.prob);

  std::vector<double> crn_s(samples), anti_s(samples), err_s(samples);
  auto stream = substream(seed, 0, Lane::theta);
  for (std::size_t i = 0; i < samples; ++i) {
    const double u = stream.next();
    const double t = inv_cdf(f.theta_law, u);
    const double t_reflected = inv_cdf(f.theta_law, 1.0 - u);
    const double fx = f.f(t, x);
    const double fy = f.f(t, y);
    const double fx_reflected = f.f(t_reflected, x);
    crn_s[i] = (fx - fy) * (fx - fy);
    anti_s[i] = (fx_reflected - fy) * (fx_reflected - fy);
    err_s[i] = region.contains(t) ? 0.0 : 2.0 * (fx_reflected - fx) * fy;
  }
  out.crn = mean_se(crn_s);
  out.antithetic = mean_se(anti_s);
  out.error_term = mean_se(err_s);
  out.negative_error_term = out.error_term.mean < 0.0;
  switch (out.regime) {
    case MonotonicityCase::same_direction: out.lower = out.upper = out.crn.mean; break;
    case MonotonicityCase::opposite_direction: out.lower = out.upper = out.antithetic.mean; break;
    case MonotonicityCase::mixed:
      out.upper = out.crn.mean;
      out.lower = out.crn.mean - out.error_term.mean;
      break;
  }
  return out;
}

// --- Contraction ---------------------------------------------------------------------

ContractionEstimate contraction_estimate(const ChainModel& chain, const PairSampler& pairs,
                                         std::size_t pair_count, std::size_t theta_count,
                                         std::uint64_t seed) {
  if (pair_count == 0 || theta_count == 0) {
    throw UsageError("contraction_estimate: counts must be >= 1");
  }
  ContractionEstimate out;
  std::vector<double> ratios(theta_count);
  bool any = false;
  for (std::size_t k = 0; k < pair_count; ++k) {
    auto pair_stream = substream(seed, k, Lane::init_x);
    auto [x, xp] = pairs(pair_stream);
    const double d0 = distance(x, xp);
    if (d0 == 0.0) {
      ++out.skipped;
      continue;
    }
    auto theta_stream = substream(seed, k, Lane::theta);
    for (std::size_t j = 0; j < theta_count; ++j) {
      const auto theta = draw_theta(chain.theta_specs(), theta_stream, Coupling::crn).theta;
      ratios[j] = distance(chain.apply(theta, x), chain.apply(theta, xp)) / d0;
    }
    PairRatio pr{std::move(x), std::move(xp), mean_se(ratios)};
    if (!any || pr.ratio.mean > out.d_hat) out.d_hat = pr.ratio.mean;
    any = true;
    out.pairs.push_back(std::move(pr));
  }
  return out;
}

// --- KS ----------------------------------------------------------------------------------

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw UsageError("ks_two_sample: samples must be nonempty");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult out;
  out.statistic = d;
  out.critical_1pct = std::sqrt(-0.5 * std::log(0.005)) * std::sqrt((na + nb) / (na * nb));
  return out;
}

// --- Serialization --------------------------------------------------------------------------

std::string estimate_report_json(const EstimateReport& report) {
  nlohmann::ordered_json j;
  j["replicates"] = report.replicates;
  j["horizon"] = report.horizon;
  j["p"] = report.p;
  j["coupling"] = std::string(to_string(report.coupling));
  j["seed"] = report.seed;
  auto& its = j["iterations"] = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < report.mean.size(); ++n) {
    its.push_back({{"n", n}, {"mean", report.mean[n]}, {"se", report.se[n]}});
  }
  return j.dump(2) + "\n";
}

void write_estimate_csv(std::ostream& os, const EstimateReport& report) {
  os << "iteration,mean,se\n";
  for (std::size_t n = 0; n < report.mean.size(); ++n) {
    os << n << ',' << format_double(report.mean[n]) << ',' << format_double(report.se[n]) << '\n';
  }
}

}  // namespace crn

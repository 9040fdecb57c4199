// Acceptance gate: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "crn/bounds.hpp"
#include "crn/chains.hpp"
#include "crn/estimators.hpp"
#include "crn/gibbs.hpp"
#include "crn/ifs.hpp"
#include "crn/numerics.hpp"
#include "crn/rng.hpp"
#include "json.hpp"

using namespace crn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct CliRun {
  int code = -1;
  double seconds = 0.0;
};

CliRun cli(const std::string& args) {
  const std::string cmd = std::string(CRNCONV_PATH) + " " + args + " > /dev/null 2>&1";
  const auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const auto t1 = std::chrono::steady_clock::now();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::chrono::duration<double>(t1 - t0).count()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("crn_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shared by criteria 1, 3 and 12.
struct GibbsRun {
  CliRun run;
  fs::path out;
  nlohmann::json report;
};

const GibbsRun& gibbs_run() {
  static const GibbsRun r = [] {
    GibbsRun g;
    g.out = scratch("bound_w1");
    g.run = cli("bound --example gibbs-regression --workers 1 --out " + g.out.string());
    if (g.run.code == 0) g.report = nlohmann::json::parse(slurp(g.out / "bound.json"));
    return g;
  }();
  return r;
}

double as_number(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  return std::stod(v.get<std::string>());
}

Outcome ac1() {
  const auto& g = gibbs_run();
  if (g.run.code != 0) return {false, "CLI exit " + std::to_string(g.run.code)};
  const double K = as_number(g.report["K"]);
  const double L = as_number(g.report["L"]);
  const bool ok = K >= 2.01 && K <= 2.22 && L >= 0.949 && L <= 0.988 && g.run.seconds < 60;
  return {ok, "K=" + fmt(K) + " (want [2.01,2.22]), L=" + fmt(L) + " (want [0.949,0.988]), " +
                  fmt(g.run.seconds) + "s"};
}

Outcome ac2() {
  const double c = gibbs::tv_constant(20, 1, 10);
  return {c == 22.05, "tv_constant(20,1,10)=" + fmt(c)};
}

Outcome ac3() {
  const auto& g = gibbs_run();
  if (g.run.code != 0) return {false, "CLI exit " + std::to_string(g.run.code)};
  const auto& it = g.report["iterations"][25];
  const double w = as_number(it["w_bound"]);
  const double tv = as_number(it["tv_bound"]);
  const bool ok = g.report["I"] == 1000 && g.report["N"] == 100 && w >= 5e-4 && w <= 1e-2 &&
                  tv <= 0.1 && g.run.seconds < 300;
  return {ok, "n=25: W bound=" + fmt(w) + " (want [5e-4,1e-2]), TV bound=" + fmt(tv) +
                  " (want <=0.1), mean |diff|=" + fmt(as_number(it["mean_abs_diff"])) + ", " +
                  fmt(g.run.seconds) + "s"};
}

Outcome ac4() {
  Algorithm1Options o;
  o.horizon = 50;
  o.replicates = 1000;
  o.seed = 2024;
  const auto r = algorithm1(chains::ar1(0.9, 1.0), point_mass({25.0}), point_mass({-25.0}), o).report;
  double worst = 0.0, worst_se = 0.0;
  for (std::size_t n = 0; n <= 50; ++n) {
    const double exact = std::pow(0.9, static_cast<double>(n)) * 50.0;
    worst = std::max(worst, std::abs(r.mean[n] - exact) / exact);
    worst_se = std::max(worst_se, r.se[n] / exact);
  }
  return {worst <= 1e-12 && worst_se <= 1e-12,
          "max rel err=" + fmt(worst) + ", max SE/mean=" + fmt(worst_se)};
}

// Oracle W₂² between the laws of f(θ, x) and f(θ, y) from independent θ draws.
OracleEstimate one_step_oracle(const chains::ParamFunction& f, double x, double y, std::size_t n,
                               std::uint64_t seed) {
  std::vector<double> a(n), b(n);
  auto sa = substream(seed, 1, Lane::theta), sb = substream(seed, 2, Lane::theta);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = f.f(inv_cdf(f.theta_law, sa.next()), x);
    b[i] = f.f(inv_cdf(f.theta_law, sb.next()), y);
  }
  return wasserstein_oracle(a, b, 2.0, seed + 1);
}

Outcome ac5() {
  std::string detail;
  bool ok = true;
  struct Case {
    chains::ParamFunction f;
    double x, y;
  };
  const std::vector<Case> cases = {{chains::update_map(chains::random_logistic(1.0)), 0.99, 0.1},
                                   {chains::update_map(chains::trig_chain()), 0.75, 0.05}};
  for (const auto& c : cases) {
    const auto est = one_step_w2(c.f, c.x, c.y, 100000, 501);
    const auto orc = one_step_oracle(c.f, c.x, c.y, 100000, 502);
    const double se = std::hypot(est.crn.se, orc.se);
    const bool good = est.regime == MonotonicityCase::same_direction &&
                      std::abs(est.crn.mean - orc.value) <= 3 * se;
    ok = ok && good;
    detail += c.f.name + ": P(A)=" + fmt(est.prob_a) + " CRN=" + fmt(est.crn.mean) + " oracle=" +
              fmt(orc.value) + " 3SE=" + fmt(3 * se) + "; ";
  }
  return {ok, detail};
}

Outcome ac6() {
  const auto f = chains::linear_family();
  const auto est = one_step_w2(f, 1.0, -1.0, 100000, 601);
  const auto orc = one_step_oracle(f, 1.0, -1.0, 100000, 602);
  const double se_orc = std::hypot(est.antithetic.se, orc.se);
  const double se_gap = std::hypot(est.antithetic.se, est.crn.se);
  const bool ok = est.regime == MonotonicityCase::opposite_direction &&
                  std::abs(est.antithetic.mean - orc.value) <= 3 * se_orc &&
                  est.crn.mean - est.antithetic.mean > 3 * se_gap;
  return {ok, "antithetic=" + fmt(est.antithetic.mean) + " oracle=" + fmt(orc.value) + " CRN=" +
                  fmt(est.crn.mean) + " (SE " + fmt(est.crn.se) + ")"};
}

Outcome ac7() {
  const auto f = chains::cos_family();
  const std::size_t m = 4096;
  const auto region = common_region(classify_monotonicity(f, 1.0, m), classify_monotonicity(f, 2.0, m), f.theta_law);
  const double h = 2.0 / m;
  bool ok = region.intervals.size() == 2;
  if (ok) {
    const auto& a = region.intervals[0];
    const auto& b = region.intervals[1];
    ok = std::abs(a.lo - 0.0) <= h && std::abs(a.hi - 0.5) <= h && std::abs(b.lo - 1.5) <= h &&
         std::abs(b.hi - 2.0) <= h;
  }
  ok = ok && std::abs(region.prob - 0.5) <= 2.0 / m;
  std::string d = "A =";
  for (const auto& iv : region.intervals) d += " (" + fmt(iv.lo) + ", " + fmt(iv.hi) + ")";
  return {ok, d + ", P(A)=" + fmt(region.prob)};
}

// Endpoints after n steps from x0, one independent stream per sample.
std::vector<double> marginal(const ChainModel& chain, const State& x0, std::size_t n, std::size_t count,
                             std::uint64_t seed) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto s = substream(seed, i, Lane::theta);
    v[i] = simulate_forward(chain, x0, s, n).states.back()[0];
  }
  return v;
}

Outcome ac8() {
  bool ok = true;
  std::string detail;
  const std::size_t I = 10000;
  const std::size_t M = 200000;
  for (const auto& e : chains::registry()) {
    std::vector<EstimateReport> crn_runs;
    for (double p : {1.0, 2.0}) {
      Algorithm1Options o;
      o.horizon = 10;
      o.replicates = I;
      o.p = p;
      o.seed = 802;
      crn_runs.push_back(algorithm1(e.chain, point_mass(e.x0), point_mass(e.y0), o).report);
    }
    for (std::size_t n : {2, 5, 10}) {
      const auto a = marginal(e.chain, e.x0, n, M, 804);
      const auto b = marginal(e.chain, e.y0, n, M, 805);
      for (const auto& r : crn_runs) {
        const auto orc = wasserstein_oracle(a, b, r.p, 806 + n);
        const double se = std::hypot(r.se[n], orc.se);
        if (!(orc.value <= r.mean[n] + 3 * se)) {
          ok = false;
          detail += e.chain.name() + " p=" + fmt(r.p) + " n=" + std::to_string(n) + ": oracle " +
                    fmt(orc.value) + " > CRN " + fmt(r.mean[n]) + " + 3SE; ";
        }
      }
    }
  }
  if (ok) detail = "all 5 chains, n in {2,5,10}, p in {1,2}: oracle <= CRN + 3SE; ";

  const auto& mh = chains::find_chain("metropolis");
  Algorithm1Options o;
  o.horizon = 1000;
  o.replicates = 1000;
  o.seed = 810;
  const auto crn_run = algorithm1(mh.chain, point_mass(mh.x0), point_mass(mh.y0), o).report;
  const auto orc = wasserstein_oracle(marginal(mh.chain, mh.x0, 1000, 1000, 811),
                                      marginal(mh.chain, mh.y0, 1000, 1000, 812), 1.0, 813);
  const double se = std::hypot(crn_run.se[1000], orc.se);
  const bool gap = crn_run.mean[1000] - orc.value > 3 * se;
  ok = ok && gap;
  detail += "metropolis n=1000: CRN " + fmt(crn_run.mean[1000]) + " vs oracle W1 " + fmt(orc.value) +
            " (3SE " + fmt(3 * se) + ")";
  return {ok, detail};
}

Outcome ac9() {
  const DensityPair pair{density_of(DistributionSpec::gamma(1, 1)), density_of(DistributionSpec::gamma(1, 0.5))};
  const auto k = rejection_constant(pair, {4096, 0, 50});
  const auto rate = rejection_sample(pair, DistributionSpec::gamma(1, 0.5), k.K, 1000000, 901).rate();
  const bool ok = !k.infinite && std::abs(k.K - 2.0) <= 1e-9 && std::abs(rate - 0.5) <= 0.0015 &&
                  std::abs(separation_distance(k) - 0.5) <= 1e-9;
  return {ok, "K=" + fmt(k.K) + ", acceptance=" + fmt(rate)};
}

Outcome ac10() {
  const auto chain = chains::ar1(0.9, 1.0);
  const std::size_t n = 10000;
  std::vector<double> fwd(n), bwd(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = substream(1001, i, Lane::theta);
    auto b = substream(1002, i, Lane::theta);
    fwd[i] = simulate_forward(chain, {25.0}, a, 30).states.back()[0];
    bwd[i] = backward_endpoint(chain, {25.0}, b, 30)[0];
  }
  const auto ks = ks_two_sample(fwd, bwd);
  return {!ks.rejects(), "D=" + fmt(ks.statistic) + ", 1% critical=" + fmt(ks.critical_1pct)};
}

Outcome ac11() {
  double worst_rt = 0.0;
  const std::vector<DistributionSpec> laws = {
      DistributionSpec::uniform(-1, 3), DistributionSpec::normal(2, 3),    DistributionSpec::gamma(0.5, 2),
      DistributionSpec::gamma(10.5, 1), DistributionSpec::inverse_gamma(10.5, 5), DistributionSpec::beta(1.5, 0.5),
      DistributionSpec::beta(2, 5)};
  for (const auto& law : laws) {
    for (int j = 1; j < 1000; ++j) {
      const double u = j / 1000.0;
      worst_rt = std::max(worst_rt, std::abs(cdf(law, inv_cdf(law, u)) - u));
    }
  }

  double worst_chol = 0.0;
  auto s = substream(1101, 0, Lane::theta);
  for (std::size_t q : {1, 2, 4, 8}) {
    for (int rep = 0; rep < 25; ++rep) {
      numerics::Matrix b(q, q);
      for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) b(i, j) = 2 * s.next() - 1;
      const auto a = b * b.transpose() + numerics::Matrix::identity(q).scaled(static_cast<double>(q));
      const auto l = numerics::cholesky(a);
      worst_chol = std::max(worst_chol, (l * l.transpose() - a).norm_inf() / a.norm_inf());
    }
  }

  double worst_id = 0.0;
  auto t = substream(1102, 0, Lane::theta);
  for (int rep = 0; rep < 200; ++rep) {
    const double a = 0.1 + 20 * t.next(), b = 0.1 + 20 * t.next(), x = t.next();
    worst_id = std::max(worst_id, std::abs(numerics::reg_inc_beta(a, b, x) - (1 - numerics::reg_inc_beta(b, a, 1 - x))));
    const double g = 30 * t.next();
    worst_id = std::max(worst_id, std::abs(numerics::reg_inc_gamma_lower(a, g) + numerics::reg_inc_gamma_upper(a, g) - 1));
  }
  worst_id = std::max(worst_id, std::abs(numerics::reg_inc_gamma_lower(1, 1) - (1 - std::exp(-1.0))));
  worst_id = std::max(worst_id, std::abs(numerics::reg_inc_gamma_lower(2, 2) - (1 - 3 * std::exp(-2.0))));
  worst_id = std::max(worst_id, std::abs(numerics::reg_inc_beta(1, 1, 0.3) - 0.3));
  worst_id = std::max(worst_id, std::abs(numerics::reg_inc_beta(2, 1, 0.5) - 0.25));
  worst_id = std::max(worst_id, std::abs(numerics::log_gamma(5) - std::log(24.0)) / std::log(24.0));
  worst_id = std::max(worst_id, std::abs(numerics::log_gamma(0.5) - 0.5 * std::log(std::numbers::pi)));

  const bool ok = worst_rt <= 1e-9 && worst_chol <= 1e-9 && worst_id <= 1e-12;
  return {ok, "round-trip " + fmt(worst_rt) + ", Cholesky " + fmt(worst_chol) + ", identities " + fmt(worst_id)};
}

Outcome ac12() {
  struct Cmd {
    std::string name, args;
    std::vector<std::string> files;
  };
  const std::vector<Cmd> cmds = {
      {"simulate", "simulate --chain trig --n 200 --seed 5", {"trajectory.csv", "manifest.json"}},
      {"couple", "couple --chain logistic --n 40 --replicates 2000 --seed 6",
       {"estimate.csv", "estimate.json", "manifest.json"}},
      {"couple_mh", "couple --chain metropolis --n 100 --replicates 500 --p 2 --seed 7",
       {"estimate.csv", "estimate.json", "manifest.json"}},
      {"monotonicity", "monotonicity --function cos --x 1 --y 2 --seed 8", {"monotonicity.json", "manifest.json"}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cmds) {
    const bool has_workers = c.name.rfind("couple", 0) == 0;
    const auto a = scratch(c.name + "_a"), b = scratch(c.name + "_b");
    const auto ra = cli(c.args + (has_workers ? " --workers 1" : "") + " --out " + a.string());
    const auto rb = cli(c.args + (has_workers ? " --workers 4" : "") + " --out " + b.string());
    bool same = ra.code == 0 && rb.code == 0;
    for (const auto& f : c.files) same = same && slurp(a / f) == slurp(b / f) && !slurp(a / f).empty();
    if (!same) detail += c.name + " differs; ";
    ok = ok && same;
  }
  const auto& g = gibbs_run();
  const auto b = scratch("bound_w4");
  const auto rb = cli("bound --example gibbs-regression --workers 4 --out " + b.string());
  bool same = g.run.code == 0 && rb.code == 0;
  for (const char* f : {"bound.json", "bound.csv", "histogram.csv", "manifest.json"}) {
    same = same && slurp(g.out / f) == slurp(b / f);
  }
  if (!same) detail += "bound differs; ";
  ok = ok && same;
  return {ok, detail.empty() ? "simulate, couple, monotonicity, bound byte-identical across reruns and --workers 1/4"
                             : detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 Gibbs K and L", ac1},
      {"AC2 Gibbs TV constant", ac2},
      {"AC3 Gibbs bound at n=25", ac3},
      {"AC4 AR(1) exactness", ac4},
      {"AC5 one-step CRN unbiasedness", ac5},
      {"AC6 antithetic case", ac6},
      {"AC7 set A recovery", ac7},
      {"AC8 multi-step upper bound", ac8},
      {"AC9 rejection/separation identity", ac9},
      {"AC10 forward/backward marginals", ac10},
      {"AC11 numerics", ac11},
      {"AC12 determinism", ac12},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << " [" << fmt(secs) << "s]"
              << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (12 - failed) << "/12 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

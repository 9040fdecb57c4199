#include <cmath>
#include <numbers>

#include "crn/bounds.hpp"
#include "crn/chains.hpp"
#include "crn/errors.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace crn;

namespace {

DensityPair exp_pair(double target_rate, double proposal_rate) {
  return {density_of(DistributionSpec::gamma(1, target_rate)),
          density_of(DistributionSpec::gamma(1, proposal_rate))};
}

EstimateReport report_of(std::vector<double> mean, std::vector<double> se, double p) {
  EstimateReport r;
  r.mean = std::move(mean);
  r.se = std::move(se);
  r.p = p;
  r.horizon = r.mean.size() - 1;
  return r;
}

}  // namespace

TEST_CASE("identity pairs give K = 1 and s = 0") {
  for (const auto& spec : {DistributionSpec::normal(0, 1), DistributionSpec::gamma(2, 1),
                           DistributionSpec::beta(2, 5), DistributionSpec::uniform(-1, 1)}) {
    const auto d = density_of(spec);
    const auto [lo, hi] = theta_domain(spec);
    const auto k = rejection_constant({d, d}, {1024, lo, hi});
    CHECK(k.K == 1.0);
    CHECK(separation_distance(k) == 0.0);
  }
}

TEST_CASE("Exp(1) over Exp(1/2) has K = 2") {
  const auto k = rejection_constant(exp_pair(1, 0.5), {4096, 0, 50});
  CHECK_FALSE(k.infinite);
  CHECK(k.lower_estimate);
  CHECK(k.K == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(separation_distance(k) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(separation_distance(k) - (1 - 1 / k.K)) <= 1e-12);
}

TEST_CASE("Exp(1) over Exp(2) is unbounded") {
  const auto k = rejection_constant(exp_pair(1, 2), {4096, 0, 50});
  CHECK(k.infinite);
  CHECK(std::isinf(k.K));
  CHECK(separation_distance(k) == 1.0);
}

TEST_CASE("proposal vanishing where the target lives is unbounded") {
  const DensityPair p{density_of(DistributionSpec::uniform(0, 2)), density_of(DistributionSpec::uniform(0, 1))};
  CHECK(rejection_constant(p, {256, 0, 2}).infinite);
}

TEST_CASE("normal target under an inflated normal proposal") {
  const double s = 1.0 / std::sqrt(1 - 0.81);
  const DensityPair p{density_of(DistributionSpec::normal(0, s)),
                      density_of(DistributionSpec::normal(0, s * std::sqrt(2.0)))};
  const auto k = rejection_constant(p, {4096, -40, 40});
  CHECK(k.K == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("analytic and unnormalized constants") {
  CHECK(rejection_constant_analytic(3.0).K == 3.0);
  CHECK(rejection_constant_analytic(INFINITY).infinite);
  CHECK_THROWS_AS(rejection_constant_analytic(0.5), UsageError);

  CHECK(k_from_unnormalized(1.0, 1.0).K == 1.0);
  CHECK(k_from_unnormalized(2.0, 2.0).K == 1.0);
  CHECK(k_from_unnormalized(2.0, 2.0).provenance == KProvenance::l_based);
  CHECK_THROWS_AS(k_from_unnormalized(1.0, 0.0), UsageError);
  CHECK_THROWS_AS(k_from_unnormalized(1.0, -1.0), UsageError);

  const auto nu = density_of(DistributionSpec::normal(0, 1));
  Density1D g = nu;
  g.pdf = [nu](double x) { return 2 * nu.pdf(x); };
  const auto k = k_from_unnormalized(DensityPair{g, nu, false}, {1024, -8, 8}, 2.0);
  CHECK(k.K == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rejection sampler acceptance rate is 1/K") {
  const auto pair = exp_pair(1, 0.5);
  const auto k = rejection_constant(pair, {4096, 0, 50});
  const std::size_t n = 1000000;
  const auto rate = rejection_sample(pair, DistributionSpec::gamma(1, 0.5), k.K, n, 7).rate();
  const double a = 1 / k.K;
  CHECK(std::abs(rate - a) <= 3 * std::sqrt(a * (1 - a) / n));

  const double s = 1.0 / std::sqrt(1 - 0.81);
  const DensityPair np{density_of(DistributionSpec::normal(0, s)),
                       density_of(DistributionSpec::normal(0, s * std::sqrt(2.0)))};
  const auto r2 = rejection_sample(np, DistributionSpec::normal(0, s * std::sqrt(2.0)), std::sqrt(2.0), n, 8).rate();
  const double a2 = 1 / std::sqrt(2.0);
  CHECK(std::abs(r2 - a2) <= 3 * std::sqrt(a2 * (1 - a2) / n));
}

TEST_CASE("stationarity bound arithmetic") {
  const auto r = report_of({4.0, 1.0, 0.0}, {0.4, 0.1, 0.0}, 1.0);
  const auto b1 = stationarity_bound(rejection_constant_analytic(1.0), r);
  CHECK(b1.bound == std::vector<double>{4.0, 1.0, 0.0});
  const auto b2 = stationarity_bound(rejection_constant_analytic(2.0), r);
  CHECK(b2.bound == std::vector<double>{8.0, 2.0, 0.0});
  CHECK(b2.bound_se[0] == doctest::Approx(0.8));
  CHECK(b2.separation == 0.5);

  const auto r2 = report_of({4.0, 1.0}, {0.4, 0.1}, 2.0);
  const auto b3 = stationarity_bound(rejection_constant_analytic(1.0), r2);
  CHECK(b3.bound[0] == doctest::Approx(2.0));
  CHECK(b3.bound_se[0] == doctest::Approx(0.5 * 0.4 / 2.0));

  const auto published = stationarity_bound(rejection_constant_analytic(2.1150), report_of({0.0014}, {0.0}, 1.0));
  CHECK(published.bound[0] == doctest::Approx(0.00291).epsilon(0.01));
}

TEST_CASE("infinite K gives a vacuous bound") {
  const auto b = stationarity_bound(rejection_constant(exp_pair(1, 2), {512, 0, 50}), report_of({1.0}, {0.1}, 1.0));
  CHECK(b.vacuous());
  CHECK(std::isinf(b.bound[0]));
  const auto j = nlohmann::json::parse(bound_report_json(b));
  CHECK(j["vacuous"] == true);
  CHECK(j["K"] == "inf");
}

TEST_CASE("the bound holds for AR(1) paired with an inflated stationary proposal") {
  const double s = 1.0 / std::sqrt(1 - 0.81);
  const auto pi_law = DistributionSpec::normal(0, s);
  const auto nu_law = DistributionSpec::normal(0, s * std::sqrt(2.0));
  const auto k = rejection_constant(DensityPair{density_of(pi_law), density_of(nu_law)}, {4096, -60, 60});
  const auto chain = chains::ar1(0.9, 1.0);

  Algorithm1Options o;
  o.horizon = 50;
  o.replicates = 20000;
  o.seed = 41;
  const auto crn_run = algorithm1(chain, point_mass({10.0}), from_distribution(nu_law), o);
  const auto bound = stationarity_bound(k, crn_run.report);

  auto marg = o;
  marg.keep_states = true;
  marg.seed = 42;
  const auto samples = algorithm1(chain, point_mass({10.0}), from_distribution(nu_law), marg);
  std::vector<double> stationary(o.replicates);
  auto st = substream(43, 0, Lane::theta);
  for (auto& v : stationary) v = inv_cdf(pi_law, st.next());
  for (std::size_t n = 0; n <= 50; ++n) {
    std::vector<double> a;
    for (std::size_t i = 0; i < o.replicates; ++i) a.push_back(samples.x_states[i][n][0]);
    const double w1 = empirical_wasserstein(a, stationary, 1.0);
    CHECK_MESSAGE(w1 <= bound.bound[n] + 3 * bound.bound_se[n], "n=" << n);
  }
}

TEST_CASE("bound table layout") {
  const auto b = stationarity_bound(rejection_constant_analytic(2.0), report_of({1.0}, {0.5}, 1.0));
  std::ostringstream os;
  write_bound_table(os, b);
  CHECK(os.str() == "iteration,mean,bound,se\n0,1,2,1\n");
}

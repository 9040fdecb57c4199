#include "crn/chains.hpp"

#include <cmath>
#include <numbers>

#include "crn/errors.hpp"

namespace crn::chains {

using std::numbers::pi;

ChainModel ar1(double phi, double sigma) {
  return ChainModel("ar1", 1, {DistributionSpec::normal(0.0, sigma)},
                    [phi](std::span<const double> theta, const State& x) {
                      return State{phi * x[0] + theta[0]};
                    });
}

ChainModel random_logistic(double a) {
  if (!(a > 0.5)) throw ParameterError("random_logistic: a must exceed 1/2");
  ChainModel::Traits traits;
  traits.domain = Box{{0.0}, {1.0}};
  return ChainModel("logistic", 1, {DistributionSpec::beta(a + 0.5, a - 0.5)},
                    [](std::span<const double> theta, const State& x) {
                      return State{4.0 * theta[0] * x[0] * (1.0 - x[0])};
                    },
                    std::move(traits));
}

ChainModel trig_chain() {
  ChainModel::Traits traits;
  traits.domain = Box{{-1.0}, {1.0}};
  return ChainModel("trig", 1, {DistributionSpec::uniform(-pi / 2.0, 3.0 * pi / 2.0)},
                    [](std::span<const double> theta, const State& x) {
                      return State{std::sin((1.0 - std::abs(x[0])) * std::cos(theta[0]))};
                    },
                    std::move(traits));
}

ChainModel dirichlet_means(double a) {
  ChainModel::Traits traits;
  traits.scalar_theory_applies = false;
  return ChainModel("dirichlet",
                    1, {DistributionSpec::beta(a, 1.0), DistributionSpec::normal(0.0, 1.0)},
                    [](std::span<const double> theta, const State& x) {
                      return State{(1.0 - theta[0]) * theta[1] + theta[0] * x[0]};
                    },
                    std::move(traits));
}

double metropolis_target(double x) {
  if (!(x >= 0.5 && x <= 2.0)) return 0.0;
  return std::abs(x * x * x * std::sin(std::pow(x, 4)) * std::cos(std::pow(x, 5)));
}

namespace {

bool metropolis_accepts(double step, std::span<const double> theta, double x) {
  const double proposal = x + step * theta[0];
  const double gp = metropolis_target(proposal);
  const double gx = metropolis_target(x);
  if (gx == 0.0) return gp > 0.0;
  return theta[1] < gp / gx;
}

}  // namespace

ChainModel metropolis_demo(double step) {
  if (!(step > 0.0)) throw ParameterError("metropolis_demo: step must be > 0");
  ChainModel::Traits traits;
  traits.domain = Box{{0.5}, {2.0}};
  traits.event = [step](std::span<const double> theta, const State& x) {
    return metropolis_accepts(step, theta, x[0]);
  };
  return ChainModel(
      "metropolis", 1, {DistributionSpec::normal(0.0, 1.0), DistributionSpec::uniform(0.0, 1.0)},
      [step](std::span<const double> theta, const State& x) {
        return metropolis_accepts(step, theta, x[0]) ? State{x[0] + step * theta[0]} : x;
      },
      std::move(traits));
}

std::function<double(double)> ParamFunction::at(double x) const {
  return [f = f, x](double theta) { return f(theta, x); };
}

ParamFunction cos_family(double x_scale) {
  return {"cos",
          [x_scale](double theta, double x) { return std::cos(pi * x_scale * x * theta); },
          DistributionSpec::uniform(0.0, 2.0)};
}

ParamFunction linear_family() {
  return {"linear", [](double theta, double x) { return x * theta; },
          DistributionSpec::uniform(0.0, 1.0)};
}

ParamFunction update_map(const ChainModel& chain) {
  if (chain.state_dim() != 1 || chain.theta_specs().size() != 1) {
    throw UsageError(chain.name() + ": update_map needs scalar state and scalar theta");
  }
  return {chain.name(),
          [chain](double theta, double x) {
            const double t[1] = {theta};
            return chain.apply(t, State{x})[0];
          },
          chain.theta_specs().front()};
}

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {ar1(0.9, 1.0), {25.0}, {-25.0}, "autoregressive X_n = 0.9 X_{n-1} + Z_n, Z_n ~ N(0,1)"},
      {random_logistic(1.0), {0.99}, {0.1}, "random logistic map, theta ~ Beta(1.5, 0.5)"},
      {trig_chain(), {0.75}, {0.05}, "sin[(1-|x|) cos(theta)], theta ~ Unif(-pi/2, 3pi/2)"},
      {dirichlet_means(1.5), {10.0}, {-10.0},
       "Dirichlet process means, theta ~ Beta(1.5, 1), Z ~ N(0,1); bivariate theta"},
      {metropolis_demo(0.1), {0.6}, {1.9},
       "random-walk Metropolis, step 0.1, target |x^3 sin(x^4) cos(x^5)| on [0.5, 2]"},
  };
  return entries;
}

std::vector<std::string> chain_names() {
  std::vector<std::string> names;
  for (const auto& e : registry()) names.push_back(e.chain.name());
  return names;
}

const RegistryEntry& find_chain(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.chain.name() == name) return e;
  }
  std::string known;
  for (const auto& n : chain_names()) known += (known.empty() ? "" : ", ") + n;
  throw UsageError("unknown chain '" + std::string(name) + "'; registered: " + known);
}

}  // namespace crn::chains

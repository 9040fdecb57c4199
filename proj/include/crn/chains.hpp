#pragma once

// Concrete chains used throughout the library and its tests.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "crn/ifs.hpp"

namespace crn::chains {

/// X_n = φ X_{n-1} + Z_n, Z_n ~ N(0, σ).
ChainModel ar1(double phi, double sigma);

/// X_n = 4 θ_n X_{n-1} (1 - X_{n-1}), θ_n ~ Beta(a + 1/2, a - 1/2), on [0, 1]. Requires a > 1/2.
ChainModel random_logistic(double a);

/// X_n = sin[(1 - |X_{n-1}|) cos θ_n], θ_n ~ Unif(-π/2, 3π/2), on [-1, 1].
ChainModel trig_chain();

/// X_n = (1 - θ_n) Z_n + θ_n X_{n-1} with θ_n ~ Beta(a, 1), Z_n ~ N(0, 1).
/// θ is two-dimensional, so scalar_theory_applies() is false.
ChainModel dirichlet_means(double a);

/// Unnormalized Metropolis target |x³ sin(x⁴) cos(x⁵)| on [0.5, 2], zero elsewhere.
double metropolis_target(double x);

/// Random-walk Metropolis on metropolis_target with proposal x + step·Z and acceptance
/// U < g(x')/g(x); θ = (Z, U). The chain's event() reports acceptance.
ChainModel metropolis_demo(double step);

/// A family θ ↦ f(θ, x) together with the law of θ. Not necessarily a chain.
struct ParamFunction {
  std::string name;
  std::function<double(double theta, double x)> f;
  DistributionSpec theta_law;

  std::function<double(double)> at(double x) const;
};

/// f(θ, x) = cos(π · x_scale · x · θ), θ ~ Unif(0, 2).
ParamFunction cos_family(double x_scale = 1.0);

/// f(θ, x) = x θ, θ ~ Unif(0, 1).
ParamFunction linear_family();

/// Views a chain with scalar state and scalar θ as f(θ, x). Throws UsageError otherwise.
ParamFunction update_map(const ChainModel& chain);

struct RegistryEntry {
  ChainModel chain;
  State x0;
  State y0;
  std::string description;
};

/// Registered chains with their default initial pair, in a fixed order.
const std::vector<RegistryEntry>& registry();

/// Throws UsageError naming the registered chains when `name` is unknown.
const RegistryEntry& find_chain(std::string_view name);

std::vector<std::string> chain_names();

}  // namespace crn::chains

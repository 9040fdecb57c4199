#pragma once

// Markov chains written as iterated function systems X_n = f(θ_n, X_{n-1}), and the
// forward, backward and coupled simulations built on them.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crn/rng.hpp"

namespace crn {

using State = std::vector<double>;

/// Deterministic update map f(θ, x).
using UpdateFn = std::function<State(std::span<const double> theta, const State& x)>;
/// Optional per-step event, e.g. a Metropolis acceptance.
using EventFn = std::function<bool(std::span<const double> theta, const State& x)>;

/// Axis-aligned box, closed.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
  bool contains(const State& x) const;
};

class ChainModel {
 public:
  struct Traits {
    std::optional<Box> domain;
    EventFn event;
    /// False when θ is multivariate and the scalar-θ optimality result does not cover the chain.
    bool scalar_theory_applies = true;
  };

  ChainModel(std::string name, std::size_t state_dim, std::vector<DistributionSpec> theta_specs,
             UpdateFn update, Traits traits);
  ChainModel(std::string name, std::size_t state_dim, std::vector<DistributionSpec> theta_specs,
             UpdateFn update);

  const std::string& name() const { return name_; }
  std::size_t state_dim() const { return state_dim_; }
  const std::vector<DistributionSpec>& theta_specs() const { return theta_specs_; }
  const std::optional<Box>& domain() const { return traits_.domain; }
  bool has_event() const { return static_cast<bool>(traits_.event); }
  bool scalar_theory_applies() const { return traits_.scalar_theory_applies; }

  State apply(std::span<const double> theta, const State& x) const;
  bool event(std::span<const double> theta, const State& x) const;

  /// Throws UsageError if x has the wrong dimension or lies outside the declared domain.
  void check_initial(const State& x) const;

 private:
  std::string name_;
  std::size_t state_dim_;
  std::vector<DistributionSpec> theta_specs_;
  UpdateFn update_;
  Traits traits_;
};

enum class Direction { forward, backward };

struct Trajectory {
  std::vector<State> states;  ///< x_0 … x_N
  Direction direction = Direction::forward;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicate_id;
  /// Per-step event indicators (index n-1 for step n); empty when the chain has none.
  std::vector<std::uint8_t> events;
};

struct CoupledRun {
  Trajectory x;
  Trajectory y;
  Coupling coupling = Coupling::crn;
  std::vector<double> distances;  ///< d_n = |x_n - y_n|, Euclidean for vector states
};

double distance(const State& a, const State& b);

/// x_n = f(θ_n, x_{n-1}); consumes exactly N · |θ| uniforms.
Trajectory simulate_forward(const ChainModel& chain, const State& x0, UniformSource& stream,
                            std::size_t steps);

/// x̃_n = f(θ_1, f(θ_2, … f(θ_n, x_0))) using the same θ draws simulate_forward would make.
/// Stores all θ (O(N · |θ|) memory) and costs O(N²) map evaluations for the full path.
Trajectory simulate_backward(const ChainModel& chain, const State& x0, UniformSource& stream,
                             std::size_t steps);

/// Only x̃_N, in O(N) evaluations.
State backward_endpoint(const ChainModel& chain, const State& x0, UniformSource& stream,
                        std::size_t steps);

/// Two copies driven per draw_theta(mode). `partner` is needed only for independent coupling.
CoupledRun simulate_coupled(const ChainModel& chain, const State& x0, const State& y0,
                            UniformSource& stream, UniformSource* partner, std::size_t steps,
                            Coupling mode);

/// CSV with header `iteration,coordinate,value`.
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace crn

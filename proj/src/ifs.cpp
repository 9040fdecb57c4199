#include "crn/ifs.hpp"

#include <cmath>
#include <ostream>

#include "crn/errors.hpp"
#include "crn/output.hpp"

namespace crn {

bool Box::contains(const State& x) const {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

ChainModel::ChainModel(std::string name, std::size_t state_dim,
                       std::vector<DistributionSpec> theta_specs, UpdateFn update, Traits traits)
    : name_(std::move(name)),
      state_dim_(state_dim),
      theta_specs_(std::move(theta_specs)),
      update_(std::move(update)),
      traits_(std::move(traits)) {
  if (state_dim_ == 0) throw UsageError("ChainModel: state_dim must be >= 1");
  if (theta_specs_.empty()) throw UsageError("ChainModel: theta_specs must be nonempty");
  if (!update_) throw UsageError("ChainModel: missing update map");
  if (traits_.domain && (traits_.domain->lower.size() != state_dim_ ||
                         traits_.domain->upper.size() != state_dim_)) {
    throw UsageError("ChainModel: domain dimension mismatch");
  }
}

ChainModel::ChainModel(std::string name, std::size_t state_dim,
                       std::vector<DistributionSpec> theta_specs, UpdateFn update)
    : ChainModel(std::move(name), state_dim, std::move(theta_specs), std::move(update), Traits{}) {}

State ChainModel::apply(std::span<const double> theta, const State& x) const {
  return update_(theta, x);
}

bool ChainModel::event(std::span<const double> theta, const State& x) const {
  return traits_.event ? traits_.event(theta, x) : false;
}

void ChainModel::check_initial(const State& x) const {
  if (x.size() != state_dim_) {
    throw UsageError(name_ + ": initial state has dimension " + std::to_string(x.size()) +
                     ", expected " + std::to_string(state_dim_));
  }
  if (traits_.domain && !traits_.domain->contains(x)) {
    throw UsageError(name_ + ": initial state outside the chain's domain");
  }
}

double distance(const State& a, const State& b) {
  if (a.size() != b.size()) throw UsageError("distance: dimension mismatch");
  if (a.size() == 1) return std::abs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

namespace {

void require_finite(const State& x, std::size_t iteration) {
  for (double v : x) {
    if (!std::isfinite(v)) throw NumericOverflow(iteration);
  }
}

void tag_source(Trajectory& t, const UniformSource& source) {
  if (const auto* s = dynamic_cast<const UniformStream*>(&source)) {
    t.seed = s->seed();
    t.replicate_id = s->replicate_id();
  }
}

std::vector<std::vector<double>> draw_all(const ChainModel& chain, UniformSource& stream,
                                          std::size_t steps) {
  std::vector<std::vector<double>> thetas;
  thetas.reserve(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    thetas.push_back(draw_theta(chain.theta_specs(), stream, Coupling::crn).theta);
  }
  return thetas;
}

}  // namespace

Trajectory simulate_forward(const ChainModel& chain, const State& x0, UniformSource& stream,
                            std::size_t steps) {
  chain.check_initial(x0);
  Trajectory t;
  tag_source(t, stream);
  t.states.reserve(steps + 1);
  t.states.push_back(x0);
  for (std::size_t n = 1; n <= steps; ++n) {
    const auto theta = draw_theta(chain.theta_specs(), stream, Coupling::crn).theta;
    const State& prev = t.states.back();
    if (chain.has_event()) t.events.push_back(chain.event(theta, prev) ? 1 : 0);
    State next = chain.apply(theta, prev);
    require_finite(next, n);
    t.states.push_back(std::move(next));
  }
  return t;
}

Trajectory simulate_backward(const ChainModel& chain, const State& x0, UniformSource& stream,
                             std::size_t steps) {
  chain.check_initial(x0);
  Trajectory t;
  t.direction = Direction::backward;
  tag_source(t, stream);
  const auto thetas = draw_all(chain, stream, steps);
  t.states.reserve(steps + 1);
  t.states.push_back(x0);
  for (std::size_t n = 1; n <= steps; ++n) {
    State x = x0;
    for (std::size_t k = n; k-- > 0;) {
      x = chain.apply(thetas[k], x);
      require_finite(x, n);
    }
    t.states.push_back(std::move(x));
  }
  return t;
}

State backward_endpoint(const ChainModel& chain, const State& x0, UniformSource& stream,
                        std::size_t steps) {
  chain.check_initial(x0);
  const auto thetas = draw_all(chain, stream, steps);
  State x = x0;
  for (std::size_t k = steps; k-- > 0;) {
    x = chain.apply(thetas[k], x);
    require_finite(x, steps);
  }
  return x;
}

CoupledRun simulate_coupled(const ChainModel& chain, const State& x0, const State& y0,
                            UniformSource& stream, UniformSource* partner, std::size_t steps,
                            Coupling mode) {
  chain.check_initial(x0);
  chain.check_initial(y0);
  CoupledRun run;
  run.coupling = mode;
  tag_source(run.x, stream);
  if (partner != nullptr && mode == Coupling::independent) {
    tag_source(run.y, *partner);
  } else {
    tag_source(run.y, stream);
  }
  run.x.states.reserve(steps + 1);
  run.y.states.reserve(steps + 1);
  run.distances.reserve(steps + 1);
  run.x.states.push_back(x0);
  run.y.states.push_back(y0);
  run.distances.push_back(distance(x0, y0));
  for (std::size_t n = 1; n <= steps; ++n) {
    const auto draw = draw_theta(chain.theta_specs(), stream, mode, partner);
    const State& xp = run.x.states.back();
    const State& yp = run.y.states.back();
    if (chain.has_event()) {
      run.x.events.push_back(chain.event(draw.theta, xp) ? 1 : 0);
      run.y.events.push_back(chain.event(draw.partner, yp) ? 1 : 0);
    }
    State xn = chain.apply(draw.theta, xp);
    State yn = chain.apply(draw.partner, yp);
    require_finite(xn, n);
    require_finite(yn, n);
    run.distances.push_back(distance(xn, yn));
    run.x.states.push_back(std::move(xn));
    run.y.states.push_back(std::move(yn));
  }
  return run;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  os << "iteration,coordinate,value\n";
  for (std::size_t n = 0; n < trajectory.states.size(); ++n) {
    const State& s = trajectory.states[n];
    for (std::size_t c = 0; c < s.size(); ++c) {
      os << n << ',' << c << ',' << format_double(s[c]) << '\n';
    }
  }
}

}  // namespace crn

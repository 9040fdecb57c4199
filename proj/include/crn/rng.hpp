#pragma once

// Deterministic uniform streams and inverse-CDF transforms.
//
// Every random quantity in the library is an explicit, non-decreasing function of
// uniforms drawn from a UniformSource. Coupling two chains then reduces to deciding
// which uniforms each copy sees.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

/// How the second copy of a chain obtains its randomness.
enum class Coupling {
  crn,          ///< same uniform u for both copies
  antithetic,   ///< second copy uses 1 - u
  independent,  ///< second copy reads its own stream
};

std::string_view to_string(Coupling mode);
/// Throws UsageError for unknown names.
Coupling parse_coupling(std::string_view name);

/// Anything that yields uniforms in the open interval (0, 1).
class UniformSource {
 public:
  virtual ~UniformSource() = default;
  virtual double next() = 0;
};

/// Counter-based stream: draw j of replicate r is mix(key(seed) + counter(r, j) * γ) where
/// mix is a 64-bit bijection and counter packs r into the high 24 bits and j into the low 40.
/// Distinct (replicate, position) pairs therefore never produce the same raw 64-bit word.
///
/// Uniforms are (k + 0.5) * 2^-52 for a 52-bit k, so they exclude {0, 1} and 1 - u is exact.
class UniformStream final : public UniformSource {
 public:
  static constexpr std::uint64_t kMaxReplicate = (std::uint64_t{1} << 24) - 1;
  static constexpr std::uint64_t kMaxPosition = (std::uint64_t{1} << 40) - 1;

  UniformStream(std::uint64_t seed, std::uint64_t replicate_id);

  double next() override;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t replicate_id() const { return replicate_id_; }
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t replicate_id_;
  std::uint64_t position_ = 0;
  std::uint64_t key_;
};

double next_uniform(UniformSource& stream);

/// Independent purposes within one replicate each get their own lane.
enum class Lane : std::uint64_t { theta = 0, partner = 1, init_x = 2, init_y = 3 };
inline constexpr std::uint64_t kLaneCount = 4;

/// Stream for (replicate, lane) under a master seed.
UniformStream substream(std::uint64_t seed, std::uint64_t replicate, Lane lane);

/// Replays a fixed list of uniforms. Used to pin simulations to hand-checked values.
class RecordedUniforms final : public UniformSource {
 public:
  explicit RecordedUniforms(std::vector<double> values);
  double next() override;
  std::size_t consumed() const { return index_; }

 private:
  std::vector<double> values_;
  std::size_t index_ = 0;
};

enum class Family { uniform, normal, gamma, inverse_gamma, beta };

/// A univariate law with a monotone quantile map. Rates, not scales, parametrize the
/// gamma families.
class DistributionSpec {
 public:
  static DistributionSpec uniform(double a, double b);
  static DistributionSpec normal(double mean, double sd);
  static DistributionSpec gamma(double shape, double rate);
  static DistributionSpec inverse_gamma(double shape, double rate);
  static DistributionSpec beta(double a, double b);
  /// Scaled inverse chi-squared, stored as inverse-gamma(ν/2, ν c²/2).
  static DistributionSpec inverse_chi_squared(double dof, double scale_sq);

  Family family() const { return family_; }
  double p1() const { return params_[0]; }
  double p2() const { return params_[1]; }

  /// Closure of the support.
  double support_lower() const;
  double support_upper() const;

  std::string describe() const;

 private:
  DistributionSpec(Family f, double a, double b) : family_(f), params_{a, b} {}
  Family family_;
  std::array<double, 2> params_;
};

/// Generalized inverse CDF. Throws DomainError unless 0 < u < 1.
double inv_cdf(const DistributionSpec& spec, double u);
double cdf(const DistributionSpec& spec, double x);
double pdf(const DistributionSpec& spec, double x);

struct ThetaDraw {
  std::vector<double> theta;
  std::vector<double> partner;
};

/// Draws one θ vector (coordinates in declaration order) and its partner under `mode`.
/// `partner_stream` is read only for Coupling::independent, where it is required.
ThetaDraw draw_theta(std::span<const DistributionSpec> specs, UniformSource& stream,
                     Coupling mode, UniformSource* partner_stream = nullptr);

}  // namespace crn

#include "crn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "crn/errors.hpp"
#include "crn/numerics.hpp"

namespace crn {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr double kTwoPow52Inv = 1.0 / 4503599627370496.0;

}  // namespace

std::string_view to_string(Coupling mode) {
  switch (mode) {
    case Coupling::crn: return "crn";
    case Coupling::antithetic: return "antithetic";
    case Coupling::independent: return "independent";
  }
  return "unknown";
}

Coupling parse_coupling(std::string_view name) {
  if (name == "crn") return Coupling::crn;
  if (name == "antithetic") return Coupling::antithetic;
  if (name == "independent") return Coupling::independent;
  throw UsageError("unknown coupling mode '" + std::string(name) + "'");
}

UniformStream::UniformStream(std::uint64_t seed, std::uint64_t replicate_id)
    : seed_(seed), replicate_id_(replicate_id), key_(mix64(seed ^ 0xD1B54A32D192ED03ULL)) {
  if (replicate_id > kMaxReplicate) {
    throw UsageError("UniformStream: replicate_id exceeds " + std::to_string(kMaxReplicate));
  }
}

double UniformStream::next() {
  if (position_ > kMaxPosition) throw UsageError("UniformStream: stream exhausted");
  const std::uint64_t counter = (replicate_id_ << 40) | position_;
  ++position_;
  const std::uint64_t raw = mix64(key_ + counter * kGolden);
  return (static_cast<double>(raw >> 12) + 0.5) * kTwoPow52Inv;
}

double next_uniform(UniformSource& stream) { return stream.next(); }

UniformStream substream(std::uint64_t seed, std::uint64_t replicate, Lane lane) {
  if (replicate > UniformStream::kMaxReplicate / kLaneCount) {
    throw UsageError("substream: replicate index too large");
  }
  return UniformStream(seed, replicate * kLaneCount + static_cast<std::uint64_t>(lane));
}

RecordedUniforms::RecordedUniforms(std::vector<double> values) : values_(std::move(values)) {
  for (double u : values_) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("RecordedUniforms: values must lie in (0, 1)");
  }
}

double RecordedUniforms::next() {
  if (index_ >= values_.size()) throw UsageError("RecordedUniforms: no values left");
  return values_[index_++];
}

// --- DistributionSpec -------------------------------------------------------------

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(what) + " must be finite and > 0");
  }
}

}  // namespace

DistributionSpec DistributionSpec::uniform(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ParameterError("uniform: require finite a < b");
  }
  return {Family::uniform, a, b};
}

DistributionSpec DistributionSpec::normal(double mean, double sd) {
  if (!std::isfinite(mean)) throw ParameterError("normal: mean must be finite");
  require_positive(sd, "normal: sd");
  return {Family::normal, mean, sd};
}

DistributionSpec DistributionSpec::gamma(double shape, double rate) {
  require_positive(shape, "gamma: shape");
  require_positive(rate, "gamma: rate");
  return {Family::gamma, shape, rate};
}

DistributionSpec DistributionSpec::inverse_gamma(double shape, double rate) {
  require_positive(shape, "inverse-gamma: shape");
  require_positive(rate, "inverse-gamma: rate");
  return {Family::inverse_gamma, shape, rate};
}

DistributionSpec DistributionSpec::beta(double a, double b) {
  require_positive(a, "beta: a");
  require_positive(b, "beta: b");
  return {Family::beta, a, b};
}

DistributionSpec DistributionSpec::inverse_chi_squared(double dof, double scale_sq) {
  require_positive(dof, "inverse-chi-squared: dof");
  require_positive(scale_sq, "inverse-chi-squared: scale");
  return inverse_gamma(dof / 2.0, dof * scale_sq / 2.0);
}

double DistributionSpec::support_lower() const {
  switch (family_) {
    case Family::uniform: return params_[0];
    case Family::normal: return -std::numeric_limits<double>::infinity();
    default: return 0.0;
  }
}

double DistributionSpec::support_upper() const {
  switch (family_) {
    case Family::uniform: return params_[1];
    case Family::beta: return 1.0;
    default: return std::numeric_limits<double>::infinity();
  }
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::uniform: os << "uniform(" << p1() << ", " << p2() << ")"; break;
    case Family::normal: os << "normal(" << p1() << ", " << p2() << ")"; break;
    case Family::gamma: os << "gamma(shape=" << p1() << ", rate=" << p2() << ")"; break;
    case Family::inverse_gamma:
      os << "inverse-gamma(shape=" << p1() << ", rate=" << p2() << ")";
      break;
    case Family::beta: os << "beta(" << p1() << ", " << p2() << ")"; break;
  }
  return os.str();
}

// --- Quantiles -------------------------------------------------------------------

namespace {

constexpr int kMaxRootIter = 200;
constexpr double kRootTol = 1e-12;

// Acklam's rational approximation, refined by one Halley step on erfc.
double standard_normal_quantile(double u) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (u < p_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - p_low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Refine against whichever tail keeps the residual well conditioned.
  const double e = u <= 0.5 ? numerics::normal_cdf(x) - u : (1.0 - u) - numerics::normal_sf(x);
  const double step = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - step / (1.0 + 0.5 * x * step);
}

double gamma_log_pdf_unit(double shape, double x) {
  return (shape - 1.0) * std::log(x) - x - numerics::log_gamma(shape);
}

// Solves P(shape, g) = p (upper == false) or Q(shape, g) = p (upper == true) for g.
double gamma_quantile_unit(double shape, double p, bool upper) {
  auto residual = [&](double g) {
    return upper ? numerics::reg_inc_gamma_upper(shape, g) - p
                 : numerics::reg_inc_gamma_lower(shape, g) - p;
  };
  // residual is increasing in g for the lower form, decreasing for the upper form.
  const double sign = upper ? -1.0 : 1.0;

  double lo = 0.0;
  double hi = std::max(1.0, shape);
  while (sign * residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::numeric_limits<double>::max();
  }

  // Wilson–Hilferty start.
  const double p_lower = upper ? 1.0 - p : p;
  const double z = standard_normal_quantile(std::clamp(p_lower, 1e-300, 1.0 - 1e-16));
  double g = shape * std::pow(1.0 - 1.0 / (9.0 * shape) + z / (3.0 * std::sqrt(shape)), 3.0);
  if (!(g > lo && g < hi)) g = 0.5 * (lo + hi);

  for (int i = 0; i < kMaxRootIter; ++i) {
    const double r = residual(g);
    if (r == 0.0) return g;
    if (sign * r < 0.0) {
      lo = g;
    } else {
      hi = g;
    }
    const double density = std::exp(gamma_log_pdf_unit(shape, g));
    double next = g - sign * r / density;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - g) <= kRootTol * g || hi - lo <= kRootTol * hi) return next;
    g = next;
  }
  return g;
}

double beta_quantile(double a, double b, double u) {
  const double log_norm = numerics::log_gamma(a + b) - numerics::log_gamma(a) -
                          numerics::log_gamma(b);
  double lo = 0.0;
  double hi = 1.0;
  double x = a / (a + b);
  for (int i = 0; i < kMaxRootIter; ++i) {
    const double r = numerics::reg_inc_beta(a, b, x) - u;
    if (r == 0.0) return x;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double density =
        std::exp(log_norm + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
    double next = x - r / density;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= kRootTol * x || hi - lo <= kRootTol * hi) return next;
    x = next;
  }
  return x;
}

}  // namespace

double inv_cdf(const DistributionSpec& spec, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("inv_cdf: u must lie in (0, 1)");
  switch (spec.family()) {
    case Family::uniform: return spec.p1() + (spec.p2() - spec.p1()) * u;
    case Family::normal: return spec.p1() + spec.p2() * standard_normal_quantile(u);
    case Family::gamma: {
      const bool upper = u > 0.5;
      return gamma_quantile_unit(spec.p1(), upper ? 1.0 - u : u, upper) / spec.p2();
    }
    case Family::inverse_gamma: {
      // F(x) = Q(shape, rate / x), so x = rate / g with Q(shape, g) = u.
      const bool upper = u <= 0.5;
      const double g = gamma_quantile_unit(spec.p1(), upper ? u : 1.0 - u, upper);
      return spec.p2() / g;
    }
    case Family::beta: return beta_quantile(spec.p1(), spec.p2(), u);
  }
  throw ParameterError("inv_cdf: unknown family");
}

double cdf(const DistributionSpec& spec, double x) {
  switch (spec.family()) {
    case Family::uniform:
      return std::clamp((x - spec.p1()) / (spec.p2() - spec.p1()), 0.0, 1.0);
    case Family::normal: return numerics::normal_cdf((x - spec.p1()) / spec.p2());
    case Family::gamma:
      return x <= 0.0 ? 0.0 : numerics::reg_inc_gamma_lower(spec.p1(), spec.p2() * x);
    case Family::inverse_gamma:
      return x <= 0.0 ? 0.0 : numerics::reg_inc_gamma_upper(spec.p1(), spec.p2() / x);
    case Family::beta:
      return numerics::reg_inc_beta(spec.p1(), spec.p2(), std::clamp(x, 0.0, 1.0));
  }
  throw ParameterError("cdf: unknown family");
}

double pdf(const DistributionSpec& spec, double x) {
  const double a = spec.p1();
  const double b = spec.p2();
  switch (spec.family()) {
    case Family::uniform: return (x >= a && x <= b) ? 1.0 / (b - a) : 0.0;
    case Family::normal: {
      const double z = (x - a) / b;
      return std::exp(-0.5 * z * z) / (b * std::sqrt(2.0 * std::numbers::pi));
    }
    case Family::gamma:
      if (x < 0.0) return 0.0;
      if (x == 0.0) return a < 1.0 ? std::numeric_limits<double>::infinity() : (a == 1.0 ? b : 0.0);
      return std::exp(a * std::log(b) + (a - 1.0) * std::log(x) - b * x - numerics::log_gamma(a));
    case Family::inverse_gamma:
      if (x <= 0.0) return 0.0;
      return std::exp(a * std::log(b) - (a + 1.0) * std::log(x) - b / x - numerics::log_gamma(a));
    case Family::beta:
      if (x < 0.0 || x > 1.0) return 0.0;
      return std::exp(numerics::log_gamma(a + b) - numerics::log_gamma(a) -
                      numerics::log_gamma(b) + (a - 1.0) * std::log(x) +
                      (b - 1.0) * std::log1p(-x));
  }
  throw ParameterError("pdf: unknown family");
}

ThetaDraw draw_theta(std::span<const DistributionSpec> specs, UniformSource& stream,
                     Coupling mode, UniformSource* partner_stream) {
  if (mode == Coupling::independent && partner_stream == nullptr) {
    throw UsageError("draw_theta: independent coupling needs a partner stream");
  }
  ThetaDraw out;
  out.theta.reserve(specs.size());
  out.partner.reserve(specs.size());
  for (const auto& spec : specs) {
    const double u = stream.next();
    out.theta.push_back(inv_cdf(spec, u));
    switch (mode) {
      case Coupling::crn: out.partner.push_back(out.theta.back()); break;
      case Coupling::antithetic: out.partner.push_back(inv_cdf(spec, 1.0 - u)); break;
      case Coupling::independent: out.partner.push_back(inv_cdf(spec, partner_stream->next())); break;
    }
  }
  return out;
}

}  // namespace crn

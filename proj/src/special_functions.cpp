#include "roughmf/special_functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "roughmf/errors.hpp"

namespace roughmf {

namespace {

using mp50 = boost::multiprecision::cpp_bin_float_50;

// Below this r = |x|^{1/α} the double-extended series loses < 3 digits.
constexpr double kExtendedSeriesRadius = 6.0;
// Above this r the asymptotic expansion is accurate to ~e^{-r}.
constexpr double kAsymptoticRadius = 40.0;
constexpr int kMaxSeriesTerms = 200000;

[[noreturn]] void throw_nonconvergence(const char* regime, double alpha, double beta, double x,
                                       int terms) {
  std::ostringstream os;
  os << "mittag_leffler: " << regime << " did not converge (alpha=" << alpha << ", beta=" << beta
     << ", x=" << x << ", terms=" << terms << ")";
  throw NumericalError(os.str());
}

double series_extended(double alpha, double beta, double x) {
  if (x == 0.0) return 1.0 / std::tgamma(beta);
  const long double log_abs = std::log(std::fabs(static_cast<long double>(x)));
  const bool alternating = x < 0.0;
  const double r = std::pow(std::fabs(x), 1.0 / alpha);
  long double sum = 0.0L;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const long double arg = static_cast<long double>(alpha) * k + beta;
    long double term = std::exp(k * log_abs - std::lgamma(arg));
    if (alternating && (k & 1)) term = -term;
    sum += term;
    if (k > r / alpha + 2 && std::fabs(term) <= 1e-21L * std::fabs(sum)) {
      return static_cast<double>(sum);
    }
  }
  throw_nonconvergence("extended-precision series", alpha, beta, x, kMaxSeriesTerms);
}

double series_multiprecision(double alpha, double beta, double x) {
  const mp50 log_abs = boost::multiprecision::log(mp50(std::fabs(x)));
  const double r = std::pow(std::fabs(x), 1.0 / alpha);
  const mp50 a(alpha);
  const mp50 b(beta);
  mp50 sum = 0;
  for (int k = 0; k < kMaxSeriesTerms; ++k) {
    const mp50 arg = a * k + b;
    mp50 term = boost::multiprecision::exp(log_abs * k - boost::math::lgamma(arg));
    if (x < 0.0 && (k & 1)) term = -term;
    sum += term;
    if (k > r / alpha + 2 && boost::multiprecision::abs(term) <= mp50(1e-24) * boost::multiprecision::abs(sum)) {
      return static_cast<double>(sum);
    }
  }
  throw_nonconvergence("multiprecision series", alpha, beta, x, kMaxSeriesTerms);
}

// 1/Γ(y) for any real y, zero at the poles.
double reciprocal_gamma(double y) {
  if (y <= 0.0 && y == std::floor(y)) return 0.0;
  if (y > 0.0) return 1.0 / std::tgamma(y);
  // 1/Γ(y) = sin(πy) Γ(1-y) / π
  return boost::math::sin_pi(y) * std::tgamma(1.0 - y) / M_PI;
}

// E_{α,β}(x) ~ -Σ_{k≥1} x^{-k}/Γ(β - αk) for x → -∞, α < 1 (or α = 1 up to
// an exponentially small term). Truncated where the envelope
// Γ(αk - β + 1)|x|^{-k} is smallest; the terms themselves dip near the poles
// of Γ(β - αk) and cannot be used for that decision.
double asymptotic_negative(double alpha, double beta, double x) {
  const double log_abs = std::log(-x);
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  double inv_x_power = 1.0;
  for (int k = 1; k < 1000; ++k) {
    inv_x_power /= x;
    const double shifted = alpha * k - beta + 1.0;
    const double envelope = shifted > 0.0 ? std::lgamma(shifted) - k * log_abs : -k * log_abs;
    if (envelope > previous) break;
    previous = envelope;
    sum += -inv_x_power * reciprocal_gamma(beta - alpha * k);
    if (sum != 0.0 && envelope < std::log(1e-18 * std::fabs(sum))) break;
  }
  if (!std::isfinite(sum)) throw_nonconvergence("asymptotic expansion", alpha, beta, x, 1000);
  return sum;
}

// E_{1,β}(x) for x < 0 through Kummer's transformation
//   Γ(β) E_{1,β}(x) = 1F1(1; β; x) = e^x Σ_k (β-1)/(β-1+k) (-x)^k / k!,
// a sum of positive terms.
double kummer_negative(double beta, double x) {
  const long double y = -static_cast<long double>(x);
  long double power = 1.0L;  // y^k / k!
  long double sum = 1.0L;
  for (int k = 1; k < 1000; ++k) {
    power *= y / k;
    const long double term = power * (beta - 1.0L) / (beta - 1.0L + k);
    sum += term;
    if (k > y && term <= 1e-21L * sum) {
      return static_cast<double>(std::exp(-y) * sum / std::tgamma(static_cast<long double>(beta)));
    }
  }
  throw_nonconvergence("Kummer series", 1.0, beta, x, 1000);
}

}  // namespace

double gamma_eval(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_eval: argument must be positive");
  return std::tgamma(x);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("gamma_p: requires a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  return boost::math::gamma_p(a, x);
}

MittagLefflerParams::MittagLefflerParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("mittag_leffler: alpha must lie in (0, 1]");
  if (!(beta > 0.0)) throw DomainError("mittag_leffler: beta must be positive");
}

double mittag_leffler(const MittagLefflerParams& p, double x) {
  const double alpha = p.alpha;
  const double beta = p.beta;
  if (!std::isfinite(x)) throw DomainError("mittag_leffler: argument must be finite");
  if (x < -kMittagLefflerMaxNegative) throw DomainError("mittag_leffler: argument below supported range");

  if (alpha == 1.0) {
    if (beta == 1.0) return std::exp(x);
    if (beta == 2.0) return x == 0.0 ? 1.0 : std::expm1(x) / x;
    if (beta > 1.0 && x < 0.0 && x >= -kAsymptoticRadius) return kummer_negative(beta, x);
  }

  const double r = std::pow(std::fabs(x), 1.0 / alpha);
  if (x > 0.0) {
    // Dominant behaviour exp(r)/α · x^{(1-β)/α}.
    if (r - std::log(alpha) + (1.0 - beta) / alpha * std::log(x) > 700.0) {
      throw NumericalError("mittag_leffler: result overflows double precision");
    }
    return series_extended(alpha, beta, x);
  }
  if (r <= kExtendedSeriesRadius) return series_extended(alpha, beta, x);
  if (r <= kAsymptoticRadius) return series_multiprecision(alpha, beta, x);
  return asymptotic_negative(alpha, beta, x);
}

double mittag_leffler(double alpha, double beta, double x) {
  return mittag_leffler(MittagLefflerParams(alpha, beta), x);
}

double frac_resolvent(double alpha, double lambda, double t) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw DomainError("frac_resolvent: alpha must lie in (1/2, 1]");
  if (!(lambda >= 0.0)) throw DomainError("frac_resolvent: lambda must be non-negative");
  if (!(t > 0.0)) throw DomainError("frac_resolvent: t must be positive");
  return std::pow(t, alpha - 1.0) * mittag_leffler(alpha, alpha, -lambda * std::pow(t, alpha));
}

double frac_resolvent_integral(double alpha, double lambda, double t) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw DomainError("frac_resolvent_integral: alpha must lie in (1/2, 1]");
  if (!(lambda >= 0.0)) throw DomainError("frac_resolvent_integral: lambda must be non-negative");
  if (!(t >= 0.0)) throw DomainError("frac_resolvent_integral: t must be non-negative");
  if (t == 0.0) return 0.0;
  const double ta = std::pow(t, alpha);
  return ta * mittag_leffler(alpha, alpha + 1.0, -lambda * ta);
}

namespace {

// u^β E_{α,β+1}(-λu^α) = ∫_0^u s^{β-1} E_{α,β}(-λs^α) ds.
double resolvent_antiderivative(double alpha, double beta, double lambda, double u) {
  if (u <= 0.0) return 0.0;
  return std::pow(u, beta) * mittag_leffler(alpha, beta + 1.0, -lambda * std::pow(u, alpha));
}

void check_time(const ModelParams& params, double t, const char* who) {
  if (!(t >= 0.0 && t <= params.horizon * (1.0 + 1e-12))) {
    throw DomainError(std::string(who) + ": t must lie in [0, T]");
  }
}

}  // namespace

double forward_variance(const ModelParams& params, double t) {
  params.validate();
  check_time(params, t, "forward_variance");
  const double alpha = params.alpha();
  double value = params.v0;
  params.theta.for_each_piece(t, [&](double a, double b, double theta) {
    value += (theta - params.lambda * params.v0) * (resolvent_antiderivative(alpha, alpha, params.lambda, t - a) -
                      resolvent_antiderivative(alpha, alpha, params.lambda, t - b));
  });
  return value;
}

double integrated_forward_variance(const ModelParams& params, double t) {
  params.validate();
  check_time(params, t, "integrated_forward_variance");
  const double alpha = params.alpha();
  double value = params.v0 * t;
  params.theta.for_each_piece(t, [&](double a, double b, double theta) {
    value += (theta - params.lambda * params.v0) *
             (resolvent_antiderivative(alpha, alpha + 1.0, params.lambda, t - a) -
                      resolvent_antiderivative(alpha, alpha + 1.0, params.lambda, t - b));
  });
  return value;
}

}  // namespace roughmf

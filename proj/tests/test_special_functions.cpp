#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "roughmf/errors.hpp"
#include "roughmf/special_functions.hpp"

using namespace roughmf;
using doctest::Approx;

TEST_CASE("gamma_eval known values and reflection") {
  CHECK(gamma_eval(1.0) == Approx(1.0).epsilon(1e-15));
  CHECK(gamma_eval(0.5) == Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_eval(1.6) == Approx(0.8935153493).epsilon(1e-9));
  for (double x : {0.1, 0.3, 0.6, 0.9}) {
    const double reflection = std::numbers::pi / std::sin(std::numbers::pi * x);
    CHECK(gamma_eval(x) * gamma_eval(1.0 - x) == Approx(reflection).epsilon(1e-13));
  }
  CHECK(gamma_eval(1.6) == Approx(0.6 * gamma_eval(0.6)).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_eval(0.0), DomainError);
  CHECK_THROWS_AS(gamma_eval(-1.5), DomainError);
}

TEST_CASE("gamma_p matches quadrature of the integrand") {
  for (double a : {0.4, 0.6, 1.6}) {
    for (double x : {0.1, 1.0, 7.5}) {
      const double ref = oracle::integrate_singular([&](double s) { return std::pow(s, a - 1) * std::exp(-s); }, 0.0, x) /
                         std::tgamma(a);
      CHECK(gamma_p(a, x) == Approx(ref).epsilon(1e-11));
    }
  }
  CHECK(gamma_p(0.6, 0.0) == 0.0);
}

TEST_CASE("mittag_leffler trivial cases") {
  for (double x : {-1.0, 0.0, 1.0, -20.0, 5.0}) CHECK(mittag_leffler(1.0, 1.0, x) == Approx(std::exp(x)).epsilon(1e-13));
  for (double a : {0.3, 0.6, 0.95}) CHECK(mittag_leffler(a, a, 0.0) == Approx(1.0 / std::tgamma(a)).epsilon(1e-14));
  CHECK(mittag_leffler(1.0, 2.0, 1.0) == Approx(std::numbers::e - 1.0).epsilon(1e-14));
  CHECK(mittag_leffler(1.0, 2.0, -3.0) == Approx((std::exp(-3.0) - 1.0) / -3.0).epsilon(1e-14));
}

TEST_CASE("mittag_leffler against extended-precision series in every regime") {
  struct Case {
    double alpha, beta, x;
  };
  // r = |x|^{1/α} spans the low-order series, the cancellation regime and the
  // start of the asymptotic expansion.
  const Case cases[] = {{0.6, 0.6, -0.3}, {0.6, 1.6, -1.0}, {0.6, 1.0, -2.5}, {0.6, 0.6, -5.0},
                        {0.6, 1.6, -8.0}, {0.6, 0.6, -9.9}, {0.6, 1.0, -10.5}, {0.6, 1.6, -12.0},
                        {0.8, 0.8, -20.0}, {0.6, 0.6, 2.0},  {0.6, 1.6, 3.0},  {0.9, 1.0, 5.0},
                        {1.0, 1.4, -20.0}, {1.0, 2.6, -35.0}, {0.55, 1.55, -7.0}};
  for (const auto& c : cases) {
    CAPTURE(c.alpha);
    CAPTURE(c.beta);
    CAPTURE(c.x);
    const double ref = oracle::mittag_leffler_series(c.alpha, c.beta, c.x);
    CHECK(mittag_leffler(c.alpha, c.beta, c.x) == Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("mittag_leffler with alpha = 1/2 against exp(x²) erfc(-x)") {
  for (double x : {-0.5, -2.0, -5.0, -7.0, -15.0, -100.0, -1000.0, 0.7, 2.0}) {
    CAPTURE(x);
    CHECK(mittag_leffler(0.5, 1.0, x) == Approx(oracle::mittag_leffler_half(x)).epsilon(1e-10));
  }
}

TEST_CASE("mittag_leffler domain") {
  CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(1.2, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.6, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(mittag_leffler(0.6, 1.0, -2.0 * kMittagLefflerMaxNegative), DomainError);
  CHECK_NOTHROW(mittag_leffler(0.6, 1.0, -1e4));
  CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, 100.0), NumericalError);
}

TEST_CASE("frac_resolvent") {
  CHECK(frac_resolvent(0.6, 0.0, 1.0) == Approx(1.0 / std::tgamma(0.6)).epsilon(1e-14));
  for (double t : {0.1, 1.0, 3.0}) CHECK(frac_resolvent(1.0, 0.3, t) == Approx(std::exp(-0.3 * t)).epsilon(1e-13));

  // 200-term series Σ (-λ)^k t^{α(k+1)-1}/Γ(α(k+1)), plain double arithmetic.
  const double alpha = 0.6, lambda = 0.3, t = 0.5;
  double series = 0.0;
  for (int k = 0; k < 200; ++k) {
    series += std::pow(-lambda, k) * std::pow(t, alpha * (k + 1) - 1) / std::tgamma(alpha * (k + 1));
  }
  CHECK(frac_resolvent(alpha, lambda, t) == Approx(series).epsilon(1e-13));
  CHECK_THROWS_AS(frac_resolvent(0.6, 0.3, 0.0), DomainError);
  CHECK_THROWS_AS(frac_resolvent(0.6, -0.1, 1.0), DomainError);
}

TEST_CASE("frac_resolvent is positive and its integral increasing") {
  double previous = 0.0;
  for (int j = 1; j <= 50; ++j) {
    const double t = 0.1 * j;
    CHECK(frac_resolvent(0.6, 0.3, t) > 0.0);
    const double integral = frac_resolvent_integral(0.6, 0.3, t);
    CHECK(integral > previous);
    previous = integral;
  }
  // Integral against quadrature of the resolvent (u = s^α removes the singularity).
  const double ref = oracle::integrate([](double u) { return oracle::mittag_leffler_small(0.6, 0.6, -0.3 * u); },
                                       0.0, std::pow(2.0, 0.6)) /
                     0.6;
  CHECK(frac_resolvent_integral(0.6, 0.3, 2.0) == Approx(ref).epsilon(1e-11));
}

namespace {

ModelParams base_params() { return ModelParams{}; }

// V0 + ∫_0^t R(t-s)(θ(s) - λV0) ds with R(u) = u^{α-1}E_{α,α}(-λu^α), piece by
// piece, after the substitution v = (t-s)^α.
double forward_variance_quadrature(const ModelParams& p, double t) {
  const double a = p.alpha();
  double total = p.v0;
  p.theta.for_each_piece(t, [&](double s0, double s1, double value) {
    const double v_hi = std::pow(t - s0, a);
    const double v_lo = std::pow(t - s1, a);
    const double piece = oracle::integrate(
        [&](double v) { return oracle::mittag_leffler_small(a, a, -p.lambda * v); }, v_lo, v_hi);
    total += (value - p.lambda * p.v0) * piece / a;
  });
  return total;
}

}  // namespace

TEST_CASE("forward_variance closed forms") {
  ModelParams p = base_params();
  p.lambda = 0.0;
  for (double t : {0.0, 0.3, 1.0}) {
    CHECK(forward_variance(p, t) == Approx(p.v0 + 0.02 * std::pow(t, 0.6) / std::tgamma(1.6)).epsilon(1e-12));
  }
  p.theta = ThetaCurve(0.0);
  for (double t : {0.0, 0.5, 1.0}) CHECK(forward_variance(p, t) == Approx(p.v0).epsilon(1e-15));

  // θ ≡ 0 with mean reversion decays like V0 E_α(-λ t^α).
  p.lambda = 0.3;
  for (double t : {0.2, 1.0}) {
    const double ref = p.v0 * oracle::mittag_leffler_series(0.6, 1.0, -0.3 * std::pow(t, 0.6));
    CHECK(forward_variance(p, t) == Approx(ref).epsilon(1e-12));
  }
  CHECK_THROWS_AS(forward_variance(p, -0.1), DomainError);
  CHECK_THROWS_AS(forward_variance(p, 1.5), DomainError);
}

TEST_CASE("forward_variance against quadrature oracle") {
  const ModelParams p = base_params();
  CHECK(forward_variance(p, 1.0) == Approx(forward_variance_quadrature(p, 1.0)).epsilon(1e-8));

  ModelParams q = base_params();
  q.theta = ThetaCurve({0.0, 0.25, 0.6}, {0.01, 0.05, 0.02});
  for (double t : {0.1, 0.4, 1.0}) {
    CAPTURE(t);
    CHECK(forward_variance(q, t) == Approx(forward_variance_quadrature(q, t)).epsilon(1e-8));
  }
}

TEST_CASE("forward_variance solves the first-moment Volterra equation") {
  // Independent of the resolvent: E[V] = V0 + K * (θ - λ E[V]) discretised directly.
  const ModelParams p = base_params();
  const int steps = 2000;
  const auto x = oracle::linear_volterra(p.alpha(), p.lambda, p.v0, 0.02, 1.0, steps);
  for (int j : {100, 1000, 2000}) {
    CHECK(forward_variance(p, j / double(steps)) == Approx(x[j]).epsilon(2e-6));
  }
}

TEST_CASE("integrated_forward_variance matches quadrature of forward_variance") {
  ModelParams p = base_params();
  p.theta = ThetaCurve({0.0, 0.5}, {0.03, 0.01});
  for (double t : {0.3, 1.0}) {
    auto ev = [&](double s) { return forward_variance(p, s); };
    // Split at the θ jump; both pieces have an endpoint cusp.
    const double ref = t <= 0.5 ? oracle::integrate_singular(ev, 0.0, t, 1e-12)
                                : oracle::integrate_singular(ev, 0.0, 0.5, 1e-12) +
                                      oracle::integrate_singular(ev, 0.5, t, 1e-12);
    CHECK(integrated_forward_variance(p, t) == Approx(ref).epsilon(1e-9));
  }
}

#pragma once

#include "roughmf/model.hpp"

namespace roughmf {

/// Gamma function for x > 0. Throws DomainError otherwise.
double gamma_eval(double x);

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a), a > 0, x ≥ 0.
double gamma_p(double a, double x);

/// Validated parameters of the two-parameter Mittag-Leffler function.
struct MittagLefflerParams {
  double alpha;
  double beta;

  MittagLefflerParams(double alpha, double beta);
};

/// Largest |x| accepted on the negative half-line.
inline constexpr double kMittagLefflerMaxNegative = 1e6;

/// E_{α,β}(x) = Σ_k x^k / Γ(αk + β), for α ∈ (0, 1], β > 0.
///
/// Negative arguments are supported down to -kMittagLefflerMaxNegative. On the
/// positive half-line the function grows like exp(x^{1/α}); arguments whose
/// value would overflow a double raise NumericalError.
///
/// Evaluation regimes (r = |x|^{1/α}):
///  - r ≤ 6: Taylor series in extended precision,
///  - x < 0, r ≤ 40: Taylor series in 50-digit arithmetic (heavy cancellation),
///  - x < 0, r > 40: algebraic asymptotic expansion, truncated at its smallest term,
///  - x > 0, r > 6: Taylor series of positive terms in extended precision.
/// α = 1 uses the elementary closed forms for β ∈ {1, 2} and Kummer's
/// transformation for β > 1 when -40 ≤ x < 0.
double mittag_leffler(double alpha, double beta, double x);
double mittag_leffler(const MittagLefflerParams& p, double x);

/// Canonical resolvent of the fractional kernel with mean reversion λ:
/// t^{α-1} E_{α,α}(-λ t^α), α ∈ (1/2, 1], λ ≥ 0, t > 0.
double frac_resolvent(double alpha, double lambda, double t);

/// ∫_0^t frac_resolvent(α, λ, s) ds = t^α E_{α,α+1}(-λ t^α).
double frac_resolvent_integral(double alpha, double lambda, double t);

/// E[V_t] = V0 + ∫_0^t (t-s)^{α-1} E_{α,α}(-λ(t-s)^α) (θ(s) - λV0) ds, α = H + 1/2,
/// the solution of E[V_t] = V0 + ∫_0^t K(t-s)(θ(s) - λE[V_s]) ds.
/// Uses the exact antiderivative on every constant piece of θ.
double forward_variance(const ModelParams& params, double t);

/// ∫_0^t E[V_s] ds, the deterministic total variance of the limit ν → 0.
double integrated_forward_variance(const ModelParams& params, double t);

}  // namespace roughmf

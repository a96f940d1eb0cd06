#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roughmf/partition_optimizer.hpp"
#include "roughmf/riccati.hpp"

namespace roughmf {

/// Lewis inversion grid on b ∈ [0, b_max] (the integrand is even in b).
struct IntegrationConfig {
  double b_max = 200.0;
  int nodes = 2000;
  // b_max is doubled (keeping the node spacing) while the integrand envelope
  // over the last tenth of the range exceeds this, relative to the integral.
  double tail_tolerance = 1e-10;
  int max_doublings = 6;
};

/// b ↦ L(T, 1/2 + ib) sampled on the Lewis grid.
using CharFnHandle = std::function<cplx(cplx)>;

struct LewisResult {
  double price;
  double b_max;      // truncation actually used
  double tail_ratio; // tail envelope / |integral|
};

/// Call price C(k, T) = S0 - S0 e^{k/2}/π ∫_0^∞ Re(e^{-ibk} L(T, 1/2+ib))/(b² + 1/4) db.
/// Throws NumericalError if the tail stays above tolerance after all doublings.
LewisResult lewis_call_price_detailed(const CharFnHandle& char_fn, double k, double s0,
                                      const IntegrationConfig& integration = {});
double lewis_call_price(const CharFnHandle& char_fn, double k, double maturity, double s0,
                        const IntegrationConfig& integration = {});

/// Black-Scholes call with zero rates in log-moneyness form; total_vol = σ√T.
double bs_call_price(double s0, double k, double total_vol);

/// σ with bs_call_price(s0, k, σ√T) = price. Bisection to 1e-10 then Newton polish.
/// Throws DomainError for prices outside (max(S0 - S0 e^k, 0), S0).
double implied_vol(double price, double s0, double k, double maturity);

struct SmilePoint {
  double k;
  double price;
  double implied_vol;  // NaN when the price left the no-arbitrage interval
};

struct Smile {
  double maturity = 0.0;
  std::vector<SmilePoint> points;
};

/// Fourier smile. L(T, 1/2+ib) is computed once on the b grid and reused for
/// every strike. The maturity overrides params.horizon.
Smile smile(const ModelParams& params, const KernelChoice& kernel, std::span<const double> k_grid,
            double maturity, int steps, const IntegrationConfig& integration = {},
            const CharFnOptions& options = {}, unsigned threads = 1);

enum class FactorChoice { uniform_optimal, f2_opt, f1_opt };

FactorChoice parse_factor_choice(std::string_view name);
std::string to_string(FactorChoice choice);

/// Multi-factor kernel with n factors under the given construction, together
/// with the partition it was built from.
struct BuiltKernel {
  Partition partition;
  MultiFactorKernel kernel;
};
BuiltKernel build_kernel(FactorChoice choice, int n, double hurst, double horizon);

struct RiccatiErrorRow {
  int n;
  double b;
  std::optional<double> rel_err;  // empty when |ψ(T, ib)| < 1e-14
  double l1_err;
  double f1_bound;
  double f2_bound;
};

/// |ψ^n(T, ib) - ψ(T, ib)| / |ψ(T, ib)| between the multi-factor and Adams solvers.
std::vector<RiccatiErrorRow> riccati_error_report(const ModelParams& params,
                                                  std::span<const int> factor_counts,
                                                  std::span<const double> b_grid, double maturity,
                                                  FactorChoice choice, int steps,
                                                  MultiFactorScheme scheme = MultiFactorScheme::exponential_trapezoid);

}  // namespace roughmf

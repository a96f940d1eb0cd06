#include "roughmf/pricing.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "roughmf/errors.hpp"

namespace roughmf {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// L(T, 1/2 + ib) sampled at b_j = j·db, j = 0..m.
struct LewisSamples {
  double db;
  std::vector<cplx> values;

  double b_max() const { return db * (static_cast<double>(values.size()) - 1.0); }
};

// ∫_0^B Re(e^{-ibk} L)/(b² + 1/4) db (trapezoid) and the relative tail envelope
// over the last tenth of the range.
std::pair<double, double> lewis_integral(const LewisSamples& samples, double k) {
  const std::size_t m = samples.values.size() - 1;
  double integral = 0.0;
  double tail = 0.0;
  const std::size_t tail_start = m - m / 10;
  for (std::size_t j = 0; j <= m; ++j) {
    const double b = samples.db * static_cast<double>(j);
    const double weight = (j == 0 || j == m) ? 0.5 * samples.db : samples.db;
    const double denom = b * b + 0.25;
    integral += weight * (std::exp(cplx(0.0, -b * k)) * samples.values[j]).real() / denom;
    if (j >= tail_start) tail += weight * std::abs(samples.values[j]) / denom;
  }
  return {integral, tail / std::max(std::fabs(integral), std::numeric_limits<double>::min())};
}

double price_from_integral(double integral, double k, double s0) {
  return s0 - s0 * std::exp(0.5 * k) / M_PI * integral;
}

void check_integration(const IntegrationConfig& cfg) {
  if (!(cfg.b_max > 0.0) || cfg.nodes < 2) throw ConfigError("integration grid needs b_max > 0 and nodes >= 2");
  if (cfg.max_doublings < 0) throw ConfigError("max_doublings must be non-negative");
}

// Samples the handle on the Lewis grid, doubling the range while the tail of
// the k-independent envelope is too heavy.
template <class Sampler>
LewisSamples sample_with_tail_control(Sampler&& sample_range, const IntegrationConfig& cfg, double k_probe,
                                      double* tail_ratio) {
  LewisSamples samples{cfg.b_max / cfg.nodes, {}};
  sample_range(samples, 0, static_cast<std::size_t>(cfg.nodes));
  for (int doubling = 0;; ++doubling) {
    const auto [integral, tail] = lewis_integral(samples, k_probe);
    *tail_ratio = tail;
    if (tail <= cfg.tail_tolerance) return samples;
    if (doubling == cfg.max_doublings) {
      std::ostringstream os;
      os << "Lewis integral tail " << tail << " above tolerance " << cfg.tail_tolerance
         << " at b_max = " << samples.b_max();
      throw NumericalError(os.str());
    }
    const std::size_t m = samples.values.size() - 1;
    sample_range(samples, m + 1, 2 * m);
  }
}

}  // namespace

LewisResult lewis_call_price_detailed(const CharFnHandle& char_fn, double k, double s0,
                                      const IntegrationConfig& integration) {
  check_integration(integration);
  if (!(s0 > 0.0)) throw DomainError("lewis_call_price: s0 must be positive");
  auto sampler = [&](LewisSamples& s, std::size_t from, std::size_t to) {
    s.values.resize(to + 1);
    for (std::size_t j = from; j <= to; ++j) s.values[j] = char_fn(cplx(0.5, s.db * static_cast<double>(j)));
  };
  double tail = 0.0;
  const LewisSamples samples = sample_with_tail_control(sampler, integration, k, &tail);
  const double integral = lewis_integral(samples, k).first;
  return {price_from_integral(integral, k, s0), samples.b_max(), tail};
}

double lewis_call_price(const CharFnHandle& char_fn, double k, double /*maturity*/, double s0,
                        const IntegrationConfig& integration) {
  return lewis_call_price_detailed(char_fn, k, s0, integration).price;
}

double bs_call_price(double s0, double k, double total_vol) {
  if (!(total_vol >= 0.0)) throw DomainError("bs_call_price: total_vol must be non-negative");
  const double strike = s0 * std::exp(k);
  if (total_vol == 0.0) return std::max(s0 - strike, 0.0);
  if (std::isinf(total_vol)) return s0;
  const double d1 = -k / total_vol + 0.5 * total_vol;
  const double d2 = d1 - total_vol;
  return s0 * norm_cdf(d1) - strike * norm_cdf(d2);
}

double implied_vol(double price, double s0, double k, double maturity) {
  if (!(maturity > 0.0)) throw DomainError("implied_vol: maturity must be positive");
  if (!(s0 > 0.0)) throw DomainError("implied_vol: s0 must be positive");
  const double intrinsic = std::max(s0 - s0 * std::exp(k), 0.0);
  if (!(price > intrinsic)) throw DomainError("implied_vol: price at or below intrinsic value");
  if (!(price < s0)) throw DomainError("implied_vol: price at or above spot");

  double lo = 0.0;
  double hi = 1.0;
  while (bs_call_price(s0, k, hi) < price) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) throw NumericalError("implied_vol: could not bracket the total volatility");
  }
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (bs_call_price(s0, k, mid) < price) lo = mid;
    else hi = mid;
  }
  double v = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d1 = -k / v + 0.5 * v;
    const double vega = s0 * norm_pdf(d1);
    if (!(vega > 0.0)) break;
    const double next = v - (bs_call_price(s0, k, v) - price) / vega;
    if (!(next > lo && next < hi)) break;
    v = next;
  }
  return v / std::sqrt(maturity);
}

Smile smile(const ModelParams& params, const KernelChoice& kernel, std::span<const double> k_grid,
            double maturity, int steps, const IntegrationConfig& integration, const CharFnOptions& options,
            unsigned threads) {
  if (k_grid.empty()) throw ConfigError("smile: empty log-moneyness grid");
  check_integration(integration);
  ModelParams p = params;
  p.horizon = maturity;
  p.validate();

  auto sampler = [&](LewisSamples& s, std::size_t from, std::size_t to) {
    std::vector<cplx> zs;
    for (std::size_t j = from; j <= to; ++j) zs.emplace_back(0.5, s.db * static_cast<double>(j));
    const auto values = char_fn_batch(p, kernel, zs, steps, options, threads);
    s.values.resize(to + 1);
    std::copy(values.begin(), values.end(), s.values.begin() + static_cast<std::ptrdiff_t>(from));
  };
  double tail = 0.0;
  // The tail envelope does not depend on k.
  const LewisSamples samples = sample_with_tail_control(sampler, integration, k_grid.front(), &tail);

  Smile out;
  out.maturity = maturity;
  for (double k : k_grid) {
    const double price = price_from_integral(lewis_integral(samples, k).first, k, p.s0);
    double iv = std::numeric_limits<double>::quiet_NaN();
    try {
      iv = implied_vol(price, p.s0, k, maturity);
    } catch (const DomainError&) {
    }
    out.points.push_back({k, price, iv});
  }
  return out;
}

FactorChoice parse_factor_choice(std::string_view name) {
  if (name == "uniform_optimal") return FactorChoice::uniform_optimal;
  if (name == "f2_opt") return FactorChoice::f2_opt;
  if (name == "f1_opt") return FactorChoice::f1_opt;
  throw ConfigError("unknown factor choice '" + std::string(name) + "'");
}

std::string to_string(FactorChoice choice) {
  switch (choice) {
    case FactorChoice::uniform_optimal: return "uniform_optimal";
    case FactorChoice::f2_opt: return "f2_opt";
    case FactorChoice::f1_opt: return "f1_opt";
  }
  return "unknown";
}

BuiltKernel build_kernel(FactorChoice choice, int n, double hurst, double horizon) {
  Partition partition = [&] {
    switch (choice) {
      case FactorChoice::f2_opt: return optimize_partition(n, hurst, horizon, BoundObjective::f2).partition;
      case FactorChoice::f1_opt: return optimize_partition(n, hurst, horizon, BoundObjective::f1).partition;
      case FactorChoice::uniform_optimal: break;
    }
    return uniform_partition(n, optimal_step(n, horizon, hurst));
  }();
  MultiFactorKernel kernel = weights_from_partition(hurst, partition);
  return {std::move(partition), std::move(kernel)};
}

std::vector<RiccatiErrorRow> riccati_error_report(const ModelParams& params, std::span<const int> factor_counts,
                                                  std::span<const double> b_grid, double maturity,
                                                  FactorChoice choice, int steps, MultiFactorScheme scheme) {
  ModelParams p = params;
  p.horizon = maturity;
  p.validate();

  const AdamsRiccatiSolver adams(p, steps);
  std::vector<cplx> reference;
  reference.reserve(b_grid.size());
  for (double b : b_grid) reference.push_back(adams.solve(cplx(0.0, b)).terminal());

  std::vector<RiccatiErrorRow> rows;
  for (int n : factor_counts) {
    const BuiltKernel built = build_kernel(choice, n, p.hurst, maturity);
    const double l1 = l1_error(built.kernel, p.hurst, maturity);
    const double f1 = f1_bound(p.hurst, maturity, built.partition);
    const double f2 = f2_bound(p.hurst, maturity, built.partition);
    const MultiFactorRiccatiSolver solver(built.kernel, p, steps, scheme);
    for (std::size_t j = 0; j < b_grid.size(); ++j) {
      RiccatiErrorRow row{n, b_grid[j], std::nullopt, l1, f1, f2};
      const double denom = std::abs(reference[j]);
      if (denom >= 1e-14) {
        row.rel_err = std::abs(solver.solve(cplx(0.0, b_grid[j])).terminal() - reference[j]) / denom;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace roughmf

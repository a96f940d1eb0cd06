#include "roughmf/kernel.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "roughmf/errors.hpp"
#include "roughmf/special_functions.hpp"

namespace roughmf {

namespace {

void check_hurst(double hurst, const char* who) {
  if (!(hurst > 0.0 && hurst < 0.5)) throw DomainError(std::string(who) + ": hurst must lie in (0, 1/2)");
}

// 1 / (Γ(H+1/2) Γ(1/2-H)) = cos(πH) / π.
double mu_constant(double hurst) { return std::cos(M_PI * hurst) / M_PI; }

// (b^p - a^p) / p without cancellation for a close to b.
double power_difference(double a, double b, double p) {
  if (a == 0.0) return std::pow(b, p) / p;
  return -std::pow(b, p) * std::expm1(p * std::log(a / b)) / p;
}

}  // namespace

FractionalKernel::FractionalKernel(double hurst, bool classical) : hurst_(hurst), classical_(classical) {
  const bool ok = classical ? (hurst > 0.0 && hurst <= 0.5) : (hurst > 0.0 && hurst < 0.5);
  if (!ok) throw DomainError("FractionalKernel: hurst must lie in (0, 1/2)");
  inv_gamma_alpha_ = 1.0 / std::tgamma(alpha());
}

double FractionalKernel::operator()(double t) const {
  if (!(t > 0.0)) throw DomainError("fractional kernel is singular at t <= 0");
  return std::pow(t, hurst_ - 0.5) * inv_gamma_alpha_;
}

double FractionalKernel::integral(double a, double b) const {
  const double al = alpha();
  return (std::pow(b, al) - std::pow(a, al)) * inv_gamma_alpha_ / al;
}

Partition::Partition(std::vector<double> etas) : etas_(std::move(etas)) {
  if (etas_.size() < 2) throw ValidationError("partition needs at least one cell");
  if (etas_.front() != 0.0) throw ValidationError("partition must start at 0");
  for (std::size_t i = 1; i < etas_.size(); ++i) {
    if (!(etas_[i] > etas_[i - 1]) || !std::isfinite(etas_[i])) {
      throw ValidationError("partition must be strictly increasing and finite");
    }
  }
}

MultiFactorKernel::MultiFactorKernel(std::vector<double> weights, std::vector<double> rates, double hurst)
    : weights_(std::move(weights)), rates_(std::move(rates)), hurst_(hurst) {
  if (weights_.size() != rates_.size()) throw ValidationError("weights and rates differ in length");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) throw ValidationError("weights must be positive");
    if (!(rates_[i] > 0.0) || !std::isfinite(rates_[i])) throw ValidationError("rates must be positive");
    if (i > 0 && !(rates_[i] > rates_[i - 1])) throw ValidationError("rates must increase strictly");
  }
}

double MultiFactorKernel::operator()(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) sum += weights_[i] * std::exp(-rates_[i] * t);
  return sum;
}

double MultiFactorKernel::integral(double a, double b) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    // e^{-γa} (1 - e^{-γ(b-a)}) / γ
    sum += weights_[i] * std::exp(-rates_[i] * a) * -std::expm1(-rates_[i] * (b - a)) / rates_[i];
  }
  return sum;
}

double frac_kernel_eval(const FractionalKernel& kernel, double t) { return kernel(t); }

double kernel_eval(const MultiFactorKernel& kernel, double t) {
  if (!(t >= 0.0)) throw DomainError("kernel_eval: t must be non-negative");
  return kernel(t);
}

double mu_density(double hurst, double gamma) {
  check_hurst(hurst, "mu_density");
  if (!(gamma > 0.0)) throw DomainError("mu_density: gamma must be positive");
  return std::pow(gamma, -hurst - 0.5) * mu_constant(hurst);
}

CellMoments cell_moments(double hurst, double a, double b) {
  check_hurst(hurst, "cell_moments");
  const double c = mu_constant(hurst);
  const double p = 0.5 - hurst;
  return {c * power_difference(a, b, p), c * power_difference(a, b, p + 1.0),
          c * power_difference(a, b, p + 2.0)};
}

double cell_variance(double hurst, double a, double b) {
  const CellMoments m = cell_moments(hurst, a, b);
  const double mean = m.m1 / m.m0;
  const double variance = m.m2 - mean * m.m1;
  // m2 - m1²/m0 cancels for cells that are narrow relative to their
  // location; integrate the centred second moment directly there.
  if (variance > 1e-4 * m.m2) return variance;
  const double c = mu_constant(hurst);
  auto integrand = [&](double g) { return (g - mean) * (g - mean) * std::pow(g, -hurst - 0.5); };
  return c * boost::math::quadrature::gauss<double, 20>::integrate(integrand, a, b);
}

MultiFactorKernel weights_from_partition(double hurst, const Partition& partition) {
  check_hurst(hurst, "weights_from_partition");
  const auto& eta = partition.etas();
  const std::size_t n = partition.size();
  std::vector<double> weights(n), rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CellMoments m = cell_moments(hurst, eta[i], eta[i + 1]);
    weights[i] = m.m0;
    rates[i] = m.m1 / m.m0;
  }
  return MultiFactorKernel(std::move(weights), std::move(rates), hurst);
}

Partition uniform_partition(int n, double step) {
  if (n < 1) throw DomainError("uniform_partition: n must be >= 1");
  if (!(step > 0.0)) throw DomainError("uniform_partition: step must be positive");
  std::vector<double> etas(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) etas[static_cast<std::size_t>(i)] = i * step;
  return Partition(std::move(etas));
}

double optimal_step(int n, double horizon, double hurst) {
  if (n < 1) throw DomainError("optimal_step: n must be >= 1");
  if (!(horizon > 0.0)) throw DomainError("optimal_step: horizon must be positive");
  check_hurst(hurst, "optimal_step");
  const double base = std::sqrt(10.0) * (1.0 - 2.0 * hurst) / (5.0 - 2.0 * hurst);
  return std::pow(static_cast<double>(n), -0.2) / horizon * std::pow(base, 0.4);
}

double l2_error(const MultiFactorKernel& kernel, double hurst, double horizon) {
  check_hurst(hurst, "l2_error");
  if (!(horizon > 0.0)) throw DomainError("l2_error: horizon must be positive");
  const double alpha = hurst + 0.5;
  const double ga = std::tgamma(alpha);
  const auto& c = kernel.weights();
  const auto& g = kernel.rates();
  const std::size_t n = kernel.size();

  // ∫ (K^n)²
  double self = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = 2.0 * g[i];
    self += c[i] * c[i] * -std::expm1(-s * horizon) / s;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = g[i] + g[j];
      self += 2.0 * c[i] * c[j] * -std::expm1(-r * horizon) / r;
    }
  }
  // ∫ K²
  const double frac = std::pow(horizon, 2.0 * hurst) / (2.0 * hurst * ga * ga);
  // ∫ K^n K = Σ c_i P(α, γ_i T) / γ_i^α
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) cross += c[i] * gamma_p(alpha, g[i] * horizon) / std::pow(g[i], alpha);

  return std::sqrt(std::max(self + frac - 2.0 * cross, 0.0));
}

double l1_error(const MultiFactorKernel& kernel, double hurst, double horizon) {
  check_hurst(hurst, "l1_error");
  if (!(horizon > 0.0)) throw DomainError("l1_error: horizon must be positive");
  const FractionalKernel frac(hurst);
  if (kernel.empty()) return frac.integral(0.0, horizon);

  auto diff = [&](double t) { return kernel(t) - frac(t); };
  auto piece = [&](double a, double b) { return std::fabs(kernel.integral(a, b) - frac.integral(a, b)); };

  // K(t) > Σ c_i ≥ K^n(t) below t0, so the difference is negative there.
  double total_weight = 0.0;
  for (double c : kernel.weights()) total_weight += c;
  const double t0 = std::pow(total_weight * std::tgamma(frac.alpha()), -1.0 / (0.5 - hurst));
  if (t0 >= horizon) return piece(0.0, horizon);

  constexpr int kPointsPerDecade = 1000;
  const double decades = std::log10(horizon / t0);
  const int points = std::max(2000, static_cast<int>(std::ceil(decades * kPointsPerDecade)));
  const double ratio = std::pow(horizon / t0, 1.0 / points);

  double total = 0.0;
  double left = 0.0;  // start of the current sign-definite piece
  double t_prev = t0;
  double d_prev = diff(t0);
  for (int j = 1; j <= points; ++j) {
    const double t = (j == points) ? horizon : t0 * std::pow(ratio, j);
    const double d = diff(t);
    if ((d > 0.0) != (d_prev > 0.0) && d != 0.0 && d_prev != 0.0) {
      double lo = t_prev, hi = t;
      const bool lo_positive = d_prev > 0.0;
      for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((diff(mid) > 0.0) == lo_positive) lo = mid;
        else hi = mid;
      }
      const double root = 0.5 * (lo + hi);
      total += piece(left, root);
      left = root;
    }
    t_prev = t;
    d_prev = d;
  }
  total += piece(left, horizon);
  return total;
}

namespace {

double variance_sum(double hurst, const Partition& partition) {
  double sum = 0.0;
  const auto& eta = partition.etas();
  for (std::size_t i = 0; i + 1 < eta.size(); ++i) sum += cell_variance(hurst, eta[i], eta[i + 1]);
  return sum;
}

}  // namespace

double f2_bound(double hurst, double horizon, const Partition& partition) {
  check_hurst(hurst, "f2_bound");
  const double alpha = hurst + 0.5;
  const double head = std::pow(horizon, 2.5) / (2.0 * std::sqrt(5.0)) * variance_sum(hurst, partition);
  const double tail = std::pow(partition.back(), -hurst) /
                      (hurst * std::tgamma(alpha) * std::tgamma(0.5 - hurst) * std::sqrt(2.0));
  return head + tail;
}

double f1_bound(double hurst, double horizon, const Partition& partition) {
  check_hurst(hurst, "f1_bound");
  const double head = std::pow(horizon, 3.0) / 6.0 * variance_sum(hurst, partition);
  const double tail = std::pow(partition.back(), -hurst - 0.5) /
                      (std::tgamma(hurst + 1.5) * std::tgamma(0.5 - hurst));
  return head + tail;
}

}  // namespace roughmf

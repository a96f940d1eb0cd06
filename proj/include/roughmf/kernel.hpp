#pragma once

#include <cstddef>
#include <vector>

namespace roughmf {

/// K(t) = t^{H-1/2} / Γ(H+1/2).
///
/// The Hurst index must lie in (0, 1/2). With `classical` set, H = 1/2 is also
/// admitted and the kernel is identically one.
class FractionalKernel {
 public:
  explicit FractionalKernel(double hurst, bool classical = false);

  double hurst() const { return hurst_; }
  double alpha() const { return hurst_ + 0.5; }
  bool classical() const { return classical_; }

  double operator()(double t) const;
  /// ∫_a^b K(t) dt.
  double integral(double a, double b) const;

 private:
  double hurst_;
  bool classical_;
  double inv_gamma_alpha_;
};

/// Auxiliary mean-reversion grid 0 = η_0 < η_1 < … < η_n.
class Partition {
 public:
  explicit Partition(std::vector<double> etas);

  std::size_t size() const { return etas_.size() - 1; }  // number of cells
  const std::vector<double>& etas() const { return etas_; }
  double operator[](std::size_t i) const { return etas_[i]; }
  double back() const { return etas_.back(); }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<double> etas_;
};

/// K^n(t) = Σ_i c_i exp(-γ_i t) with positive weights and increasing rates.
class MultiFactorKernel {
 public:
  MultiFactorKernel() = default;
  MultiFactorKernel(std::vector<double> weights, std::vector<double> rates, double hurst = 0.0);

  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& rates() const { return rates_; }
  double hurst() const { return hurst_; }

  double operator()(double t) const;
  /// ∫_a^b K^n(t) dt.
  double integral(double a, double b) const;

  friend bool operator==(const MultiFactorKernel&, const MultiFactorKernel&) = default;

 private:
  std::vector<double> weights_;
  std::vector<double> rates_;
  double hurst_ = 0.0;
};

double frac_kernel_eval(const FractionalKernel& kernel, double t);
double kernel_eval(const MultiFactorKernel& kernel, double t);

/// Density of the measure μ with K(t) = ∫ e^{-γt} μ(dγ).
double mu_density(double hurst, double gamma);

/// Moments ∫_a^b γ^k μ(dγ), k = 0, 1, 2, in closed form.
struct CellMoments {
  double m0;
  double m1;
  double m2;
};
CellMoments cell_moments(double hurst, double a, double b);

/// ∫_a^b (γ - γ̄)² μ(dγ) where γ̄ = m1/m0 is the cell barycenter.
double cell_variance(double hurst, double a, double b);

/// Cell masses as weights and cell barycenters as rates.
MultiFactorKernel weights_from_partition(double hurst, const Partition& partition);

/// [0, step, 2 step, …, n step].
Partition uniform_partition(int n, double step);

/// Step minimising the L² upper bound for a uniform partition with n cells.
double optimal_step(int n, double horizon, double hurst);

/// ‖K^n - K‖ in L²[0, T], exact up to round-off.
double l2_error(const MultiFactorKernel& kernel, double hurst, double horizon);

/// ∫_0^T |K^n - K| dt. Sign changes of K^n - K are bracketed on a dense
/// log-spaced grid and refined by bisection; each sign-definite piece is then
/// integrated with closed-form antiderivatives.
double l1_error(const MultiFactorKernel& kernel, double hurst, double horizon);

/// Upper bound of the L² error, as a function of the partition.
double f2_bound(double hurst, double horizon, const Partition& partition);

/// Upper bound of the L¹ error, as a function of the partition.
double f1_bound(double hurst, double horizon, const Partition& partition);

}  // namespace roughmf

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roughmf/kernel.hpp"
#include "roughmf/model.hpp"
#include "roughmf/riccati.hpp"

namespace roughmf {

enum class SimulationScheme { multifactor, volterra_oracle };

SimulationScheme parse_simulation_scheme(std::string_view name);
std::string to_string(SimulationScheme scheme);

/// Upper bound on steps for the O(steps²)-per-path Volterra scheme.
inline constexpr int kVolterraMaxSteps = 2000;

struct SimulationConfig {
  int n_paths = 10000;
  int steps = 200;
  std::uint64_t seed = 20180101;
  SimulationScheme scheme = SimulationScheme::multifactor;
  // Pairs path 2m+1 with the sign-flipped normals of path 2m.
  bool antithetic = false;
  // Snapshot stride in steps; 0 keeps no paths.
  int snapshot_every = 0;
  // Number of paths whose snapshots are kept (from path 0).
  int snapshot_paths = 0;
  unsigned threads = 1;  // 0 = hardware concurrency
  GVariant g_variant = GVariant::standard;

  void validate() const;
};

struct PathSnapshot {
  std::vector<double> times;
  std::vector<double> spot;
  std::vector<double> variance;
  std::vector<std::vector<double>> factors;  // [step][factor]; empty for the Volterra scheme
};

struct SimulationResult {
  std::vector<double> terminal_spots;
  std::vector<double> realized_variance;  // ∫_0^T V⁺ dt per path (left-point rule)
  std::vector<double> terminal_variance;  // raw V_T per path
  std::vector<PathSnapshot> snapshots;
  // Fraction of (path, step) pairs where the raw variance was negative.
  double negative_fraction = 0.0;
};

/// Multi-factor model, full-truncation exponential Euler for the factors and
/// log-Euler for the spot. One Philox stream per path (stream id = path index).
SimulationResult simulate_multifactor(const ModelParams& params, const MultiFactorKernel& kernel,
                                      const SimulationConfig& config);

/// Rough Volterra Euler scheme on the fractional kernel with cell-averaged
/// kernel weights. Cost O(steps²) per path.
SimulationResult simulate_volterra_oracle(const ModelParams& params, const SimulationConfig& config);

struct McPrice {
  double price;
  double std_error;
};

/// Sample mean and standard error of (S_T - S0 e^k)⁺. Antithetic pairs are
/// averaged before the standard error is formed when `antithetic` is set.
McPrice mc_call_price(const SimulationResult& result, double k, double s0, bool antithetic = false);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample KS critical value at significance level `level`.
double ks_critical_value(std::size_t n_a, std::size_t n_b, double level = 0.01);

}  // namespace roughmf

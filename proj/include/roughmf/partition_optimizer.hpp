#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "roughmf/kernel.hpp"

namespace roughmf {

enum class BoundObjective { f1, f2 };

BoundObjective parse_objective(std::string_view name);
std::string to_string(BoundObjective objective);

/// Objective value and its gradient with respect to η_1, …, η_n. The gradient
/// is indexed like `etas`; entry 0 is always zero.
double bound_objective(BoundObjective objective, double hurst, double horizon,
                       const std::vector<double>& etas, std::vector<double>* grad_etas);

struct OptimizeOptions {
  int max_iterations = 2000;
  double function_tolerance = 1e-12;
  double gradient_tolerance = 1e-12;
  // Geometric seeds used next to the uniform optimal-step seed.
  std::vector<double> geometric_ratios{3.0, 10.0};
};

struct OptimizeResult {
  Partition partition;
  double objective_value;
  double seed_value;  // best objective value over the seeds
  // False when no start improved on the best seed; the seed is returned then.
  bool improved = true;
  std::string seed_name;  // start that produced the returned partition
};

/// Local minimiser of f1 or f2 over 0 = η_0 < η_1 < … < η_n.
///
/// Decision variables are the log-increments log(η_i - η_{i-1}), so every
/// iterate is feasible. Each seed is refined by L-BFGS with the closed-form
/// gradient; the best result is returned.
OptimizeResult optimize_partition(int n, double hurst, double horizon, BoundObjective objective,
                                  const OptimizeOptions& options = {});

}  // namespace roughmf

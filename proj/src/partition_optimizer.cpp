#include "roughmf/partition_optimizer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include "roughmf/errors.hpp"

namespace roughmf {

BoundObjective parse_objective(std::string_view name) {
  if (name == "f1") return BoundObjective::f1;
  if (name == "f2") return BoundObjective::f2;
  throw ConfigError("unknown objective '" + std::string(name) + "' (expected f1 or f2)");
}

std::string to_string(BoundObjective objective) { return objective == BoundObjective::f1 ? "f1" : "f2"; }

double bound_objective(BoundObjective objective, double hurst, double horizon,
                       const std::vector<double>& etas, std::vector<double>* grad_etas) {
  const std::size_t n = etas.size() - 1;
  const double head_coef = objective == BoundObjective::f2
                               ? std::pow(horizon, 2.5) / (2.0 * std::sqrt(5.0))
                               : std::pow(horizon, 3.0) / 6.0;
  const double tail_power = objective == BoundObjective::f2 ? -hurst : -hurst - 0.5;
  const double tail_coef =
      objective == BoundObjective::f2
          ? 1.0 / (hurst * std::tgamma(hurst + 0.5) * std::tgamma(0.5 - hurst) * std::sqrt(2.0))
          : 1.0 / (std::tgamma(hurst + 1.5) * std::tgamma(0.5 - hurst));

  if (grad_etas) grad_etas->assign(n + 1, 0.0);
  double head = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double a = etas[i - 1];
    const double b = etas[i];
    head += cell_variance(hurst, a, b);
    if (grad_etas) {
      // d/db ∫_a^b (γ - γ̄)² μ(dγ) = μ(b)(b - γ̄)², d/da = -μ(a)(a - γ̄)²; the
      // γ̄ dependence drops out because γ̄ is the μ-mean of the cell.
      const CellMoments m = cell_moments(hurst, a, b);
      const double mean = m.m1 / m.m0;
      (*grad_etas)[i] += head_coef * mu_density(hurst, b) * (b - mean) * (b - mean);
      if (i > 1) (*grad_etas)[i - 1] -= head_coef * mu_density(hurst, a) * (a - mean) * (a - mean);
    }
  }
  const double last = etas[n];
  const double tail = tail_coef * std::pow(last, tail_power);
  if (grad_etas) (*grad_etas)[n] += tail_power * tail / last;
  return head_coef * head + tail;
}

namespace {

std::vector<double> etas_from_log_increments(const double* x, std::size_t n) {
  std::vector<double> etas(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) etas[i + 1] = etas[i] + std::exp(x[i]);
  return etas;
}

class LogIncrementObjective final : public ceres::FirstOrderFunction {
 public:
  LogIncrementObjective(int n, double hurst, double horizon, BoundObjective objective)
      : n_(n), hurst_(hurst), horizon_(horizon), objective_(objective) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    const auto etas = etas_from_log_increments(x, static_cast<std::size_t>(n_));
    for (std::size_t i = 1; i < etas.size(); ++i) {
      if (!std::isfinite(etas[i]) || !(etas[i] > etas[i - 1])) return false;
    }
    std::vector<double> grad_etas;
    *cost = bound_objective(objective_, hurst_, horizon_, etas, gradient ? &grad_etas : nullptr);
    if (!std::isfinite(*cost)) return false;
    if (gradient) {
      // η_j = Σ_{l ≤ j} e^{x_l}  ⇒  ∂f/∂x_l = e^{x_l} Σ_{j ≥ l} ∂f/∂η_j
      double suffix = 0.0;
      for (int l = n_; l >= 1; --l) {
        suffix += grad_etas[static_cast<std::size_t>(l)];
        gradient[l - 1] = std::exp(x[l - 1]) * suffix;
        if (!std::isfinite(gradient[l - 1])) return false;
      }
    }
    return true;
  }

  int NumParameters() const override { return n_; }

 private:
  int n_;
  double hurst_;
  double horizon_;
  BoundObjective objective_;
};

struct Seed {
  std::string name;
  std::vector<double> etas;
};

std::vector<Seed> make_seeds(int n, double hurst, double horizon, const OptimizeOptions& options) {
  const double step = optimal_step(n, horizon, hurst);
  std::vector<Seed> seeds;
  seeds.push_back({"uniform_optimal", uniform_partition(n, step).etas()});
  for (double ratio : options.geometric_ratios) {
    // Increments step·q^{i-1}; q is capped so that the last increment stays
    // within 12 decades of the first.
    const double q = n > 1 ? std::min(ratio, std::pow(1e12, 1.0 / (n - 1))) : ratio;
    std::vector<double> etas(static_cast<std::size_t>(n) + 1, 0.0);
    double inc = step;
    for (int i = 1; i <= n; ++i) {
      etas[static_cast<std::size_t>(i)] = etas[static_cast<std::size_t>(i) - 1] + inc;
      inc *= q;
    }
    std::ostringstream name;
    name << "geometric_" << ratio;
    seeds.push_back({name.str(), std::move(etas)});
  }
  return seeds;
}

}  // namespace

OptimizeResult optimize_partition(int n, double hurst, double horizon, BoundObjective objective,
                                  const OptimizeOptions& options) {
  if (n < 1) throw DomainError("optimize_partition: n must be >= 1");
  if (!(hurst > 0.0 && hurst < 0.5)) throw DomainError("optimize_partition: hurst must lie in (0, 1/2)");
  if (!(horizon > 0.0)) throw DomainError("optimize_partition: horizon must be positive");

  const auto seeds = make_seeds(n, hurst, horizon, options);

  double best_seed_value = std::numeric_limits<double>::infinity();
  const Seed* best_seed = nullptr;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_etas;
  std::string best_start;

  ceres::GradientProblemSolver::Options solver_options;
  solver_options.line_search_direction_type = ceres::LBFGS;
  solver_options.max_num_iterations = options.max_iterations;
  solver_options.function_tolerance = options.function_tolerance;
  solver_options.gradient_tolerance = options.gradient_tolerance;
  solver_options.parameter_tolerance = 1e-14;
  solver_options.logging_type = ceres::SILENT;
  solver_options.minimizer_progress_to_stdout = false;

  for (const Seed& seed : seeds) {
    const double seed_value = bound_objective(objective, hurst, horizon, seed.etas, nullptr);
    if (seed_value < best_seed_value) {
      best_seed_value = seed_value;
      best_seed = &seed;
    }

    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = std::log(seed.etas[static_cast<std::size_t>(i) + 1] -
                                                 seed.etas[static_cast<std::size_t>(i)]);
    }
    ceres::GradientProblem problem(new LogIncrementObjective(n, hurst, horizon, objective));
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(solver_options, problem, x.data(), &summary);

    auto etas = etas_from_log_increments(x.data(), static_cast<std::size_t>(n));
    bool feasible = true;
    for (std::size_t i = 1; i < etas.size(); ++i) feasible = feasible && std::isfinite(etas[i]) && etas[i] > etas[i - 1];
    if (!feasible) continue;
    const double value = bound_objective(objective, hurst, horizon, etas, nullptr);
    if (value < best_value) {
      best_value = value;
      best_etas = std::move(etas);
      best_start = seed.name;
    }
  }

  if (!(best_value < best_seed_value)) {
    return {Partition(best_seed->etas), best_seed_value, best_seed_value, false, best_seed->name};
  }
  return {Partition(std::move(best_etas)), best_value, best_seed_value, true, best_start};
}

}  // namespace roughmf

#pragma once

#include <vector>

#include "config.hpp"

namespace roughmf::app {

/// Each command writes its outputs under config.output_dir and a
/// `<command>.json` summary echoing the resolved config.
void cmd_kernel(const RunConfig& config, const ordered_json& resolved);
void cmd_riccati(const RunConfig& config, const ordered_json& resolved);
void cmd_price(const RunConfig& config, const ordered_json& resolved);
void cmd_smile(const RunConfig& config, const ordered_json& resolved);
void cmd_simulate(const RunConfig& config, const ordered_json& resolved);
void cmd_bench(const RunConfig& config, const ordered_json& resolved);

/// Kernel used by price/smile/simulate: the explicit file when given,
/// otherwise the configured construction with n factors on [0, horizon].
MultiFactorKernel configured_kernel(const RunConfig& config, int n, double horizon);

struct BenchRow {
  std::string solver;  // "adams" or "multifactor"
  int n;               // 0 for the Adams solver
  int steps;
  double seconds;      // per Riccati solve
};

/// Times both solvers over bench.steps (and bench.factors for the
/// multi-factor solver). Each entry is the fastest of bench.repeats runs, each
/// run repeating the b-grid until bench.min_seconds have elapsed.
std::vector<BenchRow> run_bench(const RunConfig& config);

/// Runtime ratio between two rows of a bench table; throws if either is absent.
double bench_ratio(const std::vector<BenchRow>& rows, const std::string& solver, int n_num, int steps_num,
                   int n_den, int steps_den);

}  // namespace roughmf::app

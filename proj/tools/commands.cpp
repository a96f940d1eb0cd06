#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "roughmf/errors.hpp"
#include "roughmf/io.hpp"
#include "roughmf/special_functions.hpp"

namespace roughmf::app {

namespace {

namespace fs = std::filesystem;
using io::format_double;

void write_summary(const RunConfig& config, const std::string& command, ordered_json summary,
                   const ordered_json& resolved) {
  ordered_json doc;
  doc["command"] = command;
  doc["config"] = resolved;
  for (auto& [key, value] : summary.items()) doc[key] = value;
  io::write_json(config.output_dir / (command + ".json"), doc);
}

MultiFactorKernel kernel_from_file(const RunConfig& config) {
  const ordered_json doc = io::read_json(config.kernel.file);
  if (doc.contains("etas")) {
    double hurst = config.model.hurst;
    const Partition partition = io::partition_from_json(doc, &hurst);
    if (hurst != config.model.hurst) throw ConfigError("kernel.file hurst differs from model.hurst");
    return weights_from_partition(hurst, partition);
  }
  MultiFactorKernel kernel = io::kernel_from_json(doc);
  if (kernel.hurst() != 0.0 && kernel.hurst() != config.model.hurst) {
    throw ConfigError("kernel.file hurst differs from model.hurst");
  }
  return kernel;
}

double optional_value(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

ModelParams at_maturity(const RunConfig& config) {
  ModelParams p = config.model;
  p.horizon = config.pricing.maturity;
  return p;
}

}  // namespace

MultiFactorKernel configured_kernel(const RunConfig& config, int n, double horizon) {
  if (!config.kernel.file.empty()) return kernel_from_file(config);
  return build_kernel(config.kernel.choice, n, config.model.hurst, horizon).kernel;
}

void cmd_kernel(const RunConfig& config, const ordered_json& resolved) {
  const double hurst = config.model.hurst;
  const double horizon = config.model.horizon;
  std::ostringstream table;
  table << "n,l1_err,l2_err,f1_bound,f2_bound\n";
  ordered_json rows = ordered_json::array();

  auto report = [&](int n, const MultiFactorKernel& kernel, const std::optional<Partition>& partition,
                    const std::string& file) {
    ordered_json doc = io::kernel_to_json(kernel);
    const double l1 = l1_error(kernel, hurst, horizon);
    const double l2 = l2_error(kernel, hurst, horizon);
    doc["l1_err"] = l1;
    doc["l2_err"] = l2;
    double f1 = std::numeric_limits<double>::quiet_NaN();
    double f2 = f1;
    if (partition) {
      doc["etas"] = partition->etas();
      f1 = f1_bound(hurst, horizon, *partition);
      f2 = f2_bound(hurst, horizon, *partition);
      doc["f1_bound"] = f1;
      doc["f2_bound"] = f2;
    }
    io::write_json(config.output_dir / file, doc);
    table << n << ',' << format_double(l1) << ',' << format_double(l2) << ',' << format_double(f1) << ','
          << format_double(f2) << '\n';
    rows.push_back({{"n", n}, {"file", file}, {"l1_err", l1}, {"l2_err", l2}});
  };

  if (!config.kernel.file.empty()) {
    const ordered_json doc = io::read_json(config.kernel.file);
    std::optional<Partition> partition;
    if (doc.contains("etas")) partition = io::partition_from_json(doc);
    const MultiFactorKernel kernel = kernel_from_file(config);
    report(static_cast<int>(kernel.size()), kernel, partition, "kernel_file.json");
  } else {
    for (int n : config.kernel.n_list) {
      const BuiltKernel built = build_kernel(config.kernel.choice, n, hurst, horizon);
      report(n, built.kernel, built.partition, "kernel_n" + std::to_string(n) + ".json");
    }
  }
  io::write_text(config.output_dir / "kernel_errors.csv", table.str());
  write_summary(config, "kernel", {{"choice", to_string(config.kernel.choice)}, {"kernels", rows}}, resolved);
}

void cmd_riccati(const RunConfig& config, const ordered_json& resolved) {
  const auto& r = config.riccati;
  const double horizon = config.model.horizon;
  const auto rows = riccati_error_report(config.model, config.kernel.n_list, r.b_grid, horizon,
                                         config.kernel.choice, r.steps, r.scheme);
  io::write_text(config.output_dir / "riccati_errors.csv", io::error_report_csv(rows));

  const RiccatiSolution frac = solve_fractional_riccati_adams(config.model, r.z, r.steps);
  const MultiFactorKernel kernel = configured_kernel(config, config.kernel.n, horizon);
  const RiccatiSolution multi = solve_multifactor_riccati(kernel, config.model, r.z, r.steps, r.scheme);
  io::write_text(config.output_dir / "psi_fractional.csv", io::riccati_csv(frac));
  io::write_text(config.output_dir / "psi_multifactor.csv", io::riccati_csv(multi));

  ordered_json max_err = ordered_json::object();
  int flagged = 0;
  for (int n : config.kernel.n_list) {
    double worst = 0.0;
    for (const auto& row : rows) {
      if (row.n != n) continue;
      if (row.rel_err) worst = std::max(worst, *row.rel_err);
      else ++flagged;
    }
    max_err[std::to_string(n)] = worst;
  }
  write_summary(config, "riccati",
                {{"max_rel_err_by_n", max_err},
                 {"flagged_rows", flagged},
                 {"psi_terminal_fractional", {frac.terminal().real(), frac.terminal().imag()}},
                 {"psi_terminal_multifactor", {multi.terminal().real(), multi.terminal().imag()}}},
                resolved);
}

void cmd_price(const RunConfig& config, const ordered_json& resolved) {
  const auto& pr = config.pricing;
  const ModelParams p = at_maturity(config);
  const MultiFactorKernel kernel = configured_kernel(config, config.kernel.n, pr.maturity);
  const Smile frac = smile(p, FractionalKernel(p.hurst), pr.k_grid, pr.maturity, config.riccati.steps,
                           pr.integration, pr.options, config.threads);
  const Smile multi =
      smile(p, kernel, pr.k_grid, pr.maturity, config.riccati.steps, pr.integration, pr.options, config.threads);
  std::ostringstream os;
  os << "k,price_fractional,price_multifactor,price_diff\n";
  for (std::size_t i = 0; i < pr.k_grid.size(); ++i) {
    const double a = frac.points[i].price;
    const double b = multi.points[i].price;
    os << format_double(pr.k_grid[i]) << ',' << format_double(a) << ',' << format_double(b) << ','
       << format_double(b - a) << '\n';
  }
  io::write_text(config.output_dir / "prices.csv", os.str());
  write_summary(config, "price", {{"n_factors", kernel.size()}, {"strikes", pr.k_grid.size()}}, resolved);
}

void cmd_smile(const RunConfig& config, const ordered_json& resolved) {
  const auto& pr = config.pricing;
  const ModelParams p = at_maturity(config);
  const MultiFactorKernel kernel = configured_kernel(config, config.kernel.n, pr.maturity);
  const Smile frac = smile(p, FractionalKernel(p.hurst), pr.k_grid, pr.maturity, config.riccati.steps,
                           pr.integration, pr.options, config.threads);
  const Smile multi =
      smile(p, kernel, pr.k_grid, pr.maturity, config.riccati.steps, pr.integration, pr.options, config.threads);
  io::write_text(config.output_dir / "smile_fractional.csv", io::smile_csv(frac));
  io::write_text(config.output_dir / "smile_multifactor.csv", io::smile_csv(multi));

  std::ostringstream os;
  os << "k,iv_fractional,iv_multifactor,iv_diff\n";
  double atm_gap = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < pr.k_grid.size(); ++i) {
    const double a = frac.points[i].implied_vol;
    const double b = multi.points[i].implied_vol;
    os << format_double(pr.k_grid[i]) << ',' << format_double(a) << ',' << format_double(b) << ','
       << format_double(b - a) << '\n';
    if (pr.k_grid[i] == 0.0) atm_gap = b - a;
  }
  io::write_text(config.output_dir / "smile_diff.csv", os.str());
  write_summary(config, "smile", {{"n_factors", kernel.size()}, {"atm_iv_gap", atm_gap}}, resolved);
}

void cmd_simulate(const RunConfig& config, const ordered_json& resolved) {
  const auto& sim = config.simulation;
  const SimulationResult result =
      sim.config.scheme == SimulationScheme::multifactor
          ? simulate_multifactor(config.model, configured_kernel(config, config.kernel.n, config.model.horizon),
                                 sim.config)
          : simulate_volterra_oracle(config.model, sim.config);
  io::write_text(config.output_dir / "terminal_spots.csv", io::terminal_spots_csv(result));

  if (!result.snapshots.empty()) {
    std::ostringstream os;
    os << "path,t,spot,variance\n";
    for (std::size_t p = 0; p < result.snapshots.size(); ++p) {
      const PathSnapshot& s = result.snapshots[p];
      for (std::size_t j = 0; j < s.times.size(); ++j) {
        os << p << ',' << format_double(s.times[j]) << ',' << format_double(s.spot[j]) << ','
           << format_double(s.variance[j]) << '\n';
      }
    }
    io::write_text(config.output_dir / "paths.csv", os.str());
  }

  ordered_json prices = ordered_json::array();
  for (double k : sim.k_grid) {
    const McPrice mc = mc_call_price(result, k, config.model.s0, sim.config.antithetic);
    prices.push_back({{"k", k}, {"price", mc.price}, {"std_error", mc.std_error}});
  }
  double mean_spot = 0.0;
  for (double s : result.terminal_spots) mean_spot += s;
  mean_spot /= static_cast<double>(result.terminal_spots.size());
  double mean_rv = 0.0;
  for (double v : result.realized_variance) mean_rv += v;
  mean_rv /= static_cast<double>(result.realized_variance.size());
  write_summary(config, "simulate",
                {{"scheme", to_string(sim.config.scheme)},
                 {"prices", prices},
                 {"mean_terminal_spot", mean_spot},
                 {"mean_realized_variance", mean_rv},
                 {"negative_fraction", result.negative_fraction}},
                resolved);
}

std::vector<BenchRow> run_bench(const RunConfig& config) {
  using clock = std::chrono::steady_clock;
  const auto& b = config.bench;
  std::vector<cplx> zs;
  for (double v : b.b_grid) zs.emplace_back(0.0, v);

  // Fastest per-solve time over the repeats.
  auto time = [&](auto&& solve) {
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < b.repeats; ++r) {
      long solves = 0;
      const auto start = clock::now();
      double elapsed = 0.0;
      do {
        for (cplx z : zs) {
          const RiccatiSolution sol = solve(z);
          if (!std::isfinite(sol.terminal().real())) throw NumericalError("bench: non-finite Riccati solution");
          ++solves;
        }
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
      } while (elapsed < b.min_seconds);
      best = std::min(best, elapsed / static_cast<double>(solves));
    }
    return best;
  };

  std::vector<BenchRow> rows;
  for (int steps : b.steps) {
    const AdamsRiccatiSolver adams(config.model, steps);
    rows.push_back({"adams", 0, steps, time([&](cplx z) { return adams.solve(z); })});
  }
  for (int n : b.factors) {
    const MultiFactorKernel kernel = build_kernel(FactorChoice::uniform_optimal, n, config.model.hurst,
                                                  config.model.horizon).kernel;
    for (int steps : b.steps) {
      const MultiFactorRiccatiSolver solver(kernel, config.model, steps, config.riccati.scheme);
      rows.push_back({"multifactor", n, steps, time([&](cplx z) { return solver.solve(z); })});
    }
  }
  return rows;
}

double bench_ratio(const std::vector<BenchRow>& rows, const std::string& solver, int n_num, int steps_num,
                   int n_den, int steps_den) {
  auto find = [&](int n, int steps) {
    for (const auto& r : rows) {
      if (r.solver == solver && r.n == n && r.steps == steps) return r.seconds;
    }
    throw ConfigError("bench table lacks " + solver + " n=" + std::to_string(n) + " steps=" + std::to_string(steps));
  };
  return find(n_num, steps_num) / find(n_den, steps_den);
}

void cmd_bench(const RunConfig& config, const ordered_json& resolved) {
  const auto rows = run_bench(config);
  std::ostringstream os;
  os << "solver,n,steps,seconds_per_solve\n";
  for (const auto& r : rows) os << r.solver << ',' << r.n << ',' << r.steps << ',' << format_double(r.seconds) << '\n';
  io::write_text(config.output_dir / "bench.csv", os.str());

  ordered_json ratios = ordered_json::object();
  auto try_ratio = [&](const std::string& name, auto&& f) {
    try {
      ratios[name] = f();
    } catch (const ConfigError&) {
    }
  };
  try_ratio("adams_steps_400_over_200", [&] { return bench_ratio(rows, "adams", 0, 400, 0, 200); });
  for (int n : config.bench.factors) {
    try_ratio("multifactor_n" + std::to_string(n) + "_steps_400_over_200",
              [&] { return bench_ratio(rows, "multifactor", n, 400, n, 200); });
  }
  try_ratio("multifactor_steps200_n500_over_n100",
            [&] { return bench_ratio(rows, "multifactor", 500, 200, 100, 200); });
  write_summary(config, "bench", {{"ratios", ratios}}, resolved);
}

}  // namespace roughmf::app

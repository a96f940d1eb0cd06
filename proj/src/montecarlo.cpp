#include "roughmf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "roughmf/errors.hpp"
#include "roughmf/philox.hpp"

namespace roughmf {

SimulationScheme parse_simulation_scheme(std::string_view name) {
  if (name == "multifactor") return SimulationScheme::multifactor;
  if (name == "volterra_oracle") return SimulationScheme::volterra_oracle;
  throw ConfigError("unknown simulation scheme '" + std::string(name) + "'");
}

std::string to_string(SimulationScheme scheme) {
  return scheme == SimulationScheme::multifactor ? "multifactor" : "volterra_oracle";
}

void SimulationConfig::validate() const {
  if (n_paths < 1) throw ConfigError("n_paths must be >= 1");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (antithetic && n_paths % 2 != 0) throw ConfigError("antithetic sampling needs an even n_paths");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  if (snapshot_paths < 0 || snapshot_paths > n_paths) throw ConfigError("snapshot_paths must lie in [0, n_paths]");
}

namespace {

unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

// Runs body(path) for every path on contiguous per-thread ranges.
void for_each_path(int n_paths, unsigned threads, const std::function<void(int)>& body) {
  threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(n_paths));
  if (threads <= 1) {
    for (int p = 0; p < n_paths; ++p) body(p);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n_paths + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (unsigned w = 0; w < threads; ++w) {
    const int from = static_cast<int>(w) * chunk;
    const int to = std::min(n_paths, from + chunk);
    if (from >= to) break;
    pool.emplace_back([&body, from, to] {
      for (int p = from; p < to; ++p) body(p);
    });
  }
  for (auto& t : pool) t.join();
}

// Normal pairs for one path; antithetic partners share the stream of the even
// path and flip the sign.
class PathNormals {
 public:
  PathNormals(const SimulationConfig& cfg, int path)
      : engine_(cfg.seed, cfg.antithetic ? static_cast<std::uint64_t>(path / 2) : static_cast<std::uint64_t>(path)),
        sampler_(engine_),
        sign_(cfg.antithetic && (path & 1) ? -1.0 : 1.0) {}

  double operator()() { return sign_ * sampler_(); }

 private:
  Philox4x32 engine_;
  NormalSampler<Philox4x32> sampler_;
  double sign_;
};

bool keeps_snapshot(const SimulationConfig& cfg, int path) {
  return cfg.snapshot_every > 0 && path < cfg.snapshot_paths;
}

bool snapshot_step(const SimulationConfig& cfg, int k) {
  return k % cfg.snapshot_every == 0 || k == cfg.steps;
}

SimulationResult allocate(const SimulationConfig& cfg) {
  SimulationResult r;
  r.terminal_spots.resize(static_cast<std::size_t>(cfg.n_paths));
  r.realized_variance.resize(static_cast<std::size_t>(cfg.n_paths));
  r.terminal_variance.resize(static_cast<std::size_t>(cfg.n_paths));
  if (cfg.snapshot_every > 0) r.snapshots.resize(static_cast<std::size_t>(cfg.snapshot_paths));
  return r;
}

double finish_negative_fraction(const std::vector<int>& negatives, const SimulationConfig& cfg) {
  long long total = 0;
  for (int n : negatives) total += n;
  return static_cast<double>(total) / (static_cast<double>(cfg.n_paths) * cfg.steps);
}

}  // namespace

SimulationResult simulate_multifactor(const ModelParams& params, const MultiFactorKernel& kernel,
                                      const SimulationConfig& config) {
  params.validate();
  config.validate();
  if (config.scheme != SimulationScheme::multifactor) throw ConfigError("simulate_multifactor needs scheme multifactor");

  const int steps = config.steps;
  const double dt = params.horizon / steps;
  const double sqrt_dt = std::sqrt(dt);
  const double rho_perp = std::sqrt(1.0 - params.rho * params.rho);
  const std::size_t n = kernel.size();
  const auto& c = kernel.weights();

  std::vector<double> decay(n);
  std::vector<double> phi1(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = kernel.rates()[i];
    decay[i] = std::exp(-g * dt);
    phi1[i] = g > 0.0 ? -std::expm1(-g * dt) / g : dt;
  }
  std::vector<double> g_grid(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) g_grid[static_cast<std::size_t>(k)] = g_curve(params, kernel, config.g_variant, k * dt);

  SimulationResult result = allocate(config);
  std::vector<int> negatives(static_cast<std::size_t>(config.n_paths), 0);

  for_each_path(config.n_paths, config.threads, [&](int path) {
    PathNormals normals(config, path);
    std::vector<double> factors(n, 0.0);
    double v = g_grid[0];
    double log_s = std::log(params.s0);
    double realized = 0.0;
    int negative = 0;
    PathSnapshot* snap = keeps_snapshot(config, path) ? &result.snapshots[static_cast<std::size_t>(path)] : nullptr;
    auto record = [&](int k) {
      if (!snap || !snapshot_step(config, k)) return;
      snap->times.push_back(k * dt);
      snap->spot.push_back(std::exp(log_s));
      snap->variance.push_back(std::max(v, 0.0));
      snap->factors.push_back(factors);
    };
    record(0);
    for (int k = 0; k < steps; ++k) {
      const double v_plus = std::max(v, 0.0);
      const double xi_w = normals();
      const double xi_b = params.rho * xi_w + rho_perp * normals();
      const double drift = -params.lambda * v_plus;
      // Cell-averaged weight φ1/Δ on the Brownian increment.
      const double shock = params.nu * std::sqrt(v_plus) * sqrt_dt * xi_b / dt;
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        factors[i] = decay[i] * factors[i] + phi1[i] * (drift + shock);
        sum += c[i] * factors[i];
      }
      realized += v_plus * dt;
      log_s += -0.5 * v_plus * dt + std::sqrt(v_plus * dt) * xi_w;
      v = g_grid[static_cast<std::size_t>(k) + 1] + sum;
      if (v < 0.0) ++negative;
      record(k + 1);
    }
    const auto idx = static_cast<std::size_t>(path);
    result.terminal_spots[idx] = std::exp(log_s);
    result.realized_variance[idx] = realized;
    result.terminal_variance[idx] = v;
    negatives[idx] = negative;
  });
  result.negative_fraction = finish_negative_fraction(negatives, config);
  return result;
}

SimulationResult simulate_volterra_oracle(const ModelParams& params, const SimulationConfig& config) {
  params.validate();
  config.validate();
  if (config.scheme != SimulationScheme::volterra_oracle) {
    throw ConfigError("simulate_volterra_oracle needs scheme volterra_oracle");
  }
  if (config.steps > kVolterraMaxSteps) throw ConfigError("volterra_oracle: steps above the supported maximum");

  const int steps = config.steps;
  const double dt = params.horizon / steps;
  const double sqrt_dt = std::sqrt(dt);
  const double rho_perp = std::sqrt(1.0 - params.rho * params.rho);
  const FractionalKernel kernel(params.hurst, params.classical_mode);

  // weights[m] = (1/Δ) ∫_{(m-1)Δ}^{mΔ} K(u) du, m ≥ 1.
  std::vector<double> weights(static_cast<std::size_t>(steps) + 1, 0.0);
  for (int m = 1; m <= steps; ++m) weights[static_cast<std::size_t>(m)] = kernel.integral((m - 1) * dt, m * dt) / dt;
  std::vector<double> g_grid(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) g_grid[static_cast<std::size_t>(k)] = g_curve(params, kernel, config.g_variant, k * dt);

  SimulationResult result = allocate(config);
  std::vector<int> negatives(static_cast<std::size_t>(config.n_paths), 0);

  for_each_path(config.n_paths, config.threads, [&](int path) {
    PathNormals normals(config, path);
    std::vector<double> increments(static_cast<std::size_t>(steps), 0.0);
    double v = g_grid[0];
    double log_s = std::log(params.s0);
    double realized = 0.0;
    int negative = 0;
    PathSnapshot* snap = keeps_snapshot(config, path) ? &result.snapshots[static_cast<std::size_t>(path)] : nullptr;
    auto record = [&](int k) {
      if (!snap || !snapshot_step(config, k)) return;
      snap->times.push_back(k * dt);
      snap->spot.push_back(std::exp(log_s));
      snap->variance.push_back(std::max(v, 0.0));
    };
    record(0);
    for (int k = 0; k < steps; ++k) {
      const double v_plus = std::max(v, 0.0);
      const double xi_w = normals();
      const double xi_b = params.rho * xi_w + rho_perp * normals();
      increments[static_cast<std::size_t>(k)] =
          -params.lambda * v_plus * dt + params.nu * std::sqrt(v_plus) * sqrt_dt * xi_b;
      realized += v_plus * dt;
      log_s += -0.5 * v_plus * dt + std::sqrt(v_plus * dt) * xi_w;
      double conv = 0.0;
      for (int j = 0; j <= k; ++j) {
        conv += weights[static_cast<std::size_t>(k + 1 - j)] * increments[static_cast<std::size_t>(j)];
      }
      v = g_grid[static_cast<std::size_t>(k) + 1] + conv;
      if (v < 0.0) ++negative;
      record(k + 1);
    }
    const auto idx = static_cast<std::size_t>(path);
    result.terminal_spots[idx] = std::exp(log_s);
    result.realized_variance[idx] = realized;
    result.terminal_variance[idx] = v;
    negatives[idx] = negative;
  });
  result.negative_fraction = finish_negative_fraction(negatives, config);
  return result;
}

McPrice mc_call_price(const SimulationResult& result, double k, double s0, bool antithetic) {
  const auto& spots = result.terminal_spots;
  if (spots.empty()) throw DomainError("mc_call_price: empty simulation result");
  if (antithetic && spots.size() % 2 != 0) throw DomainError("mc_call_price: antithetic needs an even path count");
  const double strike = s0 * std::exp(k);
  std::vector<double> samples;
  if (antithetic) {
    for (std::size_t p = 0; p < spots.size(); p += 2) {
      samples.push_back(0.5 * (std::max(spots[p] - strike, 0.0) + std::max(spots[p + 1] - strike, 0.0)));
    }
  } else {
    for (double s : spots) samples.push_back(std::max(s - strike, 0.0));
  }
  const double m = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= m;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  const double se = samples.size() > 1 ? std::sqrt(var / (m - 1.0) / m) : 0.0;
  return {mean, se};
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / x.size() - static_cast<double>(j) / y.size()));
  }
  return d;
}

double ks_critical_value(std::size_t n_a, std::size_t n_b, double level) {
  if (n_a == 0 || n_b == 0) throw DomainError("ks_critical_value: empty sample");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("ks_critical_value: level must lie in (0, 1)");
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  return std::sqrt(-0.5 * std::log(0.5 * level)) * std::sqrt((na + nb) / (na * nb));
}

}  // namespace roughmf

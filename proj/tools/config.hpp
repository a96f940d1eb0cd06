#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughmf/montecarlo.hpp"
#include "roughmf/pricing.hpp"

namespace roughmf::app {

using nlohmann::ordered_json;

/// Built-in defaults.
ordered_json default_config();

/// Applies `key.path=value` to a config document. The value is parsed as
/// JSON when possible and kept as a string otherwise. Unknown keys are errors.
void apply_override(ordered_json& config, const std::string& assignment);

/// defaults <- optional file <- overrides, in that order.
ordered_json resolve_config(const std::optional<std::filesystem::path>& file,
                            const std::vector<std::string>& overrides);

struct KernelSettings {
  FactorChoice choice = FactorChoice::uniform_optimal;
  int n = 20;
  std::vector<int> n_list;
  std::string file;  // explicit partition or kernel JSON; overrides choice
};

struct RiccatiSettings {
  int steps = 200;
  MultiFactorScheme scheme = MultiFactorScheme::exponential_trapezoid;
  std::vector<double> b_grid;
  cplx z{0.0, 10.0};
};

struct PricingSettings {
  double maturity = 1.0;
  std::vector<double> k_grid;
  IntegrationConfig integration;
  CharFnOptions options;
};

struct SimulationSettings {
  SimulationConfig config;
  std::vector<double> k_grid;
};

struct BenchSettings {
  std::vector<int> steps;
  std::vector<int> factors;
  std::vector<double> b_grid;
  double min_seconds = 0.2;
  int repeats = 3;
};

/// Typed view of a resolved config document. Throws ConfigError on type or
/// range problems and on referential errors (missing files, empty grids).
struct RunConfig {
  ModelParams model;
  KernelSettings kernel;
  RiccatiSettings riccati;
  PricingSettings pricing;
  SimulationSettings simulation;
  BenchSettings bench;
  std::filesystem::path output_dir = "out";
  unsigned threads = 0;

  static RunConfig from_json(const ordered_json& doc);
};

}  // namespace roughmf::app

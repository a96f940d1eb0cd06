#include "config.hpp"

#include <sstream>

#include "defaults.hpp"
#include "roughmf/errors.hpp"
#include "roughmf/io.hpp"

namespace roughmf::app {

namespace {

// Copies `patch` into `target`; every key must already exist in `target`.
void merge_known(ordered_json& target, const ordered_json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw ConfigError("config section '" + prefix + "' must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!target.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    ordered_json& slot = target[key];
    if (slot.is_object() && value.is_object()) {
      merge_known(slot, value, path);
    } else {
      slot = value;
    }
  }
}

template <class T>
T get(const ordered_json& doc, const char* section, const char* key) {
  const ordered_json& node = section ? doc.at(section) : doc;
  if (!node.contains(key)) throw ConfigError(std::string("missing config key '") + key + "'");
  try {
    return node.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    std::ostringstream os;
    os << "config key '" << (section ? std::string(section) + "." : std::string()) << key << "' has the wrong type";
    throw ConfigError(os.str());
  }
}

template <class T>
std::vector<T> non_empty(std::vector<T> values, const char* what) {
  if (values.empty()) throw ConfigError(std::string(what) + " must not be empty");
  return values;
}

ThetaCurve parse_theta(const ordered_json& node) {
  if (node.is_number()) return ThetaCurve(node.get<double>());
  if (node.is_object() && node.contains("starts") && node.contains("values")) {
    return ThetaCurve(node.at("starts").get<std::vector<double>>(), node.at("values").get<std::vector<double>>());
  }
  throw ConfigError("model.theta must be a number or {\"starts\": [...], \"values\": [...]}");
}

}  // namespace

ordered_json default_config() { return ordered_json::parse(kDefaultConfigJson); }

void apply_override(ordered_json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  ordered_json* node = &config;
  std::string path;
  std::istringstream parts(key);
  for (std::string part; std::getline(parts, part, '.');) {
    path += path.empty() ? part : "." + part;
    if (!node->is_object() || !node->contains(part)) throw ConfigError("unknown config key '" + path + "'");
    node = &(*node)[part];
  }
  ordered_json value;
  try {
    value = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }
  *node = value;
}

ordered_json resolve_config(const std::optional<std::filesystem::path>& file,
                            const std::vector<std::string>& overrides) {
  ordered_json config = default_config();
  if (file) merge_known(config, io::read_json(*file), "");
  for (const auto& o : overrides) apply_override(config, o);
  return config;
}

RunConfig RunConfig::from_json(const ordered_json& doc) {
  RunConfig rc;
  try {
    ModelParams& m = rc.model;
    m.lambda = get<double>(doc, "model", "lambda");
    m.rho = get<double>(doc, "model", "rho");
    m.nu = get<double>(doc, "model", "nu");
    m.hurst = get<double>(doc, "model", "hurst");
    m.v0 = get<double>(doc, "model", "v0");
    m.theta = parse_theta(doc.at("model").at("theta"));
    m.s0 = get<double>(doc, "model", "s0");
    m.horizon = get<double>(doc, "model", "horizon");
    m.validate();

    KernelSettings& k = rc.kernel;
    k.choice = parse_factor_choice(get<std::string>(doc, "kernel", "choice"));
    k.n = get<int>(doc, "kernel", "n");
    k.n_list = non_empty(get<std::vector<int>>(doc, "kernel", "n_list"), "kernel.n_list");
    k.file = get<std::string>(doc, "kernel", "file");
    if (k.n < 1) throw ConfigError("kernel.n must be >= 1");
    for (int n : k.n_list) {
      if (n < 1) throw ConfigError("kernel.n_list entries must be >= 1");
    }
    if (!k.file.empty() && !std::filesystem::exists(k.file)) {
      throw ConfigError("kernel.file '" + k.file + "' does not exist");
    }

    RiccatiSettings& r = rc.riccati;
    r.steps = get<int>(doc, "riccati", "steps");
    r.scheme = parse_scheme(get<std::string>(doc, "riccati", "scheme"));
    r.b_grid = non_empty(get<std::vector<double>>(doc, "riccati", "b_grid"), "riccati.b_grid");
    const auto z = get<std::vector<double>>(doc, "riccati", "z");
    if (z.size() != 2) throw ConfigError("riccati.z must be [re, im]");
    r.z = cplx(z[0], z[1]);
    if (r.steps < 1) throw ConfigError("riccati.steps must be >= 1");

    PricingSettings& p = rc.pricing;
    p.maturity = get<double>(doc, "pricing", "maturity");
    p.k_grid = non_empty(get<std::vector<double>>(doc, "pricing", "k_grid"), "pricing.k_grid");
    p.integration.b_max = get<double>(doc, "pricing", "b_max");
    p.integration.nodes = get<int>(doc, "pricing", "nodes");
    p.integration.tail_tolerance = get<double>(doc, "pricing", "tail_tolerance");
    p.options.form = parse_form(get<std::string>(doc, "pricing", "form"));
    p.options.g_variant = parse_g_variant(get<std::string>(doc, "pricing", "g_variant"));
    p.options.scheme = r.scheme;
    if (!(p.maturity > 0.0)) throw ConfigError("pricing.maturity must be positive");

    SimulationSettings& s = rc.simulation;
    s.config.n_paths = get<int>(doc, "simulation", "n_paths");
    s.config.steps = get<int>(doc, "simulation", "steps");
    s.config.seed = get<std::uint64_t>(doc, "simulation", "seed");
    s.config.scheme = parse_simulation_scheme(get<std::string>(doc, "simulation", "scheme"));
    s.config.antithetic = get<bool>(doc, "simulation", "antithetic");
    s.config.snapshot_every = get<int>(doc, "simulation", "snapshot_every");
    s.config.snapshot_paths = get<int>(doc, "simulation", "snapshot_paths");
    s.k_grid = non_empty(get<std::vector<double>>(doc, "simulation", "k_grid"), "simulation.k_grid");
    s.config.validate();

    BenchSettings& b = rc.bench;
    b.steps = non_empty(get<std::vector<int>>(doc, "bench", "steps"), "bench.steps");
    b.factors = non_empty(get<std::vector<int>>(doc, "bench", "factors"), "bench.factors");
    b.b_grid = non_empty(get<std::vector<double>>(doc, "bench", "b_grid"), "bench.b_grid");
    b.min_seconds = get<double>(doc, "bench", "min_seconds");
    b.repeats = get<int>(doc, "bench", "repeats");
    if (b.repeats < 1) throw ConfigError("bench.repeats must be >= 1");

    rc.output_dir = get<std::string>(doc, nullptr, "output_dir");
    const int threads = get<int>(doc, nullptr, "threads");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    rc.threads = static_cast<unsigned>(threads);
    s.config.threads = rc.threads;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return rc;
}

}  // namespace roughmf::app

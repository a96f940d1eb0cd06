#include "roughmf/io.hpp"

#include <fstream>
#include <sstream>

#include "roughmf/errors.hpp"

namespace roughmf::io {

namespace {

std::vector<double> number_array(const ordered_json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw ValidationError(std::string("expected an array field '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : doc.at(key)) {
    if (!v.is_number()) throw ValidationError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

ordered_json partition_to_json(double hurst, const Partition& partition) {
  ordered_json doc;
  doc["hurst"] = hurst;
  doc["etas"] = partition.etas();
  return doc;
}

Partition partition_from_json(const ordered_json& doc, double* hurst) {
  if (hurst) *hurst = doc.value("hurst", 0.0);
  try {
    return Partition(number_array(doc, "etas"));
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid partition: ") + e.what());
  }
}

ordered_json kernel_to_json(const MultiFactorKernel& kernel) {
  ordered_json doc;
  doc["hurst"] = kernel.hurst();
  doc["weights"] = kernel.weights();
  doc["rates"] = kernel.rates();
  return doc;
}

MultiFactorKernel kernel_from_json(const ordered_json& doc) {
  try {
    return MultiFactorKernel(number_array(doc, "weights"), number_array(doc, "rates"), doc.value("hurst", 0.0));
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid kernel: ") + e.what());
  }
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string riccati_csv(const RiccatiSolution& solution) {
  std::ostringstream os;
  os << "t,re_psi,im_psi\n";
  for (int j = 0; j <= solution.steps(); ++j) {
    const cplx v = solution.psi[static_cast<std::size_t>(j)];
    os << format_double(solution.t(j)) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  }
  return os.str();
}

std::string smile_csv(const Smile& smile) {
  std::ostringstream os;
  os << "k,price,iv\n";
  for (const auto& p : smile.points) {
    os << format_double(p.k) << ',' << format_double(p.price) << ',' << format_double(p.implied_vol) << '\n';
  }
  return os.str();
}

std::string error_report_csv(const std::vector<RiccatiErrorRow>& rows) {
  std::ostringstream os;
  os << "n,b,rel_err,l1_err,f1_bound,f2_bound\n";
  for (const auto& r : rows) {
    os << r.n << ',' << format_double(r.b) << ',' << (r.rel_err ? format_double(*r.rel_err) : "nan") << ','
       << format_double(r.l1_err) << ',' << format_double(r.f1_bound) << ',' << format_double(r.f2_bound) << '\n';
  }
  return os.str();
}

std::string terminal_spots_csv(const SimulationResult& result) {
  std::ostringstream os;
  os << "path,terminal_spot,realized_variance,terminal_variance\n";
  for (std::size_t p = 0; p < result.terminal_spots.size(); ++p) {
    os << p << ',' << format_double(result.terminal_spots[p]) << ',' << format_double(result.realized_variance[p])
       << ',' << format_double(result.terminal_variance[p]) << '\n';
  }
  return os.str();
}

ordered_json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

}  // namespace roughmf::io

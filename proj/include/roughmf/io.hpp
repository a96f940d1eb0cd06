#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "roughmf/kernel.hpp"
#include "roughmf/montecarlo.hpp"
#include "roughmf/pricing.hpp"
#include "roughmf/riccati.hpp"

namespace roughmf::io {

using nlohmann::ordered_json;

/// {"hurst": H, "etas": [...]}
ordered_json partition_to_json(double hurst, const Partition& partition);
/// Returns the hurst index stored next to the partition. Malformed input
/// raises ConfigError, as for kernel_from_json.
Partition partition_from_json(const ordered_json& doc, double* hurst = nullptr);

/// {"hurst": H, "weights": [...], "rates": [...]}
ordered_json kernel_to_json(const MultiFactorKernel& kernel);
MultiFactorKernel kernel_from_json(const ordered_json& doc);

/// Doubles are written with 17 significant digits so files roundtrip exactly.
std::string format_double(double x);

std::string riccati_csv(const RiccatiSolution& solution);
std::string smile_csv(const Smile& smile);
std::string error_report_csv(const std::vector<RiccatiErrorRow>& rows);
std::string terminal_spots_csv(const SimulationResult& result);

ordered_json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const ordered_json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace roughmf::io

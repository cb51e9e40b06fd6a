#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "opo/ensemble.hpp"

namespace opo {

// %.17g: enough digits for exact double round-trip, short enough to read.
std::string g17(double x);

std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t h);

void write_vtheta_csv(const std::string& path, const RunResult& r);
void write_spectra_csv(const std::string& path, const RunResult& r);
void write_fixedlo_csv(const std::string& path, const RunResult& r);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  long rows() const { return cols.empty() ? 0 : static_cast<long>(cols[0].size()); }
  const std::vector<double>& col(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

// Writes var_theta.csv (always), spectra.csv / fixedlo.csv (when present) and
// manifest.json into dir; returns the file names written.
std::vector<std::string> write_run_outputs(const std::string& dir, const RunConfig& cfg,
                                           const RunResult& r);

}  // namespace opo

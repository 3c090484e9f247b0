#pragma once

#include <nlohmann/json_fwd.hpp>
#include <filesystem>
#include <fstream>

#include "einselect/hilbert.hpp"
#include "einselect/wigner.hpp"

// vendored single-header json
#include "json.hpp"

namespace einselect {
namespace io {

using json = nlohmann::json;

/// Complex amplitudes serialize as row-major [re, im] pairs.
json to_json(const PureState& psi);
json to_json(const DensityMatrix& rho);
PureState pure_state_from_json(const json& j);
DensityMatrix density_matrix_from_json(const json& j);

/// CSV with a fixed header row; numbers print with 17 significant digits
/// so identical runs serialize bit-identically.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);
  void close();

 private:
  std::ofstream out_;
  size_t n_cols_;
};

/// One JSON header line terminated by '\n', then raw little-endian float64.
void write_snapshot(const std::filesystem::path& path, const json& header,
                    const double* data, size_t count);

struct Snapshot {
  json header;
  std::vector<double> data;
};
Snapshot read_snapshot(const std::filesystem::path& path);

/// Static SVG heatmap with a diverging palette centered at zero. Grids
/// larger than 256x256 are rasterized into an embedded PNG tile.
void svg_heatmap(const std::filesystem::path& path, const RMat& values,
                 const std::string& title, double x0, double dx, double y0,
                 double dy);

uint64_t fnv1a64(const std::string& bytes);
uint32_t file_crc32(const std::filesystem::path& path);

/// Writes content to path atomically (temp file + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace io
}  // namespace einselect

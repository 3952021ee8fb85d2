#pragma once

#include "sublab/eigensolve.hpp"
#include "sublab/grid.hpp"
#include "sublab/group_model.hpp"
#include "sublab/inequalities.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sublab {

using json = nlohmann::json;

/// Raised on malformed descriptors; `field` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config error at " + field + ": " + message),
        field(std::move(field)) {}
  std::string field;
};

// Model descriptor: {"kind":"heisenberg","n":..} | {"kind":"carnot_step2",
// "d1":..,"d2":..,"c":[[..d1 x d1..] x d2]} | {"kind":"abelian","d":..}
json model_to_json(const GroupModel& model);
GroupModel model_from_json(const json& j, const std::string& field = "model");

// Grid descriptor: {"box":[[lo,hi]..], "h":[..] or scalar,
// "indicator":{"type":"box"|"ball",...}} (indicator optional).
json grid_to_json(const GridDomain& grid);
GridDomain grid_from_json(const json& j, const std::string& field = "grid");

json spectrum_to_json(const Spectrum& s, const std::string& vectors_file = {});
Spectrum spectrum_from_json(const json& j);

json report_to_json(const InequalityReport& r);
void report_rows_to_csv(std::ostream& os, const std::vector<InequalityReport>& reports,
                        bool header = true);

// Eigenvector block file: magic "SBSP", u32 version, u64 N, u64 k, then
// column-major little-endian doubles.
void write_vectors_binary(const std::filesystem::path& path, const Mat& vectors);
Mat read_vectors_binary(const std::filesystem::path& path);

json load_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sublab

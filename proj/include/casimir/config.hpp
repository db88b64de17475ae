#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/lifshitz.hpp"
#include "casimir/mtb_sim.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/stack.hpp"

namespace casimir {

/// Configuration problem, located by JSON path.
class config_error : public std::runtime_error {
 public:
  config_error(const std::string& json_path, const std::string& message)
      : std::runtime_error(json_path + ": " + message), path_(json_path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ForceSection {
  std::string sphere;  // stack name
  std::string plate;   // stack name
  std::string gap;     // material name
  std::optional<std::string> sphere_roughness;  // profile JSON path
  std::optional<std::string> plate_roughness;
};

struct SynthSection {
  MtbParams mtb;
  SweepPlan plan;
  std::string force_law = "zero";  // zero | ideal_metal | lifshitz
};

/// Parsed run configuration. All units SI; file references are resolved
/// relative to the config file's directory.
struct RunConfig {
  std::map<std::string, DielectricModel> materials;
  std::map<std::string, LayerStack> stacks;
  double radius = 0.0;                // meters
  std::vector<double> separations;    // meters, ascending
  QuadratureConfig quadrature;
  std::optional<ForceSection> force;
  std::optional<SynthSection> synth;
  std::string base_dir;  // directory of the config file

  const LayerStack& stack(const std::string& name,
                          const std::string& json_path) const;
  const DielectricModel& material(const std::string& name,
                                  const std::string& json_path) const;
};

// Loads and validates a config file. Unknown material/stack references,
// malformed values and unit violations raise config_error with the JSON
// path of the offending entry. A top-level "include_materials" path merges
// materials from another file (local definitions win).
RunConfig load_run_config(const std::string& path);

}  // namespace casimir

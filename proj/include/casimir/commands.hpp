#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "casimir/config.hpp"
#include "casimir/roughness.hpp"

namespace casimir::commands {

struct ForceOptions {
  std::string config_path;
  std::string out_csv;
  std::string svg_path;            // empty = no plot
  std::string roughness_override;  // "sphere.json,plate.json", "-" = smooth
  int jobs = 1;
  bool roughness_direct = false;   // re-integrate at each shifted separation
};

// Force curve -> CSV (d_m, force_N, abs_force_pN, rel_err), optional SVG.
void cmd_force(const ForceOptions& opt);

// Elementwise ratio of two force curves sharing a separation grid.
void cmd_compare(const std::string& config_a, const std::string& config_b,
                 const std::string& out_csv, int jobs,
                 const std::string& svg_path = "");

// eps(i xi) of a named material over a log-spaced grid -> CSV.
void cmd_kk(const std::string& config_path, const std::string& material,
            double xi_min, double xi_max, std::size_t points,
            const std::string& out_csv);

// Height-map CSV -> roughness profile JSON. cols = 0 reads a 2-D grid;
// cols > 0 reshapes a single column.
void cmd_roughness(const std::string& heightmap_path, std::size_t n_bins,
                   std::size_t cols, double pitch, const std::string& out_json);

// Synthetic sweep dataset -> CSV (sweep_id, d_pz_m, v_bias_V, a_au).
void cmd_synth(const std::string& config_path, const std::string& out_csv,
               std::optional<std::uint64_t> seed_override, int jobs);

// Dataset CSV -> calibration JSON (+ optional force-curve CSV).
void cmd_analyze(const std::string& dataset_csv, double radius,
                 const std::string& out_json, const std::string& out_csv);

RoughnessProfile load_roughness_profile(const std::string& path);
void save_roughness_profile(const std::string& path,
                            const RoughnessProfile& profile);

}  // namespace casimir::commands

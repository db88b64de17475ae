#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "casimir/commands.hpp"
#include "casimir/config.hpp"
#include "casimir/quadrature.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNonConvergence = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sphere-plate Casimir forces for thin-film coatings, with a "
               "torsional-balance calibration pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_path, svg_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;

  // force
  auto* force = app.add_subcommand("force", "compute a force-vs-distance curve");
  force->add_option("--config", config_path, "run configuration JSON")
      ->required();
  force->add_option("--out", out_path, "output CSV path")->required();
  force->add_option("--svg", svg_path, "optional SVG plot path");
  force->add_option("--jobs", jobs, "worker threads for curve points");
  std::string roughness_arg;
  force->add_option("--roughness", roughness_arg,
                    "sphere.json,plate.json roughness profiles ('-' = smooth)");
  bool roughness_direct = false;
  force->add_flag("--roughness-direct", roughness_direct,
                  "re-integrate at every shifted separation instead of "
                  "splining a dense curve");

  // compare
  auto* compare = app.add_subcommand("compare",
                                     "ratio of two force curves on one grid");
  std::string config_b;
  compare->add_option("--config", config_path, "first configuration")
      ->required();
  compare->add_option("--config-b", config_b, "second configuration")
      ->required();
  compare->add_option("--out", out_path, "output CSV path")->required();
  compare->add_option("--svg", svg_path, "optional SVG plot of both curves");
  compare->add_option("--jobs", jobs, "worker threads for curve points");

  // kk
  auto* kk = app.add_subcommand("kk",
                                "evaluate eps(i xi) for a config material");
  std::string material;
  double xi_min = 1e13, xi_max = 1e17;
  std::size_t kk_points = 101;
  kk->add_option("--config", config_path, "run configuration JSON")
      ->required();
  kk->add_option("--material", material, "material name")->required();
  kk->add_option("--xi-min", xi_min, "lowest xi, rad/s");
  kk->add_option("--xi-max", xi_max, "highest xi, rad/s");
  kk->add_option("--points", kk_points, "grid size");
  kk->add_option("--out", out_path, "output CSV path")->required();

  // roughness
  auto* rough = app.add_subcommand(
      "roughness", "height-map CSV to displacement histogram JSON");
  std::string heightmap;
  std::size_t n_bins = 32, cols = 0;
  double pitch = 0.0;
  rough->add_option("--in", heightmap, "height map CSV (meters)")->required();
  rough->add_option("--bins", n_bins, "number of histogram bins");
  rough->add_option("--cols", cols,
                    "reshape a single-column file to this width");
  rough->add_option("--pitch", pitch, "meters per pixel (metadata)");
  rough->add_option("--out", out_path, "output profile JSON")->required();

  // synth
  auto* synth = app.add_subcommand("synth",
                                   "generate a synthetic sweep dataset");
  synth->add_option("--config", config_path, "run configuration JSON")
      ->required();
  synth->add_option("--out", out_path, "output dataset CSV")->required();
  synth->add_option("--seed", seed, "override the plan seed")
      ->each([&](const std::string&) { seed_given = true; });
  synth->add_option("--jobs", jobs, "worker threads for the force table");

  // analyze
  auto* analyze = app.add_subcommand("analyze",
                                     "run the calibration pipeline on a "
                                     "dataset CSV");
  std::string dataset, out_forces;
  double radius = 0.0;
  analyze->add_option("--in", dataset, "dataset CSV")->required();
  analyze->add_option("--radius", radius, "sphere radius, meters");
  analyze->add_option("--config", config_path,
                      "config supplying geometry/radius_m instead of --radius");
  analyze->add_option("--out", out_path, "output calibration JSON")
      ->required();
  analyze->add_option("--out-forces", out_forces,
                      "optional extracted force curve CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (force->parsed()) {
      casimir::commands::ForceOptions opt;
      opt.config_path = config_path;
      opt.out_csv = out_path;
      opt.svg_path = svg_path;
      opt.roughness_override = roughness_arg;
      opt.jobs = jobs;
      opt.roughness_direct = roughness_direct;
      casimir::commands::cmd_force(opt);
    } else if (compare->parsed()) {
      casimir::commands::cmd_compare(config_path, config_b, out_path, jobs,
                                     svg_path);
    } else if (kk->parsed()) {
      casimir::commands::cmd_kk(config_path, material, xi_min, xi_max,
                                kk_points, out_path);
    } else if (rough->parsed()) {
      casimir::commands::cmd_roughness(heightmap, n_bins, cols, pitch,
                                       out_path);
    } else if (synth->parsed()) {
      casimir::commands::cmd_synth(
          config_path, out_path,
          seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt,
          jobs);
    } else if (analyze->parsed()) {
      if (radius <= 0.0) {
        if (config_path.empty())
          throw casimir::config_error("--radius",
                                      "give --radius or --config");
        radius = casimir::load_run_config(config_path).radius;
      }
      casimir::commands::cmd_analyze(dataset, radius, out_path, out_forces);
    }
  } catch (const casimir::quadrature_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}

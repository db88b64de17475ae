#include "casimir/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>

#include <json.hpp>

#include "casimir/calibration.hpp"
#include "casimir/csv.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/mtb_sim.hpp"
#include "casimir/svg.hpp"

namespace casimir::commands {

using nlohmann::json;

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    g[i] = lo * std::pow(hi / lo, f);
  }
  return g;
}

// Magnitude-of-force evaluator backed by a spline through a dense Lifshitz
// curve bracketing [lo, hi].
std::function<double(double)> make_lifshitz_spline(
    const RunConfig& cfg, const ForceSection& sec, double lo, double hi,
    int jobs) {
  const auto grid = log_grid(lo, hi, 96);
  const auto curve =
      force_curve(cfg.stack(sec.sphere, "/force/sphere"),
                  cfg.stack(sec.plate, "/force/plate"),
                  cfg.material(sec.gap, "/force/gap"), cfg.radius, grid,
                  cfg.quadrature, jobs);
  std::vector<double> d, f;
  d.reserve(curve.size());
  f.reserve(curve.size());
  for (const auto& pt : curve) {
    d.push_back(pt.separation);
    f.push_back(std::fabs(pt.force));
  }
  auto spline = std::make_shared<ForceCurveInterpolator>(std::move(d),
                                                         std::move(f));
  return [spline](double sep) { return (*spline)(sep); };
}

void warn_pfa(const RunConfig& cfg) {
  if (cfg.separations.empty()) return;
  Geometry g{cfg.radius, cfg.separations.back()};
  if (g.pfa_strained())
    std::cerr << "warning: d/R = " << g.separation / g.radius
              << " at the largest separation; the proximity form assumes "
                 "d << R\n";
}

}  // namespace

RoughnessProfile load_roughness_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path, "cannot open roughness profile");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(path, std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object() || !root.contains("bins") ||
      !root.at("bins").is_array())
    throw config_error(path, "expected {\"bins\": [...]}");
  RoughnessProfile profile;
  for (const auto& b : root.at("bins")) {
    if (!b.contains("delta_m") || !b.contains("weight"))
      throw config_error(path, "bin needs delta_m and weight");
    profile.bins.push_back(
        {b.at("delta_m").get<double>(), b.at("weight").get<double>()});
  }
  std::sort(profile.bins.begin(), profile.bins.end(),
            [](const RoughnessBin& a, const RoughnessBin& b) {
              return a.delta < b.delta;
            });
  try {
    profile.validate();
  } catch (const std::exception& e) {
    throw config_error(path, e.what());
  }
  return profile;
}

void save_roughness_profile(const std::string& path,
                            const RoughnessProfile& profile) {
  json root;
  root["bins"] = json::array();
  for (const auto& b : profile.bins)
    root["bins"].push_back({{"delta_m", b.delta}, {"weight", b.weight}});
  root["rms_m"] = profile.rms();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << root.dump(2) << '\n';
}

void cmd_force(const ForceOptions& opt) {
  const RunConfig cfg = load_run_config(opt.config_path);
  if (!cfg.force)
    throw config_error("/force", "missing force section");
  if (cfg.separations.empty())
    throw config_error("/geometry/separations_m",
                       "required to compute a force curve");
  const ForceSection& sec = *cfg.force;
  warn_pfa(cfg);

  RoughnessProfile sphere_prof = RoughnessProfile::smooth();
  RoughnessProfile plate_prof = RoughnessProfile::smooth();
  bool rough = false;
  if (!opt.roughness_override.empty()) {
    const auto comma = opt.roughness_override.find(',');
    if (comma == std::string::npos)
      throw config_error("--roughness",
                         "expected sphere.json,plate.json ('-' for smooth)");
    const std::string sp = opt.roughness_override.substr(0, comma);
    const std::string pl = opt.roughness_override.substr(comma + 1);
    if (!sp.empty() && sp != "-") {
      sphere_prof = load_roughness_profile(sp);
      rough = true;
    }
    if (!pl.empty() && pl != "-") {
      plate_prof = load_roughness_profile(pl);
      rough = true;
    }
  } else {
    if (sec.sphere_roughness) {
      sphere_prof = load_roughness_profile(*sec.sphere_roughness);
      rough = true;
    }
    if (sec.plate_roughness) {
      plate_prof = load_roughness_profile(*sec.plate_roughness);
      rough = true;
    }
  }

  const LayerStack& sphere = cfg.stack(sec.sphere, "/force/sphere");
  const LayerStack& plate = cfg.stack(sec.plate, "/force/plate");
  const DielectricModel& gap = cfg.material(sec.gap, "/force/gap");

  CsvTable out;
  out.header = {"d_m", "force_N", "abs_force_pN", "rel_err"};

  if (!rough) {
    const auto curve = force_curve(sphere, plate, gap, cfg.radius,
                                   cfg.separations, cfg.quadrature, opt.jobs);
    for (const auto& pt : curve)
      out.rows.push_back({pt.separation, pt.force,
                          std::fabs(pt.force) * 1e12, pt.rel_err});
  } else {
    const double shift_lo =
        sphere_prof.bins.back().delta + plate_prof.bins.back().delta;
    const double shift_hi =
        sphere_prof.bins.front().delta + plate_prof.bins.front().delta;
    const double d_lo = cfg.separations.front() - shift_lo;
    const double d_hi = cfg.separations.back() - shift_hi;
    if (!(d_lo > 0.0))
      throw config_error("/force",
                         "roughness displacements reach the smallest "
                         "separation; surfaces would touch");

    std::function<double(double)> base;
    double base_rel_err = cfg.quadrature.rel_tol;
    if (opt.roughness_direct) {
      base = [&](double d) {
        Geometry g{cfg.radius, d};
        return force_sphere_plate(sphere, plate, gap, g, cfg.quadrature);
      };
    } else {
      const auto grid = log_grid(0.95 * d_lo, 1.05 * d_hi, 96);
      const auto dense = force_curve(sphere, plate, gap, cfg.radius, grid,
                                     cfg.quadrature, opt.jobs);
      std::vector<double> ds, fs;
      for (const auto& pt : dense) {
        ds.push_back(pt.separation);
        fs.push_back(pt.force);
        base_rel_err = std::max(base_rel_err, pt.rel_err);
      }
      auto spline = std::make_shared<ForceCurveInterpolator>(std::move(ds),
                                                             std::move(fs));
      base = [spline](double d) { return (*spline)(d); };
    }
    for (double d : cfg.separations) {
      const double f = corrected_force(base, sphere_prof, plate_prof, d);
      out.rows.push_back({d, f, std::fabs(f) * 1e12, base_rel_err});
    }
  }

  write_csv(opt.out_csv, out);

  if (!opt.svg_path.empty()) {
    SvgSeries s;
    s.label = rough ? "|F| with roughness" : "|F|";
    s.color = "#1f77b4";
    for (const auto& row : out.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(row[2]);
    }
    write_svg_plot(opt.svg_path, "sphere-plate force", "separation (m)",
                   "|F| (pN)", {s}, true, true);
  }
}

void cmd_compare(const std::string& config_a, const std::string& config_b,
                 const std::string& out_csv, int jobs,
                 const std::string& svg_path) {
  const RunConfig a = load_run_config(config_a);
  const RunConfig b = load_run_config(config_b);
  if (!a.force) throw config_error(config_a + ":/force", "missing");
  if (!b.force) throw config_error(config_b + ":/force", "missing");
  if (a.separations.empty() || b.separations.empty())
    throw config_error("/geometry/separations_m",
                       "required to compute force curves");
  if (a.separations != b.separations)
    throw config_error("/geometry/separations_m",
                       "the two configs use different separation grids");

  const auto curve_a =
      force_curve(a.stack(a.force->sphere, "/force/sphere"),
                  a.stack(a.force->plate, "/force/plate"),
                  a.material(a.force->gap, "/force/gap"), a.radius,
                  a.separations, a.quadrature, jobs);
  const auto curve_b =
      force_curve(b.stack(b.force->sphere, "/force/sphere"),
                  b.stack(b.force->plate, "/force/plate"),
                  b.material(b.force->gap, "/force/gap"), b.radius,
                  b.separations, b.quadrature, jobs);

  CsvTable out;
  out.header = {"d_m", "force_a_N", "force_b_N", "ratio_a_over_b"};
  for (std::size_t i = 0; i < curve_a.size(); ++i) {
    const double fb = curve_b[i].force;
    out.rows.push_back({curve_a[i].separation, curve_a[i].force, fb,
                        fb != 0.0 ? curve_a[i].force / fb
                                  : std::numeric_limits<double>::quiet_NaN()});
  }
  write_csv(out_csv, out);

  if (!svg_path.empty()) {
    SvgSeries sa{"|F| config A", "#1f77b4", {}, {}};
    SvgSeries sb{"|F| config B", "#d62728", {}, {}};
    for (std::size_t i = 0; i < curve_a.size(); ++i) {
      sa.x.push_back(curve_a[i].separation);
      sa.y.push_back(std::fabs(curve_a[i].force) * 1e12);
      sb.x.push_back(curve_b[i].separation);
      sb.y.push_back(std::fabs(curve_b[i].force) * 1e12);
    }
    write_svg_plot(svg_path, "force curves", "separation (m)", "|F| (pN)",
                   {sa, sb}, true, true);
  }
}

void cmd_kk(const std::string& config_path, const std::string& material,
            double xi_min, double xi_max, std::size_t points,
            const std::string& out_csv) {
  if (!(xi_min > 0.0) || !(xi_max > xi_min))
    throw config_error("--xi-min/--xi-max", "need 0 < xi_min < xi_max");
  if (points < 2) throw config_error("--points", "need at least 2");
  const RunConfig cfg = load_run_config(config_path);
  const DielectricModel& model = cfg.material(material, "/materials");

  CsvTable out;
  out.header = {"xi_rad_s", "eps"};
  for (double xi : log_grid(xi_min, xi_max, points))
    out.rows.push_back({xi, model.eps_at_imaginary(xi)});
  write_csv(out_csv, out);
}

void cmd_roughness(const std::string& heightmap_path, std::size_t n_bins,
                   std::size_t cols, double pitch,
                   const std::string& out_json) {
  const auto rows = read_matrix(heightmap_path);
  HeightMap map;
  map.pitch = pitch;
  if (cols == 0) {
    map.rows = rows.size();
    map.cols = rows.front().size();
    for (const auto& r : rows)
      map.heights.insert(map.heights.end(), r.begin(), r.end());
  } else {
    // Single column reshaped to the declared width.
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (r.size() != 1)
        throw config_error(heightmap_path,
                           "--cols given but the file is not single-column");
      flat.push_back(r.front());
    }
    if (flat.size() % cols != 0)
      throw config_error(heightmap_path,
                         "value count is not a multiple of --cols");
    map.cols = cols;
    map.rows = flat.size() / cols;
    map.heights = std::move(flat);
  }
  save_roughness_profile(out_json, histogram_from_heightmap(map, n_bins));
}

void cmd_synth(const std::string& config_path, const std::string& out_csv,
               std::optional<std::uint64_t> seed_override, int jobs) {
  RunConfig cfg = load_run_config(config_path);
  if (!cfg.synth) throw config_error("/synth", "missing synth section");
  SynthSection& sec = *cfg.synth;
  if (seed_override) sec.plan.seed = *seed_override;

  std::function<double(double)> law;
  if (sec.force_law == "zero") {
    law = [](double) { return 0.0; };
  } else if (sec.force_law == "ideal_metal") {
    const double radius = sec.mtb.radius;
    law = [radius](double d) { return ideal_metal_force(radius, d); };
  } else {
    if (!cfg.force)
      throw config_error("/force",
                         "force_law \"lifshitz\" needs a force section");
    // The table must also cover the jump-to-contact probe, which descends
    // to one nanometer, and the unextended separation d0.
    law = make_lifshitz_spline(cfg, *cfg.force, 0.9e-9,
                               1.05 * sec.mtb.d0_true, jobs);
  }

  const auto records = simulate_dataset(sec.mtb, sec.plan, law);

  CsvTable out;
  out.header = {"sweep_id", "d_pz_m", "v_bias_V", "a_au"};
  for (std::size_t k = 0; k < records.size(); ++k) {
    for (const auto& pt : records[k].points)
      out.rows.push_back({static_cast<double>(k), records[k].d_pz, pt.v_bias,
                          pt.a});
  }
  write_csv(out_csv, out);
}

void cmd_analyze(const std::string& dataset_csv, double radius,
                 const std::string& out_json, const std::string& out_csv) {
  if (!(radius > 0.0))
    throw config_error("--radius", "sphere radius must be > 0");
  const CsvTable table = read_csv(dataset_csv);
  const std::size_t id_col = table.column("sweep_id");
  const std::size_t dpz_col = table.column("d_pz_m");
  const std::size_t v_col = table.column("v_bias_V");
  const std::size_t a_col = table.column("a_au");

  std::map<long long, SweepRecord> by_id;
  for (const auto& row : table.rows) {
    const auto id = static_cast<long long>(row[id_col]);
    auto& rec = by_id[id];
    if (rec.points.empty())
      rec.d_pz = row[dpz_col];
    else if (rec.d_pz != row[dpz_col])
      throw config_error(dataset_csv, "sweep " + std::to_string(id) +
                                          " mixes d_pz values");
    rec.points.push_back({row[v_col], row[a_col]});
  }
  std::vector<SweepRecord> sweeps;
  sweeps.reserve(by_id.size());
  for (auto& [id, rec] : by_id) sweeps.push_back(std::move(rec));

  const CalibrationResult result = analyze_dataset(sweeps, radius);

  json root;
  root["d0_m"] = result.d0;
  root["d0_err_m"] = result.d0_err;
  root["c1_au_per_N"] = result.c1;
  root["c1_err_au_per_N"] = result.c1_err;
  root["v0_per_sweep_V"] = result.v0_per_sweep;
  root["forces"] = json::array();
  for (const auto& s : result.forces)
    root["forces"].push_back({{"d_m", s.d}, {"f_N", s.f}});
  root["warnings"] = result.warnings;
  std::ofstream out(out_json);
  if (!out) throw std::runtime_error("cannot write " + out_json);
  out << root.dump(2) << '\n';

  if (!out_csv.empty()) {
    CsvTable forces;
    forces.header = {"d_m", "f_c_N"};
    for (const auto& s : result.forces) forces.rows.push_back({s.d, s.f});
    write_csv(out_csv, forces);
  }
}

}  // namespace casimir::commands

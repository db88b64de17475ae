#include "casimir/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "casimir/csv.hpp"

namespace casimir {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error(path, std::string("JSON parse error: ") + e.what());
  }
}

double require_number(const json& node, const std::string& path) {
  if (!node.is_number())
    throw config_error(path, "expected a number");
  return node.get<double>();
}

double require_positive(const json& node, const std::string& path) {
  const double v = require_number(node, path);
  if (!(v > 0.0)) throw config_error(path, "must be > 0");
  return v;
}

std::string require_string(const json& node, const std::string& path) {
  if (!node.is_string()) throw config_error(path, "expected a string");
  return node.get<std::string>();
}

const json& require_key(const json& obj, const char* key,
                        const std::string& path) {
  if (!obj.is_object() || !obj.contains(key))
    throw config_error(path + "/" + key, "missing required key");
  return obj.at(key);
}

std::string resolve(const std::string& base_dir, const std::string& rel) {
  fs::path p(rel);
  if (p.is_absolute()) return rel;
  return (fs::path(base_dir) / p).string();
}

OpticalTable load_optical_table(const json& node, const std::string& base_dir,
                                const std::string& path) {
  const std::string csv_path =
      resolve(base_dir, require_string(require_key(node, "table_csv", path),
                                       path + "/table_csv"));
  CsvTable csv;
  try {
    csv = read_csv(csv_path);
  } catch (const std::exception& e) {
    throw config_error(path + "/table_csv", e.what());
  }
  std::size_t omega_col, im_col;
  try {
    omega_col = csv.column("omega_rad_s");
    im_col = csv.column("im_eps");
  } catch (const std::exception& e) {
    throw config_error(path + "/table_csv", e.what());
  }
  std::vector<OpticalRow> rows;
  rows.reserve(csv.rows.size());
  for (const auto& r : csv.rows) rows.push_back({r[omega_col], r[im_col]});

  Extrapolation tail;
  if (node.contains("extrapolation")) {
    const json& ex = node.at("extrapolation");
    const std::string ep = path + "/extrapolation";
    const std::string policy =
        require_string(require_key(ex, "policy", ep), ep + "/policy");
    if (policy == "truncate") {
      tail.policy = TailPolicy::truncate;
    } else if (policy == "drude_tail") {
      tail.policy = TailPolicy::drude_tail;
      tail.omega_p = require_positive(require_key(ex, "omega_p_rad_s", ep),
                                      ep + "/omega_p_rad_s");
      tail.gamma = require_positive(require_key(ex, "gamma_rad_s", ep),
                                    ep + "/gamma_rad_s");
    } else if (policy == "power_law_tail") {
      tail.policy = TailPolicy::power_law_tail;
    } else {
      throw config_error(ep + "/policy", "unknown policy '" + policy + "'");
    }
  }
  try {
    return OpticalTable(std::move(rows), tail);
  } catch (const std::exception& e) {
    throw config_error(path, e.what());
  }
}

DielectricModel load_material(const json& node, const std::string& base_dir,
                              const std::string& path) {
  const std::string type =
      require_string(require_key(node, "type", path), path + "/type");
  try {
    if (type == "vacuum") return DielectricModel::vacuum();
    if (type == "constant") {
      return DielectricModel::constant(
          require_number(require_key(node, "eps", path), path + "/eps"));
    }
    if (type == "drude") {
      return DielectricModel::drude(
          {require_positive(require_key(node, "omega_p_rad_s", path),
                            path + "/omega_p_rad_s"),
           require_positive(require_key(node, "gamma_rad_s", path),
                            path + "/gamma_rad_s")});
    }
    if (type == "oscillators") {
      const json& terms = require_key(node, "terms", path);
      if (!terms.is_array() || terms.empty())
        throw config_error(path + "/terms", "expected a non-empty array");
      OscillatorParams p;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + "/terms/" + std::to_string(i);
        const json& t = terms.at(i);
        OscillatorTerm term;
        term.strength =
            require_positive(require_key(t, "strength", tp), tp + "/strength");
        term.omega0 = require_positive(require_key(t, "omega0_rad_s", tp),
                                       tp + "/omega0_rad_s");
        term.gamma = t.contains("gamma_rad_s")
                         ? require_number(t.at("gamma_rad_s"),
                                          tp + "/gamma_rad_s")
                         : 0.0;
        p.oscillators.push_back(term);
      }
      return DielectricModel::oscillators(std::move(p));
    }
    if (type == "tabulated")
      return DielectricModel::tabulated(load_optical_table(node, base_dir,
                                                           path));
    if (type == "sum") {
      const json& parts = require_key(node, "terms", path);
      if (!parts.is_array() || parts.empty())
        throw config_error(path + "/terms", "expected a non-empty array");
      std::vector<DielectricModel> models;
      for (std::size_t i = 0; i < parts.size(); ++i)
        models.push_back(load_material(parts.at(i), base_dir,
                                       path + "/terms/" + std::to_string(i)));
      return DielectricModel::sum(std::move(models));
    }
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(path, e.what());
  }
  throw config_error(path + "/type", "unknown material type '" + type + "'");
}

std::vector<double> load_separations(const json& node,
                                     const std::string& path) {
  std::vector<double> out;
  if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      out.push_back(require_positive(node.at(i),
                                     path + "/" + std::to_string(i)));
  } else if (node.is_object()) {
    const double lo =
        require_positive(require_key(node, "min_m", path), path + "/min_m");
    const double hi =
        require_positive(require_key(node, "max_m", path), path + "/max_m");
    const double cnt =
        require_positive(require_key(node, "count", path), path + "/count");
    const auto n = static_cast<std::size_t>(cnt);
    if (!(hi > lo)) throw config_error(path, "max_m must exceed min_m");
    if (n < 2) throw config_error(path + "/count", "must be >= 2");
    std::string spacing = "log";
    if (node.contains("spacing"))
      spacing = require_string(node.at("spacing"), path + "/spacing");
    for (std::size_t i = 0; i < n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(n - 1);
      if (spacing == "log")
        out.push_back(lo * std::pow(hi / lo, f));
      else if (spacing == "linear")
        out.push_back(lo + f * (hi - lo));
      else
        throw config_error(path + "/spacing",
                           "unknown spacing '" + spacing + "'");
    }
  } else {
    throw config_error(path, "expected an array or {min_m, max_m, count}");
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1]))
      throw config_error(path, "separations must be strictly increasing");
  return out;
}

std::vector<double> load_value_grid(const json& node, const std::string& path,
                                    const char* lo_key, const char* hi_key,
                                    bool require_positive_values) {
  std::vector<double> out;
  if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      const double v =
          require_number(node.at(i), path + "/" + std::to_string(i));
      if (require_positive_values && !(v > 0.0))
        throw config_error(path + "/" + std::to_string(i), "must be > 0");
      out.push_back(v);
    }
    return out;
  }
  if (!node.is_object())
    throw config_error(path, "expected an array or a range object");
  const double lo = require_number(require_key(node, lo_key, path),
                                   path + "/" + lo_key);
  const double hi = require_number(require_key(node, hi_key, path),
                                   path + "/" + hi_key);
  const double cnt =
      require_positive(require_key(node, "count", path), path + "/count");
  const auto n = static_cast<std::size_t>(cnt);
  if (n < 2) throw config_error(path + "/count", "must be >= 2");
  if (!(hi > lo)) throw config_error(path, "range must be increasing");
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = lo + f * (hi - lo);
    if (require_positive_values && !(v > 0.0))
      throw config_error(path, "grid values must be > 0");
    out.push_back(v);
  }
  return out;
}

}  // namespace

const LayerStack& RunConfig::stack(const std::string& name,
                                   const std::string& json_path) const {
  const auto it = stacks.find(name);
  if (it == stacks.end())
    throw config_error(json_path, "unknown stack '" + name + "'");
  return it->second;
}

const DielectricModel& RunConfig::material(const std::string& name,
                                           const std::string& json_path) const {
  const auto it = materials.find(name);
  if (it == materials.end())
    throw config_error(json_path, "unknown material '" + name + "'");
  return it->second;
}

RunConfig load_run_config(const std::string& path) {
  const json root = load_json(path);
  if (!root.is_object()) throw config_error(path, "top level must be an object");

  RunConfig cfg;
  cfg.base_dir = fs::path(path).parent_path().string();
  if (cfg.base_dir.empty()) cfg.base_dir = ".";

  if (root.contains("include_materials")) {
    const std::string inc = resolve(
        cfg.base_dir,
        require_string(root.at("include_materials"), "/include_materials"));
    const json inc_root = load_json(inc);
    if (!inc_root.is_object() || !inc_root.contains("materials"))
      throw config_error("/include_materials",
                         inc + " has no \"materials\" object");
    const std::string inc_dir = fs::path(inc).parent_path().string();
    for (const auto& [name, node] : inc_root.at("materials").items())
      cfg.materials.emplace(name, load_material(node, inc_dir.empty() ? "." : inc_dir,
                                                "/materials/" + name));
  }

  if (root.contains("materials")) {
    for (const auto& [name, node] : root.at("materials").items()) {
      auto model = load_material(node, cfg.base_dir, "/materials/" + name);
      cfg.materials.insert_or_assign(name, std::move(model));
    }
  }

  if (root.contains("stacks")) {
    for (const auto& [name, node] : root.at("stacks").items()) {
      const std::string sp = "/stacks/" + name;
      const std::string sub = require_string(
          require_key(node, "substrate", sp), sp + "/substrate");
      LayerStack stack{cfg.material(sub, sp + "/substrate"), {}};
      if (node.contains("films")) {
        const json& films = node.at("films");
        if (!films.is_array())
          throw config_error(sp + "/films", "expected an array");
        // Films are listed innermost (next to the substrate) first.
        for (std::size_t i = 0; i < films.size(); ++i) {
          const std::string fp = sp + "/films/" + std::to_string(i);
          const json& f = films.at(i);
          const std::string mat = require_string(
              require_key(f, "material", fp), fp + "/material");
          const double t = require_positive(
              require_key(f, "thickness_m", fp), fp + "/thickness_m");
          stack.films.push_back({cfg.material(mat, fp + "/material"), t});
        }
      }
      cfg.stacks.emplace(name, std::move(stack));
    }
  }

  if (root.contains("geometry")) {
    const json& g = root.at("geometry");
    cfg.radius = require_positive(require_key(g, "radius_m", "/geometry"),
                                  "/geometry/radius_m");
    if (g.contains("separations_m"))
      cfg.separations =
          load_separations(g.at("separations_m"), "/geometry/separations_m");
  }

  if (root.contains("quadrature")) {
    const json& q = root.at("quadrature");
    if (q.contains("rel_tol"))
      cfg.quadrature.rel_tol = require_number(q.at("rel_tol"),
                                              "/quadrature/rel_tol");
    if (q.contains("x_max"))
      cfg.quadrature.x_max = require_number(q.at("x_max"),
                                            "/quadrature/x_max");
    if (q.contains("xi_max_rad_s"))
      cfg.quadrature.xi_max = require_number(q.at("xi_max_rad_s"),
                                             "/quadrature/xi_max_rad_s");
    if (q.contains("max_evals"))
      cfg.quadrature.max_evals = static_cast<std::size_t>(require_positive(
          q.at("max_evals"), "/quadrature/max_evals"));
    if (q.contains("scheme")) {
      const std::string s =
          require_string(q.at("scheme"), "/quadrature/scheme");
      if (s == "gauss_legendre_mapped")
        cfg.quadrature.scheme = QuadScheme::gauss_legendre_mapped;
      else if (s == "tanh_sinh")
        cfg.quadrature.scheme = QuadScheme::tanh_sinh;
      else
        throw config_error("/quadrature/scheme", "unknown scheme '" + s + "'");
    }
    try {
      cfg.quadrature.validate();
    } catch (const std::exception& e) {
      throw config_error("/quadrature", e.what());
    }
  }

  if (root.contains("force")) {
    const json& f = root.at("force");
    ForceSection sec;
    sec.sphere = require_string(require_key(f, "sphere", "/force"),
                                "/force/sphere");
    sec.plate =
        require_string(require_key(f, "plate", "/force"), "/force/plate");
    sec.gap = require_string(require_key(f, "gap", "/force"), "/force/gap");
    // Validate references now so errors surface at load time.
    cfg.stack(sec.sphere, "/force/sphere");
    cfg.stack(sec.plate, "/force/plate");
    cfg.material(sec.gap, "/force/gap");
    if (f.contains("sphere_roughness"))
      sec.sphere_roughness = resolve(
          cfg.base_dir,
          require_string(f.at("sphere_roughness"), "/force/sphere_roughness"));
    if (f.contains("plate_roughness"))
      sec.plate_roughness = resolve(
          cfg.base_dir,
          require_string(f.at("plate_roughness"), "/force/plate_roughness"));
    if (cfg.radius <= 0.0)
      throw config_error("/geometry/radius_m",
                         "required by the force section");
    cfg.force = std::move(sec);
  }

  if (root.contains("synth")) {
    const json& s = root.at("synth");
    SynthSection sec;
    const std::string sp = "/synth";
    auto opt = [&](const char* key, double* dst) {
      if (s.contains(key))
        *dst = require_number(s.at(key), sp + "/" + key);
    };
    opt("k_s_Nm_per_rad", &sec.mtb.k_s);
    opt("lever_arm_m", &sec.mtb.lever_arm);
    opt("c1_true_au_per_N", &sec.mtb.c1_true);
    opt("d0_true_m", &sec.mtb.d0_true);
    opt("v0_true_V", &sec.mtb.v0_true);
    opt("noise_sigma_a_au", &sec.mtb.noise_sigma_a);
    if (s.contains("radius_m"))
      sec.mtb.radius = require_positive(s.at("radius_m"), sp + "/radius_m");
    else if (cfg.radius > 0.0)
      sec.mtb.radius = cfg.radius;
    if (s.contains("rotation_correction")) {
      if (!s.at("rotation_correction").is_boolean())
        throw config_error(sp + "/rotation_correction", "expected a boolean");
      sec.mtb.rotation_correction = s.at("rotation_correction").get<bool>();
    }
    try {
      sec.mtb.validate();
    } catch (const std::exception& e) {
      throw config_error(sp, e.what());
    }

    sec.plan.d_pz_values =
        load_value_grid(require_key(s, "d_pz_values_m", sp),
                        sp + "/d_pz_values_m", "min_m", "max_m", false);
    sec.plan.v_bias_values =
        load_value_grid(require_key(s, "v_bias_values_V", sp),
                        sp + "/v_bias_values_V", "min_V", "max_V", false);
    if (s.contains("seed"))
      sec.plan.seed = static_cast<std::uint64_t>(
          require_number(s.at("seed"), sp + "/seed"));
    if (s.contains("force_law")) {
      sec.force_law = require_string(s.at("force_law"), sp + "/force_law");
      if (sec.force_law != "zero" && sec.force_law != "ideal_metal" &&
          sec.force_law != "lifshitz")
        throw config_error(sp + "/force_law",
                           "expected zero | ideal_metal | lifshitz");
    }
    cfg.synth = std::move(sec);
  }

  return cfg;
}

}  // namespace casimir
